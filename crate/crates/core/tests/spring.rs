use optomech::spring::{
    decoherence_ratio, effective_frequency_and_damping, required_input_power, susceptibility_root, SpringRegime,
};
use optomech::{DiskGeometry, MaterialParams, SpringConfig};
use proptest::prelude::*;
use std::f64::consts::PI;

fn template() -> SpringConfig {
    SpringConfig {
        cavity_length: 0.01,
        finesse: 1e5,
        wavelength: 1e-6,
        detuning: 0.0,
        input_power: 0.0,
        effective_mass: DiskGeometry::uniform(10e-6, 50e-9).mass(&MaterialParams::silicon_nitride()),
        natural_omega: 2.0 * PI * 1e3,
        coupling: None,
    }
}

#[test]
fn linewidth_of_the_example_cavity() {
    assert!((template().kappa() / (2.0 * PI * 150e3) - 1.0).abs() < 0.01);
}

#[test]
fn required_power_reproduces_the_target() {
    let req = required_input_power(1e3, 2.0 * PI * 1e6, &template()).unwrap();
    let cfg = SpringConfig {
        detuning: req.detuning,
        input_power: req.input_power,
        ..template()
    };
    let r = effective_frequency_and_damping(&cfg).unwrap();
    assert_eq!(r.regime, SpringRegime::Dominant);
    assert!((r.omega_eff / (2.0 * PI * 1e6) - 1.0).abs() < 1e-3);
    // the dominant-regime frequency is also the zero of the real susceptibility
    assert!((susceptibility_root(&cfg).unwrap() / r.omega_eff - 1.0).abs() < 0.02);
    let d = decoherence_ratio(&cfg).unwrap();
    assert!((d.n_osc() / 1e3 - 1.0).abs() < 0.05, "{}", d.n_osc());
}

#[test]
fn asymptote_converges_with_detuning() {
    let mut last = f64::INFINITY;
    for f in [20e6, 50e6, 100e6, 300e6, 1e9] {
        let cfg = SpringConfig {
            detuning: 2.0 * PI * f,
            input_power: 1e3,
            ..template()
        };
        let d = decoherence_ratio(&cfg).unwrap();
        let gap = (d.asymptote / d.exact - 1.0).abs();
        assert!(gap < last, "{f}: {gap}");
        last = gap;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn damping_sign_follows_detuning(f in 0.2e6f64..50e6) {
        let blue = SpringConfig { detuning: 2.0 * PI * f, input_power: 1e-12, ..template() };
        let red = SpringConfig { detuning: -2.0 * PI * f, ..blue };
        let b = effective_frequency_and_damping(&blue).unwrap();
        let r = effective_frequency_and_damping(&red).unwrap();
        prop_assert!(b.gamma_eff * r.gamma_eff < 0.0);
    }

    #[test]
    fn power_is_monotone(n in 10.0f64..1e4, f in 0.1e6f64..5e6, dn in 1.01f64..3.0, df in 1.01f64..3.0) {
        let base = required_input_power(n, 2.0 * PI * f, &template()).unwrap().input_power;
        let more_n = required_input_power(n * dn, 2.0 * PI * f, &template()).unwrap().input_power;
        let more_f = required_input_power(n, 2.0 * PI * f * df, &template()).unwrap().input_power;
        prop_assert!(more_n > base && more_f > base);
    }
}

mod support;

use optomech::tether::{characteristic_residual, clamped_pinned_gamma, cm_mode, solve_tether_spectrum};
use optomech::{DiskGeometry, MaterialParams, ModeClass, RigidTetherSystem, TetherGeometry};
use proptest::prelude::*;
use std::f64::consts::PI;
use support::beam_fem_spectrum;

fn system(omega_opt: f64) -> RigidTetherSystem {
    let material = MaterialParams::silicon_nitride();
    RigidTetherSystem::new(
        DiskGeometry::uniform(10e-6, 50e-9).mass(&material),
        TetherGeometry {
            length: 50e-6,
            width: 50e-9,
        },
        material,
        omega_opt,
    )
    .unwrap()
}

const OMEGA_MAX: f64 = 2.0 * PI * 20e6;

#[test]
fn pendulum_frequency_and_mass_ratio() {
    let sys = system(0.0);
    assert!((sys.mass_ratio() / 125.0 - 1.0).abs() < 0.01);
    let modes = solve_tether_spectrum(&sys, OMEGA_MAX).unwrap();
    assert!((modes[0].omega / sys.pendulum_omega() - 1.0).abs() < 0.01);
    assert!((sys.pendulum_omega() / (2.0 * PI * 1.4e3) - 1.0).abs() < 0.1);
}

#[test]
fn spectrum_matches_finite_element_beam() {
    for omega_opt in [0.0, 2.0 * PI * 0.3e6, 2.0 * PI * 1e6, 2.0 * PI * 3e6] {
        let sys = system(omega_opt);
        let roots = solve_tether_spectrum(&sys, OMEGA_MAX).unwrap();
        let fem: Vec<f64> = beam_fem_spectrum(&sys, 240).into_iter().filter(|w| *w < OMEGA_MAX).collect();
        assert_eq!(roots.len(), fem.len(), "omega_opt = {omega_opt:e}");
        for (r, f) in roots.iter().zip(&fem) {
            assert!((r.omega / f - 1.0).abs() < 5e-3, "{} vs {}", r.omega, f);
            assert!(characteristic_residual(r.omega, &sys).unwrap().abs() < 1e-8);
        }
    }
}

#[test]
fn heavy_membrane_limit_is_clamped_pinned() {
    let base = system(0.0);
    let heavy = RigidTetherSystem {
        membrane_mass: base.membrane_mass * 1e9,
        ..base
    };
    let modes = solve_tether_spectrum(&heavy, OMEGA_MAX).unwrap();
    for (n, mode) in modes.iter().skip(1).take(4).enumerate() {
        let g = clamped_pinned_gamma(n + 1);
        assert!(((g.cos() * g.sinh()) - (g.sin() * g.cosh())).abs() < 1e-6 * g.cosh());
        assert!((mode.gamma / g - 1.0).abs() < 1e-6, "{} vs {g}", mode.gamma);
    }
}

#[test]
fn cm_mode_carries_the_membrane() {
    let sys = system(2.0 * PI * 1.275e6);
    let modes = solve_tether_spectrum(&sys, OMEGA_MAX).unwrap();
    let cm = cm_mode(&modes).unwrap();
    assert_eq!(cm.classification, ModeClass::Cm);
    let interior = cm.shape(401).iter().map(|(_, v)| v.abs()).fold(0.0, f64::max);
    assert!(cm.eval(50e-6).abs() >= interior * (1.0 - 1e-9));
    let plateau = 8.0 * sys.mass_ratio();
    assert!(cm.energy_ratio() > plateau / 2.0 && cm.energy_ratio() < plateau * 2.0, "{}", cm.energy_ratio());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn roots_are_polished(f_opt in 0.0f64..5e6) {
        let sys = system(2.0 * PI * f_opt);
        for mode in solve_tether_spectrum(&sys, 2.0 * PI * 10e6).unwrap() {
            prop_assert!(characteristic_residual(mode.omega, &sys).unwrap().abs() < 1e-8);
        }
    }

    #[test]
    fn cm_branch_follows_quadrature_away_from_crossings(f_opt in 0.1e6f64..5e6) {
        let sys = system(2.0 * PI * f_opt);
        let modes = solve_tether_spectrum(&sys, 2.0 * PI * 20e6).unwrap();
        let target = sys.cm_branch_omega();
        let far = (1..12).all(|n| (sys.tether_asymptote(n) - target).abs() > 5.0 * sys.crossing_half_gap(n));
        prop_assume!(far);
        let closest = modes.iter().map(|m| m.omega).min_by(|a, b| (a - target).abs().total_cmp(&(b - target).abs())).unwrap();
        prop_assert!((closest / target - 1.0).abs() < 0.01);
    }
}

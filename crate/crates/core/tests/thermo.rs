use optomech::constants::{thermal_frequency, BOLTZMANN, PLANCK};
use optomech::thermo::{boundary_fraction, n_osc_th, q_thermoelastic, qf_product_limit, thermoelastic_work};
use optomech::{BathParams, DiskGeometry, DiskProblem, IntensityProfile, MaterialParams, OpticalParams};

const DARK: IntensityProfile = IntensityProfile::PlaneWave { i0: 0.0 };

fn natural_mode(m: usize, k: usize, d: f64, material: MaterialParams) -> (DiskGeometry, optomech::ModeSolution) {
    let disk = DiskGeometry::uniform(10e-6, d);
    let p = DiskProblem::new(disk, material, OpticalParams::default());
    let modes = p.modes(&DARK, m, k + 1).unwrap();
    (disk, modes[k].clone())
}

#[test]
fn work_scales_with_expansion_squared() {
    let base = MaterialParams::silicon_nitride();
    let doubled = MaterialParams {
        thermal_expansion_vol: 2.0 * base.thermal_expansion_vol,
        ..base
    };
    let (disk, mode) = natural_mode(2, 0, 50e-9, base);
    let bath = BathParams::default();
    let w1 = thermoelastic_work(&mode, &disk, &base, &bath).unwrap();
    let w2 = thermoelastic_work(&mode, &disk, &doubled, &bath).unwrap();
    assert!((w2 / w1 - 4.0).abs() < 1e-12);
}

#[test]
fn work_scales_with_frequency_and_thickness() {
    // doubling d doubles every natural frequency and keeps the shape, so dW grows as omega d^5 = 2^6
    let mat = MaterialParams::silicon_nitride();
    let bath = BathParams::default();
    let (d1, m1) = natural_mode(2, 0, 50e-9, mat);
    let (d2, m2) = natural_mode(2, 0, 100e-9, mat);
    assert!((m2.omega / m1.omega - 2.0).abs() < 1e-9);
    let w1 = thermoelastic_work(&m1, &d1, &mat, &bath).unwrap();
    let w2 = thermoelastic_work(&m2, &d2, &mat, &bath).unwrap();
    assert!((w2 / w1 - 64.0).abs() < 1e-6 * 64.0);
}

#[test]
fn routes_differ_by_the_boundary_fraction() {
    let mat = MaterialParams::silicon_nitride();
    let bath = BathParams::default();
    for (m, k) in [(2, 0), (0, 1), (3, 0)] {
        let (disk, mode) = natural_mode(m, k, 50e-9, mat);
        let direct = q_thermoelastic(&mode, &disk, &mat, &bath).unwrap() * mode.frequency_hz();
        let closed = qf_product_limit(&mat, 50e-9, &bath, 0.0).unwrap();
        let bf = boundary_fraction(&mode, &disk, &mat).unwrap();
        assert!((direct / closed - (1.0 + bf)).abs() < 1e-6, "({m},{k}) {direct:e} {closed:e} {bf}");
    }
}

#[test]
fn closed_form_anchor_values() {
    let mat = MaterialParams::silicon_nitride();
    let bath = BathParams::default();
    let qf = qf_product_limit(&mat, 50e-9, &bath, 0.0).unwrap();
    assert!((qf / 4e13 - 1.0).abs() < 0.15);
    assert!((thermal_frequency(300.0) / 6e12 - 1.0).abs() < 0.05);
    assert!((thermal_frequency(300.0) - BOLTZMANN * 300.0 / PLANCK).abs() < 1.0);
    let n = n_osc_th(qf, &bath);
    assert!(n > 0.1 && n < 10.0);
}

use approx::assert_relative_eq;
use optomech::params::{intensity_for_trap_frequency, local_trap_frequency, trap_frequency_squared};
use optomech::{BathParams, DiskGeometry, IntensityProfile, MaterialParams, OpticalParams, TetherGeometry};
use proptest::prelude::*;
use serde::{de::DeserializeOwned, Serialize};
use std::fmt::Debug;

fn round_trip<T: Serialize + DeserializeOwned + PartialEq + Debug>(value: &T) {
    let text = serde_json::to_string(value).unwrap();
    let back: T = serde_json::from_str(&text).unwrap();
    assert_eq!(&back, value, "{text}");
}

#[test]
fn parameter_types_round_trip_exactly() {
    round_trip(&MaterialParams::silicon_nitride());
    round_trip(&DiskGeometry::uniform(10e-6, 50e-9));
    round_trip(&DiskGeometry::apodized(1.0 / 3.0 * 1e-5, 30e-9));
    round_trip(&TetherGeometry {
        length: 50e-6,
        width: 50e-9,
    });
    round_trip(&OpticalParams::default());
    round_trip(&BathParams::default());
    round_trip(&IntensityProfile::Gaussian {
        i0: 1.35e11,
        waist: 35e-6,
    });
    round_trip(&IntensityProfile::Numeric {
        radii: vec![0.0, 0.1e-6, std::f64::consts::PI * 1e-6],
        values: vec![1.0, 0.7, 1e-300],
    });
}

#[test]
fn megahertz_trap_intensity() {
    let i = intensity_for_trap_frequency(
        &MaterialParams::silicon_nitride(),
        &OpticalParams::default(),
        2.0 * std::f64::consts::PI * 1e6,
    );
    assert!((i / 1.35e11 - 1.0).abs() < 0.01, "{i:e}");
}

proptest! {
    #[test]
    fn trap_frequency_scales_with_root_intensity(log_i in 6.0f64..13.0, factor in 1.01f64..100.0) {
        let m = MaterialParams::silicon_nitride();
        let o = OpticalParams::default();
        let i = 10f64.powf(log_i);
        let w1 = trap_frequency_squared(&m, &o, i).sqrt();
        let w2 = trap_frequency_squared(&m, &o, factor * i).sqrt();
        assert_relative_eq!(w2 / w1, factor.sqrt(), max_relative = 1e-12);
        assert_relative_eq!(intensity_for_trap_frequency(&m, &o, w1), i, max_relative = 1e-12);
    }

    #[test]
    fn gaussian_trap_follows_the_local_intensity(r in 0.0f64..60e-6, w in 5e-6f64..50e-6) {
        let m = MaterialParams::silicon_nitride();
        let o = OpticalParams::default();
        let beam = IntensityProfile::Gaussian { i0: 1e11, waist: w };
        let expected = trap_frequency_squared(&m, &o, 1e11 * (-2.0 * r * r / (w * w)).exp()).sqrt();
        assert_relative_eq!(local_trap_frequency(&m, &o, &beam, r).unwrap(), expected, max_relative = 1e-12);
    }
}

//! Linear coupling of a membrane mode to a Gaussian readout beam, relative
//! to rigid centre-of-mass motion.
//!
//! `g` is proportional to `∫ exp(-2 r^2 / w^2) zeta dA` over the disk with
//! `max |zeta| = 1`; the zero-point amplitude cancels in `g / g0`.

use crate::error::{require_positive, Result};
use crate::params::DiskGeometry;
use crate::plate::ModeSolution;

/// `g / g0` for a readout beam of waist `readout_waist` concentric with the disk.
///
/// Modes with nodal diameters integrate to zero against the axisymmetric
/// beam, so they return exactly zero.
pub fn coupling_ratio(mode: &ModeSolution, readout_waist: f64, disk: &DiskGeometry) -> Result<f64> {
    require_positive("readout_waist", readout_waist)?;
    disk.validate()?;
    if mode.m != 0 {
        return Ok(0.0);
    }
    let a = disk.radius;
    let (mut num, mut den) = (0.0, 0.0);
    for ((rho, w), f) in mode.grid.quadrature().zip(&mode.profile) {
        let r = rho * a;
        let weight = w * rho * (-2.0 * r * r / (readout_waist * readout_waist)).exp();
        num += weight * f;
        den += weight;
    }
    Ok(num / den)
}

/// `(r, f(r))` on `count` equally spaced radii for plotting the displacement field.
pub fn pinning_profile(mode: &ModeSolution, count: usize) -> Vec<(f64, f64)> {
    mode.sample(count.max(2))
}

/// `|f(a)| / |f(0)|`; large values mean the trap pins the centre.
pub fn rim_to_center_ratio(mode: &ModeSolution) -> f64 {
    let center = mode.eval(0.0).abs();
    let rim = mode.eval(mode.radius()).abs();
    if center == 0.0 {
        f64::INFINITY
    } else {
        rim / center
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{IntensityProfile, MaterialParams, OpticalParams};
    use crate::plate::DiskProblem;

    #[test]
    fn rigid_motion_couples_fully() {
        let disk = DiskGeometry::uniform(25e-6, 30e-9);
        let p = DiskProblem::new(disk, MaterialParams::silicon_nitride(), OpticalParams::default());
        let cm = p.cm_mode(&IntensityProfile::PlaneWave { i0: 1e10 }).unwrap();
        let g = coupling_ratio(&cm, 15e-6, &disk).unwrap();
        assert!((g - 1.0).abs() < 1e-9, "{g}");
        assert!((rim_to_center_ratio(&cm) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn tilted_modes_decouple() {
        let disk = DiskGeometry::uniform(25e-6, 30e-9);
        let p = DiskProblem::new(disk, MaterialParams::silicon_nitride(), OpticalParams::default());
        let tilt = &p.modes(&IntensityProfile::PlaneWave { i0: 0.0 }, 1, 2).unwrap()[1];
        assert_eq!(coupling_ratio(tilt, 15e-6, &disk).unwrap(), 0.0);
    }
}

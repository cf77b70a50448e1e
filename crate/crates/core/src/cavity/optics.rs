//! Mirror and thin-sheet operators acting pointwise on real-space fields.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::field::{Domain, FieldProfile};
use crate::error::{require_positive, Error, Result};
use crate::params::{DiskGeometry, MaterialParams};

/// Spherical mirror with a hard circular edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mirror {
    /// [m]
    pub radius_of_curvature: f64,
    /// Power reflectance.
    pub reflectance: f64,
    /// Radius of the reflecting surface [m].
    pub aperture: f64,
}

impl Mirror {
    pub fn validate(&self) -> Result<()> {
        require_positive("radius_of_curvature", self.radius_of_curvature)?;
        require_positive("mirror_aperture", self.aperture)?;
        if !(self.reflectance > 0.0 && self.reflectance <= 1.0) {
            return Err(Error::invalid(
                "mirror_reflectance",
                format!("must lie in (0, 1], got {}", self.reflectance),
            ));
        }
        if self.aperture > self.radius_of_curvature {
            return Err(Error::invalid("mirror_aperture", "cannot exceed the radius of curvature"));
        }
        Ok(())
    }

    /// Reflection factor at radius `r`.
    ///
    /// A concave mirror shortens the path at radius `r` by twice its sag
    /// `R_c - sqrt(R_c^2 - r^2)`. With fields propagating as `exp(+i k z)`
    /// this is the phase `exp(-2 i k sag)`, which focuses.
    pub fn factor(&self, r: f64, k: f64) -> Complex64 {
        if r > self.aperture {
            return Complex64::new(0.0, 0.0);
        }
        let rc = self.radius_of_curvature;
        // sag written to avoid cancellation for r << R_c
        let sag = r * r / (rc + (rc * rc - r * r).sqrt());
        Complex64::from_polar(self.reflectance.sqrt(), -2.0 * k * sag)
    }
}

/// Reflect a field sampled on a grid that covers the whole mirror.
pub fn mirror_reflect(field: &FieldProfile, mirror: &Mirror) -> Result<FieldProfile> {
    mirror.validate()?;
    if field.domain != Domain::Space {
        return Err(Error::GridMismatch("mirror acts on real-space fields".into()));
    }
    if field.grid.aperture() < mirror.aperture {
        return Err(Error::Configuration(format!(
            "grid aperture {:e} m is smaller than the mirror aperture {:e} m",
            field.grid.aperture(),
            mirror.aperture
        )));
    }
    let k = field.wavenumber();
    let values = field
        .values
        .iter()
        .zip(field.grid.radii())
        .map(|(v, r)| v * mirror.factor(r, k))
        .collect();
    Ok(FieldProfile {
        values,
        ..field.clone()
    })
}

/// Normal-incidence amplitudes of a lossless slab of thickness `d` and index
/// `n`, referenced to the slab's mid-plane.
///
/// With face-referenced amplitudes `r = r_s (1 - e^{2i phi}) / (1 - r_s^2 e^{2i phi})`,
/// `t = (1 - r_s^2) e^{i phi} / (1 - r_s^2 e^{2i phi})`, `r_s = (1 - n)/(1 + n)`,
/// `phi = n k d`, moving both reference planes to the centre multiplies each by
/// `e^{-i k d}`. A vanishing thickness then gives exactly `r = 0`, `t = 1`.
pub fn slab_amplitudes(d: f64, index: f64, k: f64) -> (Complex64, Complex64) {
    if d <= 0.0 {
        return (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
    }
    let rs = (1.0 - index) / (1.0 + index);
    let e2 = Complex64::from_polar(1.0, 2.0 * index * k * d);
    let e1 = Complex64::from_polar(1.0, index * k * d);
    let den = Complex64::new(1.0, 0.0) - rs * rs * e2;
    let shift = Complex64::from_polar(1.0, -k * d);
    let r = rs * (Complex64::new(1.0, 0.0) - e2) / den;
    let t = (1.0 - rs * rs) * e1 / den;
    (r * shift, t * shift)
}

/// Local reflection and transmission of the membrane at radius `r`.
pub fn sheet_amplitudes_at(disk: &DiskGeometry, material: &MaterialParams, wavelength: f64, r: f64) -> (Complex64, Complex64) {
    slab_amplitudes(disk.thickness_at(r), material.refractive_index(), 2.0 * PI / wavelength)
}

/// Split an incident field into reflected and transmitted parts.
pub fn sheet_scatter(
    field: &FieldProfile,
    disk: &DiskGeometry,
    material: &MaterialParams,
) -> Result<(FieldProfile, FieldProfile)> {
    disk.validate()?;
    if field.domain != Domain::Space {
        return Err(Error::GridMismatch("sheet acts on real-space fields".into()));
    }
    let (mut refl, mut trans) = (Vec::with_capacity(field.values.len()), Vec::with_capacity(field.values.len()));
    for (v, r) in field.values.iter().zip(field.grid.radii()) {
        let (rr, tt) = sheet_amplitudes_at(disk, material, field.wavelength, r);
        refl.push(v * rr);
        trans.push(v * tt);
    }
    Ok((
        FieldProfile {
            values: refl,
            ..field.clone()
        },
        FieldProfile {
            values: trans,
            ..field.clone()
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slab_is_lossless() {
        let k = 2.0 * PI / 1e-6;
        for d in [1e-9, 30e-9, 123e-9, 500e-9] {
            let (r, t) = slab_amplitudes(d, 2.0, k);
            assert!((r.norm_sqr() + t.norm_sqr() - 1.0).abs() < 1e-14);
            // symmetric lossless slab: r t* is imaginary, so |r + t| = 1
            assert!(((r + t).norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn thin_sheet_limit() {
        let k = 2.0 * PI / 1e-6;
        let d = 1e-10;
        let (r, _) = slab_amplitudes(d, 2.0, k);
        let x = Complex64::new(0.0, k * d * 3.0 / 2.0);
        let thin = x / (Complex64::new(1.0, 0.0) - x);
        assert!((r - thin).norm() < 1e-3 * thin.norm());
    }

    #[test]
    fn mirror_phase_is_focusing_and_paraxial() {
        let m = Mirror {
            radius_of_curvature: 0.01,
            reflectance: 1.0,
            aperture: 1e-3,
        };
        let k = 2.0 * PI / 1e-6;
        let r = 50e-6;
        let phase = m.factor(r, k).arg();
        // quartic correction k r^4 / (4 R_c^3) is about 1e-5 rad here
        assert!((phase - (-k * r * r / 0.01)).abs() < 2e-5);
        assert_eq!(m.factor(2e-3, k), Complex64::new(0.0, 0.0));
    }
}

//! Scalar paraxial fields on a Hankel grid and their free propagation.

use nalgebra::DVector;
use num_complex::Complex64;
use std::f64::consts::PI;

use super::qdht::{FourierBessel, HankelGrid};
use crate::error::{require_positive, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// Samples of `E(r_n)`.
    Space,
    /// Samples of the Hankel transform `F(nu_m)`.
    Frequency,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Complex field samples together with their grid and wavelength.
#[derive(Debug, Clone)]
pub struct FieldProfile {
    pub grid: HankelGrid,
    pub values: Vec<Complex64>,
    /// [m]
    pub wavelength: f64,
    pub domain: Domain,
}

impl FieldProfile {
    pub fn new(grid: HankelGrid, values: Vec<Complex64>, wavelength: f64) -> Result<Self> {
        require_positive("wavelength", wavelength)?;
        if values.len() != grid.n_points() {
            return Err(Error::GridMismatch(format!(
                "{} samples for a {}-point grid",
                values.len(),
                grid.n_points()
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::invalid("field", "samples must be finite"));
        }
        Ok(Self {
            grid,
            values,
            wavelength,
            domain: Domain::Space,
        })
    }

    pub fn from_fn(grid: HankelGrid, wavelength: f64, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = grid.radii().into_iter().map(f).collect();
        Self::new(grid, values, wavelength)
    }

    /// `exp(-r^2 / w^2)` with unit peak amplitude and flat phase.
    pub fn gaussian(grid: HankelGrid, wavelength: f64, waist: f64) -> Result<Self> {
        require_positive("waist", waist)?;
        Self::from_fn(grid, wavelength, |r| Complex64::new((-r * r / (waist * waist)).exp(), 0.0))
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength
    }

    /// `∫ |E|^2 dA` in sample units.
    pub fn power(&self) -> f64 {
        self.require_space("power").expect("power of a spectrum is not defined");
        self.grid
            .power_weights()
            .iter()
            .zip(&self.values)
            .map(|(w, v)| w * v.norm_sqr())
            .sum()
    }

    pub fn intensity(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }

    /// `sqrt(2 <r^2>)` under `|E|^2`; equals `w` for `exp(-r^2/w^2)`.
    pub fn second_moment_width(&self) -> f64 {
        let weights = self.grid.power_weights();
        let (mut num, mut den) = (0.0, 0.0);
        for ((w, v), r) in weights.iter().zip(&self.values).zip(self.grid.radii()) {
            num += w * v.norm_sqr() * r * r;
            den += w * v.norm_sqr();
        }
        (2.0 * num / den).sqrt()
    }

    pub fn scaled(&self) -> DVector<Complex64> {
        self.grid.to_scaled(&self.values)
    }

    pub fn with_scaled(&self, u: &DVector<Complex64>) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.grid.from_scaled(u),
            wavelength: self.wavelength,
            domain: Domain::Space,
        }
    }

    /// Band-limited interpolant of a real-space field.
    pub fn interpolant(&self) -> Result<FourierBessel> {
        self.require_space("interpolant")?;
        Ok(self.grid.series(&self.grid.apply(&self.scaled())))
    }

    fn require_space(&self, what: &str) -> Result<()> {
        if self.domain == Domain::Space {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!("{what} needs a real-space field")))
        }
    }

    pub fn same_grid(&self, other: &FieldProfile) -> Result<()> {
        if self.grid == other.grid && self.wavelength == other.wavelength {
            Ok(())
        } else {
            Err(Error::GridMismatch("fields live on different grids".into()))
        }
    }
}

/// Forward (`E -> F`) or inverse (`F -> E`) Hankel transform.
pub fn qdht(field: &FieldProfile, direction: Direction) -> Result<FieldProfile> {
    let grid = &field.grid;
    let (expected, produced) = match direction {
        Direction::Forward => (Domain::Space, Domain::Frequency),
        Direction::Inverse => (Domain::Frequency, Domain::Space),
    };
    if field.domain != expected {
        return Err(Error::GridMismatch(format!(
            "{direction:?} transform expects a {expected:?}-domain field"
        )));
    }
    let values = match direction {
        Direction::Forward => grid.spectrum_from_scaled(&grid.apply(&grid.to_scaled(&field.values))),
        Direction::Inverse => grid.from_scaled(&grid.apply(&grid.spectrum_to_scaled(&field.values))),
    };
    Ok(FieldProfile {
        grid: grid.clone(),
        values,
        wavelength: field.wavelength,
        domain: produced,
    })
}

/// Paraxial transfer function `exp(i k z - i (2 pi nu)^2 z / (2k))` on the grid's frequencies.
fn transfer(grid: &HankelGrid, k: f64, z: f64) -> Vec<Complex64> {
    grid.frequencies()
        .iter()
        .map(|nu| {
            let q = 2.0 * PI * nu;
            Complex64::from_polar(1.0, k * z - q * q * z / (2.0 * k))
        })
        .collect()
}

/// Free-space propagation over `z` (either sign) by the angular spectrum on one grid.
pub fn propagate(field: &FieldProfile, z: f64) -> Result<FieldProfile> {
    field.require_space("propagate")?;
    if !z.is_finite() {
        return Err(Error::invalid("z", "propagation distance must be finite"));
    }
    if z == 0.0 {
        return Ok(field.clone());
    }
    let grid = &field.grid;
    let mut spectrum = grid.apply(&field.scaled());
    for (s, h) in spectrum.iter_mut().zip(transfer(grid, field.wavenumber(), z)) {
        *s *= h;
    }
    Ok(field.with_scaled(&grid.apply(&spectrum)))
}

/// Fresnel propagation over `z > 0` onto the conjugate grid of aperture
/// `lambda z V`, where the output samples sit at `rho_m = lambda z nu_m`.
///
/// The quadratic phases on both sides are applied explicitly, so the grid
/// only has to resolve the residual field structure rather than the
/// wavefront curvature.
pub fn fresnel(field: &FieldProfile, z: f64) -> Result<FieldProfile> {
    field.require_space("fresnel")?;
    require_positive("z", z)?;
    let k = field.wavenumber();
    let grid = &field.grid;
    let out_grid = grid.with_aperture(field.wavelength * z * grid.bandwidth())?;
    let mut u = field.scaled();
    for (v, r) in u.iter_mut().zip(grid.radii()) {
        *v *= Complex64::from_polar(1.0, k * r * r / (2.0 * z));
    }
    let mut w = grid.apply(&u);
    let global = Complex64::new(0.0, -1.0) * Complex64::from_polar(1.0, k * z);
    for (v, rho) in w.iter_mut().zip(out_grid.radii()) {
        *v *= global * Complex64::from_polar(1.0, k * rho * rho / (2.0 * z));
    }
    Ok(FieldProfile {
        values: out_grid.from_scaled(&w),
        grid: out_grid,
        wavelength: field.wavelength,
        domain: Domain::Space,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forward_inverse_identity() {
        let grid = HankelGrid::new(256, 200e-6).unwrap();
        let f = FieldProfile::gaussian(grid, 1e-6, 20e-6).unwrap();
        let back = qdht(&qdht(&f, Direction::Forward).unwrap(), Direction::Inverse).unwrap();
        let peak = f.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        for (a, b) in f.values.iter().zip(&back.values) {
            assert!((a - b).norm() < 1e-10 * peak);
        }
    }

    #[test]
    fn wrong_domain_is_rejected() {
        let grid = HankelGrid::new(32, 1e-4).unwrap();
        let f = FieldProfile::gaussian(grid, 1e-6, 2e-5).unwrap();
        assert!(qdht(&f, Direction::Inverse).is_err());
        let spectrum = qdht(&f, Direction::Forward).unwrap();
        assert!(propagate(&spectrum, 1e-3).is_err());
    }

    #[test]
    fn zero_distance_is_identity() {
        let grid = HankelGrid::new(64, 1e-4).unwrap();
        let f = FieldProfile::gaussian(grid, 1e-6, 2e-5).unwrap();
        let g = propagate(&f, 0.0).unwrap();
        assert_eq!(f.values, g.values);
    }

    #[test]
    fn fresnel_matches_angular_spectrum() {
        let w0 = 15e-6;
        let lambda = 1e-6;
        let z = 2e-3;
        let grid = HankelGrid::new(512, 300e-6).unwrap();
        let f = FieldProfile::gaussian(grid, lambda, w0).unwrap();
        let far = fresnel(&f, z).unwrap();
        let zr = PI * w0 * w0 / lambda;
        let w = w0 * (1.0 + (z / zr).powi(2)).sqrt();
        assert!((far.second_moment_width() / w - 1.0).abs() < 1e-3);
        assert!((far.power() / f.power() - 1.0).abs() < 1e-8);
    }
}

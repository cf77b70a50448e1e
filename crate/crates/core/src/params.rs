//! Material, geometry and optical-field descriptions shared by every solver.
//!
//! All quantities are SI base units. Angular frequencies are rad/s.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::constants::SPEED_OF_LIGHT;
use crate::error::{require_positive, Error, Result};

/// Elastic, dielectric and thermal constants of the membrane material.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialParams {
    /// Young's modulus [Pa].
    pub youngs_modulus: f64,
    pub poisson_ratio: f64,
    /// Mass density [kg/m^3].
    pub density: f64,
    /// Relative permittivity (real, lossless).
    pub dielectric_constant: f64,
    /// Heat capacity per unit volume [J/(m^3 K)].
    pub heat_capacity_vol: f64,
    /// Thermal conductivity [W/(m K)].
    pub thermal_conductivity: f64,
    /// Volumetric thermal expansion coefficient [1/K].
    pub thermal_expansion_vol: f64,
}

impl MaterialParams {
    /// Stoichiometric silicon nitride.
    pub const fn silicon_nitride() -> Self {
        Self {
            youngs_modulus: 270e9,
            poisson_ratio: 0.25,
            density: 2.7e3,
            dielectric_constant: 4.0,
            heat_capacity_vol: 2.0e6,
            thermal_conductivity: 20.0,
            thermal_expansion_vol: 4.8e-6,
        }
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("youngs_modulus", self.youngs_modulus)?;
        if !(self.poisson_ratio > 0.0 && self.poisson_ratio < 0.5) {
            return Err(Error::invalid(
                "poisson_ratio",
                format!("must lie in (0, 0.5), got {}", self.poisson_ratio),
            ));
        }
        require_positive("density", self.density)?;
        if !(self.dielectric_constant > 1.0) {
            return Err(Error::invalid(
                "dielectric_constant",
                format!("must exceed 1, got {}", self.dielectric_constant),
            ));
        }
        require_positive("heat_capacity_vol", self.heat_capacity_vol)?;
        require_positive("thermal_conductivity", self.thermal_conductivity)?;
        if !(self.thermal_expansion_vol >= 0.0) {
            return Err(Error::invalid(
                "thermal_expansion_vol",
                format!("must be non-negative, got {}", self.thermal_expansion_vol),
            ));
        }
        Ok(())
    }

    /// Refractive index `sqrt(eps)`.
    pub fn refractive_index(&self) -> f64 {
        self.dielectric_constant.sqrt()
    }

    /// Bending-stiffness prefactor `E / (12 (1 - sigma^2))`.
    pub fn plate_modulus(&self) -> f64 {
        self.youngs_modulus / (12.0 * (1.0 - self.poisson_ratio * self.poisson_ratio))
    }
}

impl Default for MaterialParams {
    fn default() -> Self {
        Self::silicon_nitride()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ThicknessProfile {
    Uniform { d: f64 },
    /// `d(r) = d0 (1 - (r/a)^2)^2`, vanishing at the rim.
    Apodized { d0: f64 },
}

impl ThicknessProfile {
    pub fn max_thickness(&self) -> f64 {
        match *self {
            ThicknessProfile::Uniform { d } => d,
            ThicknessProfile::Apodized { d0 } => d0,
        }
    }

    /// Thickness at normalized radius `rho = r/a`; zero outside the disk.
    pub fn at_normalized(&self, rho: f64) -> f64 {
        if !(0.0..=1.0).contains(&rho.abs()) {
            return 0.0;
        }
        match *self {
            ThicknessProfile::Uniform { d } => d,
            ThicknessProfile::Apodized { d0 } => {
                let s = 1.0 - rho * rho;
                d0 * s * s
            }
        }
    }

    pub fn is_uniform(&self) -> bool {
        matches!(self, ThicknessProfile::Uniform { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskGeometry {
    pub radius: f64,
    pub thickness: ThicknessProfile,
}

impl DiskGeometry {
    pub fn uniform(radius: f64, d: f64) -> Self {
        Self {
            radius,
            thickness: ThicknessProfile::Uniform { d },
        }
    }

    pub fn apodized(radius: f64, d0: f64) -> Self {
        Self {
            radius,
            thickness: ThicknessProfile::Apodized { d0 },
        }
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("radius", self.radius)?;
        require_positive("thickness", self.thickness.max_thickness())
    }

    /// Thickness `d(r)` [m].
    pub fn thickness_at(&self, r: f64) -> f64 {
        self.thickness.at_normalized(r / self.radius)
    }

    /// Thin-plate validity warning: raised when `d0/a > 0.05`.
    pub fn thin_plate_warning(&self) -> bool {
        self.thickness.max_thickness() / self.radius > 0.05
    }

    pub fn volume(&self) -> f64 {
        let area = PI * self.radius * self.radius;
        match self.thickness {
            ThicknessProfile::Uniform { d } => area * d,
            // integral of (1 - s)^2 ds over [0, 1]
            ThicknessProfile::Apodized { d0 } => area * d0 / 3.0,
        }
    }

    pub fn mass(&self, material: &MaterialParams) -> f64 {
        material.density * self.volume()
    }
}

/// Tether with a square cross-section.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TetherGeometry {
    pub length: f64,
    pub width: f64,
}

impl TetherGeometry {
    pub fn validate(&self) -> Result<()> {
        require_positive("tether.length", self.length)?;
        require_positive("tether.width", self.width)
    }
}

/// Transverse intensity profile of the trapping beam at the membrane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IntensityProfile {
    PlaneWave { i0: f64 },
    /// `I(r) = i0 exp(-2 r^2 / w^2)`.
    Gaussian { i0: f64, waist: f64 },
    /// Samples on an increasing radial grid, linearly interpolated and held
    /// constant beyond the last sample.
    Numeric { radii: Vec<f64>, values: Vec<f64> },
}

impl IntensityProfile {
    pub fn validate(&self) -> Result<()> {
        match self {
            IntensityProfile::PlaneWave { i0 } => non_negative("i0", *i0),
            IntensityProfile::Gaussian { i0, waist } => {
                non_negative("i0", *i0)?;
                require_positive("waist", *waist)
            }
            IntensityProfile::Numeric { radii, values } => {
                if radii.is_empty() || radii.len() != values.len() {
                    return Err(Error::invalid(
                        "intensity",
                        "numeric profile needs equal, nonzero numbers of radii and values",
                    ));
                }
                if radii.windows(2).any(|w| !(w[1] > w[0])) {
                    return Err(Error::invalid("intensity", "radii must be strictly increasing"));
                }
                values.iter().try_for_each(|&v| non_negative("intensity", v))
            }
        }
    }

    /// `I(r)` [W/m^2].
    pub fn at(&self, r: f64) -> Result<f64> {
        let value = match self {
            IntensityProfile::PlaneWave { i0 } => *i0,
            IntensityProfile::Gaussian { i0, waist } => i0 * (-2.0 * r * r / (waist * waist)).exp(),
            IntensityProfile::Numeric { radii, values } => interpolate(radii, values, r),
        };
        non_negative("intensity", value)?;
        Ok(value)
    }

    /// Same shape with every intensity multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        match self {
            IntensityProfile::PlaneWave { i0 } => IntensityProfile::PlaneWave { i0: i0 * factor },
            IntensityProfile::Gaussian { i0, waist } => IntensityProfile::Gaussian {
                i0: i0 * factor,
                waist: *waist,
            },
            IntensityProfile::Numeric { radii, values } => IntensityProfile::Numeric {
                radii: radii.clone(),
                values: values.iter().map(|v| v * factor).collect(),
            },
        }
    }

    /// Largest intensity of the profile.
    pub fn peak(&self) -> f64 {
        match self {
            IntensityProfile::PlaneWave { i0 } | IntensityProfile::Gaussian { i0, .. } => *i0,
            IntensityProfile::Numeric { values, .. } => values.iter().copied().fold(0.0, f64::max),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.peak() == 0.0
    }
}

fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    if x <= xs[0] {
        return ys[0];
    }
    let last = xs.len() - 1;
    if x >= xs[last] {
        return ys[last];
    }
    let hi = xs.partition_point(|&v| v <= x);
    let lo = hi - 1;
    let t = (x - xs[lo]) / (xs[hi] - xs[lo]);
    ys[lo] + t * (ys[hi] - ys[lo])
}

fn non_negative(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("must be non-negative, got {v}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpticalParams {
    /// Vacuum wavelength [m].
    pub wavelength: f64,
}

impl OpticalParams {
    pub fn new(wavelength: f64) -> Result<Self> {
        require_positive("wavelength", wavelength)?;
        Ok(Self { wavelength })
    }

    /// Wavevector `k = 2 pi / lambda` [1/m].
    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength
    }

    /// Optical angular frequency `omega_0 = c k` [rad/s].
    pub fn angular_frequency(&self) -> f64 {
        SPEED_OF_LIGHT * self.wavenumber()
    }
}

impl Default for OpticalParams {
    fn default() -> Self {
        Self { wavelength: 1e-6 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathParams {
    /// [K]
    pub temperature: f64,
}

impl BathParams {
    pub fn new(temperature: f64) -> Result<Self> {
        require_positive("temperature", temperature)?;
        Ok(Self { temperature })
    }
}

impl Default for BathParams {
    fn default() -> Self {
        Self { temperature: 300.0 }
    }
}

/// Squared trap frequency for a thin dielectric sheet at an antinode of
/// intensity `i` [W/m^2]: `2 k^2 I (eps - 1) / (rho c)`.
pub fn trap_frequency_squared(material: &MaterialParams, optics: &OpticalParams, i: f64) -> f64 {
    let k = optics.wavenumber();
    2.0 * k * k * i * (material.dielectric_constant - 1.0) / (material.density * SPEED_OF_LIGHT)
}

/// Intensity that traps the sheet at angular frequency `omega`.
pub fn intensity_for_trap_frequency(material: &MaterialParams, optics: &OpticalParams, omega: f64) -> f64 {
    omega * omega / trap_frequency_squared(material, optics, 1.0)
}

/// Local optical trap frequency `omega_opt(r)` [rad/s].
pub fn local_trap_frequency(
    material: &MaterialParams,
    optics: &OpticalParams,
    intensity: &IntensityProfile,
    r: f64,
) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::invalid("r", format!("radius must be non-negative, got {r}")));
    }
    let i = intensity.at(r)?;
    Ok(trap_frequency_squared(material, optics, i).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_field_gives_zero_trap() {
        let m = MaterialParams::silicon_nitride();
        let w = local_trap_frequency(&m, &OpticalParams::default(), &IntensityProfile::PlaneWave { i0: 0.0 }, 0.0);
        assert_eq!(w.unwrap(), 0.0);
    }

    #[test]
    fn one_megahertz_plane_wave_intensity() {
        let m = MaterialParams::silicon_nitride();
        let o = OpticalParams::default();
        let target = 2.0 * PI * 1e6;
        let i0 = intensity_for_trap_frequency(&m, &o, target);
        // i0 = omega^2 rho c / (2 k^2 (eps - 1)) ~ 1.35e11 W/m^2
        assert!((i0 / 1.35e11 - 1.0).abs() < 0.01, "i0 = {i0}");
        let back = local_trap_frequency(&m, &o, &IntensityProfile::PlaneWave { i0 }, 3e-6).unwrap();
        assert!((back / target - 1.0).abs() < 1e-14);
    }

    #[test]
    fn gaussian_at_waist_matches_attenuated_plane_wave() {
        let m = MaterialParams::silicon_nitride();
        let o = OpticalParams::default();
        let (i0, w) = (2e11, 35e-6);
        let g = local_trap_frequency(&m, &o, &IntensityProfile::Gaussian { i0, waist: w }, w).unwrap();
        let p = local_trap_frequency(&m, &o, &IntensityProfile::PlaneWave { i0: i0 * (-2.0f64).exp() }, 0.0).unwrap();
        assert!((g / p - 1.0).abs() < 1e-14);
    }

    #[test]
    fn negative_samples_are_rejected() {
        let m = MaterialParams::silicon_nitride();
        let prof = IntensityProfile::Numeric {
            radii: vec![0.0, 1e-6],
            values: vec![1.0, -1.0],
        };
        let err = local_trap_frequency(&m, &OpticalParams::default(), &prof, 2e-6).unwrap_err();
        assert!(matches!(err, Error::InvalidInput { .. }));
    }

    #[test]
    fn doubling_intensity_scales_by_root_two() {
        let m = MaterialParams::silicon_nitride();
        let o = OpticalParams::default();
        let a = local_trap_frequency(&m, &o, &IntensityProfile::PlaneWave { i0: 3.3e10 }, 0.0).unwrap();
        let b = local_trap_frequency(&m, &o, &IntensityProfile::PlaneWave { i0: 6.6e10 }, 0.0).unwrap();
        assert!((b / a - 2f64.sqrt()).abs() < 4.0 * f64::EPSILON);
    }

    #[test]
    fn apodized_profile_endpoints() {
        let disk = DiskGeometry::apodized(9e-6, 30e-9);
        assert_eq!(disk.thickness_at(0.0), 30e-9);
        assert_eq!(disk.thickness_at(9e-6), 0.0);
        assert!(!disk.thin_plate_warning());
        assert!(DiskGeometry::uniform(1e-6, 1e-7).thin_plate_warning());
    }

    #[test]
    fn preset_values() {
        let m = MaterialParams::silicon_nitride();
        assert_eq!(m.youngs_modulus, 270e9);
        assert_eq!(m.density, 2700.0);
        assert_eq!(m.heat_capacity_vol, 2.0e6);
        m.validate().unwrap();
    }
}

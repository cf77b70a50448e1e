//! Thermoelastic dissipation of flexural modes and the coherence limits it sets.
//!
//! Bending a plate compresses one face and stretches the other, so a
//! temperature difference builds up across the thickness and relaxes by heat
//! flow. In the low-frequency limit where the heat equation is quasi-static
//! across the thickness, the work per cycle is
//!
//! ```text
//! dW = pi omega alpha^2 E^2 T / (1080 kappa (1 - s)^2) ∫ d(r)^5 (lap zeta)^2 dA
//! ```
//!
//! For a non-uniform plate the local thickness is substituted pointwise, which
//! assumes heat flows only through the thickness.

use serde::Serialize;
use std::f64::consts::PI;

use crate::constants::{BOLTZMANN, PLANCK};
use crate::error::{require_positive, Error, Result};
use crate::params::{BathParams, DiskGeometry, MaterialParams};
use crate::plate::{laplacian_square_integral, laplacian_strain_energy, strain_energy, ModeSolution};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermoResult {
    /// Work per cycle [J].
    pub delta_w: f64,
    pub q_factor: f64,
    /// [Hz]
    pub qf_product: f64,
    pub n_osc_th: f64,
    /// Thermal relaxation rate across the thickness, `kappa / (c_V d^2)` [1/s].
    pub diffusion_rate: f64,
}

fn work_prefactor(material: &MaterialParams, bath: &BathParams) -> f64 {
    let s = material.poisson_ratio;
    let alpha = material.thermal_expansion_vol;
    let e = material.youngs_modulus;
    PI * alpha * alpha * e * e * bath.temperature / (1080.0 * material.thermal_conductivity * (1.0 - s) * (1.0 - s))
}

/// Energy dissipated per oscillation cycle at the mode's stored amplitude [J].
pub fn thermoelastic_work(
    mode: &ModeSolution,
    disk: &DiskGeometry,
    material: &MaterialParams,
    bath: &BathParams,
) -> Result<f64> {
    material.validate()?;
    require_positive("temperature", bath.temperature)?;
    let curvature = laplacian_square_integral(mode, disk, 5)?;
    Ok(work_prefactor(material, bath) * mode.omega * curvature)
}

/// Closed-form `Q f` limit for a uniform plate of thickness `d` [Hz].
///
/// Obtained from `2 pi U / dW` with `U_mech` approximated by its Laplacian
/// part, so it neglects the edge contribution to the strain energy.
pub fn qf_product_limit(material: &MaterialParams, d: f64, bath: &BathParams, energy_ratio: f64) -> Result<f64> {
    require_positive("thickness", d)?;
    require_positive("temperature", bath.temperature)?;
    if energy_ratio.is_nan() || energy_ratio < 0.0 {
        return Err(Error::invalid("energy_ratio", format!("must be non-negative, got {energy_ratio}")));
    }
    let s = material.poisson_ratio;
    let alpha = material.thermal_expansion_vol;
    let base = 45.0 * material.thermal_conductivity
        / (PI * material.youngs_modulus * d * d * bath.temperature * alpha * alpha)
        * (1.0 - s)
        / (1.0 + s);
    Ok(base * (1.0 + energy_ratio))
}

/// Coherent oscillations before one thermal phonon enters, `Q f h / (2 pi k_B T)`.
pub fn n_osc_th(qf_product: f64, bath: &BathParams) -> f64 {
    qf_product * PLANCK / (2.0 * PI * BOLTZMANN * bath.temperature)
}

/// `Q = 2 pi (U_opt + U_mech) / dW`, `+inf` when the mode does not dissipate.
pub fn q_thermoelastic(
    mode: &ModeSolution,
    disk: &DiskGeometry,
    material: &MaterialParams,
    bath: &BathParams,
) -> Result<f64> {
    let dw = thermoelastic_work(mode, disk, material, bath)?;
    if dw <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(2.0 * PI * (mode.u_opt + mode.u_mech) / dw)
}

/// Relative size of the edge term, `U_mech / U_laplacian - 1`. The closed-form
/// limit differs from the direct route by exactly this factor on a uniform disk.
pub fn boundary_fraction(mode: &ModeSolution, disk: &DiskGeometry, material: &MaterialParams) -> Result<f64> {
    let full = strain_energy(mode, disk, material)?;
    let lap = laplacian_strain_energy(mode, disk, material)?;
    if lap <= 0.0 {
        return Ok(0.0);
    }
    Ok(full / lap - 1.0)
}

pub fn diffusion_rate(material: &MaterialParams, d: f64) -> f64 {
    material.thermal_conductivity / (material.heat_capacity_vol * d * d)
}

/// Full thermoelastic summary for one mode via the direct work integral.
pub fn analyze(mode: &ModeSolution, disk: &DiskGeometry, material: &MaterialParams, bath: &BathParams) -> Result<ThermoResult> {
    let delta_w = thermoelastic_work(mode, disk, material, bath)?;
    let q_factor = q_thermoelastic(mode, disk, material, bath)?;
    let qf_product = q_factor * mode.frequency_hz();
    Ok(ThermoResult {
        delta_w,
        q_factor,
        qf_product,
        n_osc_th: n_osc_th(qf_product, bath),
        diffusion_rate: diffusion_rate(material, disk.thickness.max_thickness()),
    })
}

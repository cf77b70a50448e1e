//! Photon-recoil heating and the combined coherence budget of a trapped disk.

use std::f64::consts::PI;

use super::solver::{mode_volume, solve_default, CavityModeResult, CavitySetup, ModeVolume};
use crate::constants::{HBAR, SPEED_OF_LIGHT};
use crate::error::{require_positive, Error, Result};
use crate::params::{BathParams, DiskGeometry, IntensityProfile, MaterialParams, OpticalParams};
use crate::plate::{DiskProblem, ModeSolution};
use crate::thermo;

/// Quantities entering the recoil estimate for one trapped disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecoilInput {
    /// Disk volume [m^3].
    pub disk_volume: f64,
    /// Cavity mode volume [m^3].
    pub mode_volume: f64,
    /// Energy decay rate [rad/s].
    pub kappa: f64,
    /// Largest antinode intensity in the cavity [W/m^2].
    pub i_max: f64,
    /// Trap frequency [rad/s].
    pub omega_m: f64,
    /// Membrane density [kg/m^3].
    pub density: f64,
}

impl RecoilInput {
    pub fn validate(&self) -> Result<()> {
        require_positive("disk_volume", self.disk_volume)?;
        require_positive("mode_volume", self.mode_volume)?;
        require_positive("kappa", self.kappa)?;
        require_positive("i_max", self.i_max)?;
        require_positive("omega_m", self.omega_m)?;
        require_positive("density", self.density)
    }
}

/// `N_sc = (1/2 pi) (V / V_c) (omega_0 / kappa) omega_m^2 rho c / (k^2 I_max)`.
pub fn recoil_n_osc(input: &RecoilInput, optics: &OpticalParams) -> Result<f64> {
    input.validate()?;
    let k = optics.wavenumber();
    let omega0 = optics.angular_frequency();
    Ok(1.0 / (2.0 * PI) * (input.disk_volume / input.mode_volume) * (omega0 / input.kappa)
        * input.omega_m.powi(2)
        * input.density
        * SPEED_OF_LIGHT
        / (k * k * input.i_max))
}

/// The same number from momentum diffusion.
///
/// Stored energy `U = 2 V_c I_max / c` leaks at `kappa`, giving a photon
/// scattering rate `R = kappa U / (hbar omega_0)`. Each photon kicks by at
/// most `hbar k`, so `d<p^2>/dt = (hbar k)^2 R`, which raises the phonon
/// number at `(hbar k)^2 R / (2 M hbar omega_m)`. `N` is the number of
/// periods per phonon.
pub fn recoil_n_osc_momentum(input: &RecoilInput, optics: &OpticalParams) -> Result<f64> {
    input.validate()?;
    let k = optics.wavenumber();
    let stored = 2.0 * input.mode_volume * input.i_max / SPEED_OF_LIGHT;
    let rate = input.kappa * stored / (HBAR * optics.angular_frequency());
    let mass = input.density * input.disk_volume;
    let jump_rate = (HBAR * k).powi(2) * rate / (2.0 * mass * HBAR * input.omega_m);
    Ok(input.omega_m / (2.0 * PI * jump_rate))
}

/// Parallel sum `(1/n_th + 1/n_sc)^-1`; infinite arguments drop out.
pub fn n_osc_total(n_th: f64, n_sc: f64) -> Result<f64> {
    for (name, v) in [("n_th", n_th), ("n_sc", n_sc)] {
        if !(v > 0.0) {
            return Err(Error::invalid(name, format!("must be positive, got {v}")));
        }
    }
    let inv = 1.0 / n_th + 1.0 / n_sc;
    Ok(if inv == 0.0 { f64::INFINITY } else { 1.0 / inv })
}

/// Standing-wave intensity at the membrane per watt of one-way power, as a
/// radial profile covering the disk.
pub fn membrane_intensity_profile(result: &CavityModeResult, disk: &DiskGeometry) -> IntensityProfile {
    let radii = result.field.grid.radii();
    let values = result.membrane_intensity();
    let keep = radii.iter().take_while(|&&r| r <= disk.radius).count() + 1;
    let keep = keep.min(radii.len());
    let mut r: Vec<f64> = vec![0.0];
    let mut v: Vec<f64> = vec![values[0]];
    r.extend_from_slice(&radii[..keep]);
    v.extend_from_slice(&values[..keep]);
    IntensityProfile::Numeric { radii: r, values: v }
}

/// One-way power that places the CM mode of the trapped disk at `omega_m`,
/// with the resulting CM mode.
pub fn trap_power(
    result: &CavityModeResult,
    disk: &DiskGeometry,
    material: &MaterialParams,
    optics: &OpticalParams,
    omega_m: f64,
) -> Result<(f64, ModeSolution)> {
    let shape = membrane_intensity_profile(result, disk);
    let problem = DiskProblem::new(*disk, *material, *optics);
    let (scaled, cm) = problem.cm_mode_at_frequency(&shape, omega_m)?;
    Ok((scaled.peak() / shape.peak(), cm))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceBudget {
    pub disk_radius: f64,
    pub omega_m: f64,
    pub finesse: f64,
    pub kappa: f64,
    /// Second-moment width of the mode at the membrane [m].
    pub waist: f64,
    pub mode_volume: ModeVolume,
    /// One-way power for the requested trap frequency [W].
    pub power: f64,
    /// [W/m^2]
    pub i_max: f64,
    pub qf_product: f64,
    pub n_th: f64,
    pub n_sc: f64,
    /// Recoil number from the momentum-diffusion route.
    pub n_sc_momentum: f64,
    pub n_tot: f64,
    /// `k V F / w0^2` with the empty-cavity waist.
    pub scaling_estimate: f64,
}

/// Solve the cavity with the membrane in place, trap the disk at `omega_m`
/// and combine thermoelastic and recoil limits.
pub fn coherence_budget(setup: &CavitySetup, bath: &BathParams, omega_m: f64) -> Result<CoherenceBudget> {
    require_positive("omega_m", omega_m)?;
    let membrane = setup
        .membrane
        .ok_or_else(|| Error::Configuration("coherence budget needs a membrane".into()))?;
    let optics = OpticalParams::new(setup.wavelength)?;
    let result = solve_default(setup)?;
    if !(result.kappa > 0.0) {
        return Err(Error::Infeasible(
            "cavity is lossless, so the recoil limit is unbounded".into(),
        ));
    }
    let volume = mode_volume(setup, &result)?;
    let (power, cm) = trap_power(&result, &membrane.disk, &membrane.material, &optics, omega_m)?;
    let membrane_peak = result.membrane_intensity().into_iter().fold(0.0, f64::max);
    let i_max = power * membrane_peak * volume.peak_ratio;
    let thermo = thermo::analyze(&cm, &membrane.disk, &membrane.material, bath)?;
    let input = RecoilInput {
        disk_volume: membrane.disk.volume(),
        mode_volume: volume.volume,
        kappa: result.kappa,
        i_max,
        omega_m,
        density: membrane.material.density,
    };
    let n_sc = recoil_n_osc(&input, &optics)?;
    let n_sc_momentum = recoil_n_osc_momentum(&input, &optics)?;
    let w0 = setup.empty_waist();
    Ok(CoherenceBudget {
        disk_radius: membrane.disk.radius,
        omega_m,
        finesse: result.finesse,
        kappa: result.kappa,
        waist: result.waist(),
        mode_volume: volume,
        power,
        i_max,
        qf_product: thermo.qf_product,
        n_th: thermo.n_osc_th,
        n_sc,
        n_sc_momentum,
        n_tot: n_osc_total(thermo.n_osc_th, n_sc)?,
        scaling_estimate: optics.wavenumber() * membrane.disk.volume() * result.finesse / (w0 * w0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn input() -> RecoilInput {
        RecoilInput {
            disk_volume: 1e-17,
            mode_volume: 1e-12,
            kappa: 1e5,
            i_max: 1e10,
            omega_m: 2.0 * PI * 5e5,
            density: 2700.0,
        }
    }

    #[test]
    fn both_recoil_routes_agree() {
        let o = OpticalParams::default();
        let a = recoil_n_osc(&input(), &o).unwrap();
        let b = recoil_n_osc_momentum(&input(), &o).unwrap();
        assert!((a / b - 1.0).abs() < 1e-12);
    }

    #[test]
    fn recoil_scales_with_linewidth() {
        let o = OpticalParams::default();
        let a = recoil_n_osc(&input(), &o).unwrap();
        let b = recoil_n_osc(&RecoilInput { kappa: 0.5e5, ..input() }, &o).unwrap();
        assert!((b / a - 2.0).abs() < 1e-12);
    }

    #[test]
    fn parallel_sum() {
        assert_eq!(n_osc_total(f64::INFINITY, 7.0).unwrap(), 7.0);
        assert!((n_osc_total(4.0, 4.0).unwrap() - 2.0).abs() < 1e-15);
        assert!(n_osc_total(0.0, 1.0).is_err());
    }
}

//! Dynamic (cavity back-action) optical spring, for comparison with static trapping.
//!
//! A mechanical coordinate linearly shifts the frequency of a driven, lossy
//! cavity. Eliminating the cavity field gives the mechanical susceptibility
//!
//! ```text
//! 1/chi(w) = w_m^2 - w^2 + 16 w_m delta Omega_m^2 / (4 delta^2 + (kappa - 2 i w)^2)
//! ```
//!
//! with `Omega_m = g |alpha|`, `alpha = i Omega_L / (kappa/2 - i delta)` and
//! `g = w' sqrt(hbar / (2 m w_m))`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::constants::{HBAR, SPEED_OF_LIGHT};
use crate::error::{require_positive, Error, Result};
use crate::roots::brent;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpringConfig {
    /// [m]
    pub cavity_length: f64,
    pub finesse: f64,
    /// [m]
    pub wavelength: f64,
    /// Pump detuning from the cavity resonance [rad/s].
    pub detuning: f64,
    /// [W]
    pub input_power: f64,
    /// [kg]
    pub effective_mass: f64,
    /// Bare mechanical frequency [rad/s].
    pub natural_omega: f64,
    /// Cavity frequency shift per displacement [rad/(s m)]; `omega_0 / L` when absent.
    pub coupling: Option<f64>,
}

impl SpringConfig {
    pub fn validate(&self) -> Result<()> {
        require_positive("cavity_length", self.cavity_length)?;
        require_positive("finesse", self.finesse)?;
        require_positive("wavelength", self.wavelength)?;
        require_positive("effective_mass", self.effective_mass)?;
        require_positive("natural_omega", self.natural_omega)?;
        if !(self.input_power >= 0.0 && self.input_power.is_finite()) {
            return Err(Error::invalid("input_power", format!("must be non-negative, got {}", self.input_power)));
        }
        if !self.detuning.is_finite() {
            return Err(Error::invalid("detuning", "must be finite"));
        }
        if let Some(c) = self.coupling {
            require_positive("coupling", c)?;
        }
        Ok(())
    }

    /// Cavity energy decay rate `pi c / (F L)` [rad/s].
    pub fn kappa(&self) -> f64 {
        cavity_linewidth(self.cavity_length, self.finesse)
    }

    pub fn laser_omega(&self) -> f64 {
        2.0 * PI * SPEED_OF_LIGHT / self.wavelength
    }

    pub fn coupling(&self) -> f64 {
        self.coupling.unwrap_or(self.laser_omega() / self.cavity_length)
    }

    /// Zero-point amplitude [m].
    pub fn z_zp(&self) -> f64 {
        (HBAR / (2.0 * self.effective_mass * self.natural_omega)).sqrt()
    }

    pub fn g(&self) -> f64 {
        self.coupling() * self.z_zp()
    }

    /// Drive amplitude for perfect in-coupling [rad/s].
    pub fn omega_l(&self) -> f64 {
        (self.kappa() * self.input_power / (2.0 * HBAR * self.laser_omega())).sqrt()
    }

    /// Steady-state intracavity amplitude.
    pub fn alpha(&self) -> Complex64 {
        Complex64::new(0.0, self.omega_l()) / Complex64::new(0.5 * self.kappa(), -self.detuning)
    }

    pub fn omega_m_drive(&self) -> f64 {
        self.g() * self.alpha().norm()
    }
}

pub fn cavity_linewidth(length: f64, finesse: f64) -> f64 {
    PI * SPEED_OF_LIGHT / (finesse * length)
}

pub fn inverse_susceptibility(omega: f64, cfg: &SpringConfig) -> Complex64 {
    let wm = cfg.natural_omega;
    let big = cfg.omega_m_drive();
    let d = cfg.detuning;
    let den = Complex64::new(4.0 * d * d, 0.0) + Complex64::new(cfg.kappa(), -2.0 * omega).powi(2);
    Complex64::new(wm * wm - omega * omega, 0.0) + 16.0 * wm * d * big * big / den
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SpringRegime {
    /// The optical spring dominates and `2 Omega_m sqrt(w_m / delta)` is used.
    Dominant,
    /// Static-limit stiffness `sqrt(w_m^2 + 16 w_m delta Omega_m^2 / (4 delta^2 + kappa^2))`.
    General,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpringResponse {
    /// [rad/s]
    pub omega_eff: f64,
    /// Anti-Stokes minus Stokes rate [1/s]; negative means anti-damping.
    pub gamma_eff: f64,
    /// Anti-Stokes plus Stokes rate [1/s].
    pub gamma_d: f64,
    pub regime: SpringRegime,
}

pub fn effective_frequency_and_damping(cfg: &SpringConfig) -> Result<SpringResponse> {
    cfg.validate()?;
    let wm = cfg.natural_omega;
    let big = cfg.omega_m_drive();
    let d = cfg.detuning;
    let kappa = cfg.kappa();
    let dominant = if d > 0.0 { 2.0 * big * (wm / d).sqrt() } else { 0.0 };
    let (omega_eff, regime) = if dominant > wm {
        (dominant, SpringRegime::Dominant)
    } else {
        let w2 = wm * wm + 16.0 * wm * d * big * big / (4.0 * d * d + kappa * kappa);
        if w2 <= 0.0 {
            return Err(Error::Infeasible(format!(
                "optical spring removes all restoring force (omega_eff^2 = {w2:e})"
            )));
        }
        (w2.sqrt(), SpringRegime::General)
    };
    let lorentz = |x: f64| 1.0 / (0.25 * kappa * kappa + x * x);
    let anti_stokes = lorentz(d + omega_eff);
    let stokes = lorentz(d - omega_eff);
    let pre = big * big * kappa * wm / omega_eff;
    Ok(SpringResponse {
        omega_eff,
        gamma_eff: pre * (anti_stokes - stokes),
        gamma_d: pre * (anti_stokes + stokes),
        regime,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecoherenceRatio {
    /// `omega_eff / Gamma_d` from the full rate sum.
    pub exact: f64,
    /// Large-detuning limit `2 delta / kappa`.
    pub asymptote: f64,
}

impl DecoherenceRatio {
    /// Coherent oscillations `omega_eff / (2 pi Gamma_d)`.
    pub fn n_osc(&self) -> f64 {
        self.exact / (2.0 * PI)
    }
}

pub fn decoherence_ratio(cfg: &SpringConfig) -> Result<DecoherenceRatio> {
    let r = effective_frequency_and_damping(cfg)?;
    Ok(DecoherenceRatio {
        exact: r.omega_eff / r.gamma_d,
        asymptote: 2.0 * cfg.detuning / cfg.kappa(),
    })
}

/// Positive real frequency at which `Re 1/chi` vanishes [rad/s].
pub fn susceptibility_root(cfg: &SpringConfig) -> Result<f64> {
    cfg.validate()?;
    let re = |w: f64| inverse_susceptibility(w, cfg).re;
    if re(0.0) <= 0.0 {
        return Err(Error::Infeasible("no restoring force at zero frequency".into()));
    }
    let mut hi = cfg.natural_omega.max(1.0);
    let mut tries = 0;
    while re(hi) > 0.0 {
        hi *= 2.0;
        tries += 1;
        if tries > 200 {
            return Err(Error::numerical("susceptibility_root", "no sign change found", re(hi)));
        }
    }
    brent(re, 0.0, hi, 1e-12 * hi, 300)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerRequirement {
    /// [W]
    pub input_power: f64,
    /// Detuning fixed by the coherence target, `pi kappa N` [rad/s].
    pub detuning: f64,
    pub kappa: f64,
}

impl PowerRequirement {
    /// Input intensity when focused to a disk of radius `radius` [W/m^2].
    pub fn intensity_over(&self, radius: f64) -> f64 {
        self.input_power / (PI * radius * radius)
    }
}

/// Input power reaching `target_omega_eff` with `target_n_osc` coherent
/// oscillations, using the large-detuning relation `N = delta / (pi kappa)`
/// and inverting the static-limit stiffness for `Omega_m^2`.
pub fn required_input_power(
    target_n_osc: f64,
    target_omega_eff: f64,
    template: &SpringConfig,
) -> Result<PowerRequirement> {
    require_positive("target_n_osc", target_n_osc)?;
    require_positive("target_omega_eff", target_omega_eff)?;
    template.validate()?;
    let wm = template.natural_omega;
    if target_omega_eff <= wm {
        return Err(Error::Infeasible(format!(
            "target frequency {target_omega_eff:e} rad/s does not exceed the bare frequency {wm:e} rad/s"
        )));
    }
    let kappa = template.kappa();
    let delta = PI * kappa * target_n_osc;
    let shift = target_omega_eff * target_omega_eff - wm * wm;
    let big2 = shift * (4.0 * delta * delta + kappa * kappa) / (16.0 * wm * delta);
    // Omega_m^2 = g^2 Omega_L^2 / (kappa^2/4 + delta^2), Omega_L^2 = kappa P / (2 hbar w_L)
    let g = template.coupling() * template.z_zp();
    let omega_l2 = big2 * (0.25 * kappa * kappa + delta * delta) / (g * g);
    let power = omega_l2 * 2.0 * HBAR * template.laser_omega() / kappa;
    Ok(PowerRequirement {
        input_power: power,
        detuning: delta,
        kappa,
    })
}

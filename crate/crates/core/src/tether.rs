//! A rigid, optically trapped membrane of mass `M` held by a clamped
//! Euler–Bernoulli tether of square cross-section.
//!
//! With `phi(x)` the tether deflection (`x = 0` clamped, `x = L` attached to
//! the membrane), `k = beta sqrt(omega)`, `beta = (12 rho / (E b^2))^(1/4)`
//! and `gamma = k L`, the clamped end and the moment-free joint give
//! `phi = c1 (sin kx - sinh kx) + c2 (cos kx - cosh kx)` with
//! `c1 : c2 = (cos gamma + cosh gamma) : -(sin gamma + sinh gamma)`. Shear
//! balance against the trapped mass then yields
//!
//! ```text
//! M (omega^2 - omega_opt^2)(cos g sinh g - sin g cosh g) + (E b^4 beta^3 omega^(3/2) / 12)(1 + cos g cosh g) = 0
//! ```
//!
//! Dividing by `M omega^2 cosh g` gives the bounded form used here,
//!
//! ```text
//! (1 - omega_opt^2 / omega^2)(cos g tanh g - sin g) + (m_t / (M g))(sech g + cos g) = 0.
//! ```

use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{require_positive, Error, Result};
use crate::params::{MaterialParams, TetherGeometry};
use crate::roots::brent;
use crate::special::gauss_legendre;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RigidTetherSystem {
    /// [kg]
    pub membrane_mass: f64,
    pub tether: TetherGeometry,
    pub material: MaterialParams,
    /// [rad/s]
    pub omega_opt: f64,
}

impl RigidTetherSystem {
    pub fn new(membrane_mass: f64, tether: TetherGeometry, material: MaterialParams, omega_opt: f64) -> Result<Self> {
        let sys = Self {
            membrane_mass,
            tether,
            material,
            omega_opt,
        };
        sys.validate()?;
        Ok(sys)
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("membrane_mass", self.membrane_mass)?;
        self.tether.validate()?;
        self.material.validate()?;
        if !(self.omega_opt >= 0.0 && self.omega_opt.is_finite()) {
            return Err(Error::invalid("omega_opt", format!("must be non-negative, got {}", self.omega_opt)));
        }
        Ok(())
    }

    pub fn with_omega_opt(mut self, omega_opt: f64) -> Self {
        self.omega_opt = omega_opt;
        self
    }

    pub fn tether_mass(&self) -> f64 {
        let b = self.tether.width;
        self.material.density * b * b * self.tether.length
    }

    pub fn mass_ratio(&self) -> f64 {
        self.membrane_mass / self.tether_mass()
    }

    /// `(12 rho / (E b^2))^(1/4)` [s^(1/2)/m].
    pub fn beta(&self) -> f64 {
        let b = self.tether.width;
        (12.0 * self.material.density / (self.material.youngs_modulus * b * b)).powf(0.25)
    }

    /// Bending stiffness `E I` with `I = b^4 / 12` [N m^2].
    pub fn flexural_rigidity(&self) -> f64 {
        self.material.youngs_modulus * self.tether.width.powi(4) / 12.0
    }

    pub fn gamma(&self, omega: f64) -> f64 {
        self.beta() * self.tether.length * omega.sqrt()
    }

    pub fn omega_from_gamma(&self, gamma: f64) -> f64 {
        let s = gamma / (self.beta() * self.tether.length);
        s * s
    }

    /// Untrapped pendulum frequency `sqrt(E b^4 / (4 M L^3))` [rad/s].
    pub fn pendulum_omega(&self) -> f64 {
        let b = self.tether.width;
        (self.material.youngs_modulus * b.powi(4) / (4.0 * self.membrane_mass * self.tether.length.powi(3))).sqrt()
    }

    /// Expected centre-of-mass branch `sqrt(omega_p^2 + omega_opt^2)`.
    pub fn cm_branch_omega(&self) -> f64 {
        self.pendulum_omega().hypot(self.omega_opt)
    }

    /// `n`-th tether resonance in the infinite-mass limit (`tan g = tanh g`), n >= 1.
    pub fn tether_asymptote(&self, n: usize) -> f64 {
        self.omega_from_gamma(clamped_pinned_gamma(n))
    }

    /// Estimated half-width of the avoided crossing at the `n`-th asymptote.
    pub fn crossing_half_gap(&self, n: usize) -> f64 {
        let g = clamped_pinned_gamma(n);
        self.omega_from_gamma(g) * (0.5 / self.mass_ratio()).sqrt() / g
    }
}

/// `n`-th positive root of `tan g = tanh g`.
pub fn clamped_pinned_gamma(n: usize) -> f64 {
    assert!(n >= 1, "tether resonances are numbered from 1");
    let guess = PI * (n as f64 + 0.25);
    brent(|g| g.sin() - g.cos() * g.tanh(), guess - 0.5, guess + 0.5, 1e-15, 200)
        .expect("tan = tanh has one root per branch")
}

/// Bounded characteristic function; its zeros are the eigenfrequencies.
pub fn characteristic_residual(omega: f64, sys: &RigidTetherSystem) -> Result<f64> {
    require_positive("omega", omega)?;
    Ok(residual_in_gamma(sys.gamma(omega), sys))
}

fn residual_in_gamma(g: f64, sys: &RigidTetherSystem) -> f64 {
    let omega = sys.omega_from_gamma(g);
    let w = sys.omega_opt / omega;
    let (s, c) = g.sin_cos();
    let sech = if g > 700.0 { 0.0 } else { g.cosh().recip() };
    (1.0 - w * w) * (c * g.tanh() - s) + (1.0 / (sys.mass_ratio() * g)) * (sech + c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ModeClass {
    /// Membrane oscillating in the trap with the tether following.
    Cm,
    /// Predominantly the `n`-th tether resonance.
    Tether(usize),
    /// Hybridized near an avoided crossing.
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TetherMode {
    /// [rad/s]
    pub omega: f64,
    pub gamma: f64,
    /// Coefficients of `sin kx` and `cos kx`, scaled with the chosen normalization.
    pub coefficients: (f64, f64),
    pub classification: ModeClass,
    /// Optical energy of the membrane at the mode's normalization [J].
    pub u_opt: f64,
    /// Tether strain energy [J].
    pub u_mech: f64,
    length: f64,
    k: f64,
    scale: f64,
}

impl TetherMode {
    /// Deflection `phi(x)`, `0 <= x <= L`.
    pub fn eval(&self, x: f64) -> f64 {
        self.scale * shape_parts(self.gamma, self.k, self.length, x).0
    }

    pub fn slope(&self, x: f64) -> f64 {
        self.scale * shape_parts(self.gamma, self.k, self.length, x).1
    }

    pub fn curvature(&self, x: f64) -> f64 {
        self.scale * shape_parts(self.gamma, self.k, self.length, x).2
    }

    pub fn shape(&self, count: usize) -> Vec<(f64, f64)> {
        (0..count)
            .map(|i| {
                let x = self.length * i as f64 / (count - 1).max(1) as f64;
                (x, self.eval(x))
            })
            .collect()
    }

    pub fn energy_ratio(&self) -> f64 {
        tether_energy_ratio(self)
    }

    pub fn frequency_hz(&self) -> f64 {
        self.omega / (2.0 * PI)
    }
}

/// `(phi, phi', phi'')` before normalization, written so that no term grows
/// like `e^(gamma)`.
fn shape_parts(g: f64, k: f64, length: f64, x: f64) -> (f64, f64, f64) {
    let (sg, cg) = g.sin_cos();
    let eg = (-g).exp();
    let c1 = cg * eg + 0.5 * (1.0 + eg * eg);
    let c2 = -(sg * eg + 0.5 * (1.0 - eg * eg));
    let grow = -0.5 * (cg - sg + eg) * (k * (x - length)).exp();
    let decay = 0.5 * ((sg + cg) * eg + 1.0) * (-k * x).exp();
    let (s, c) = (k * x).sin_cos();
    let phi = c1 * s + c2 * c + grow + decay;
    let dphi = k * (c1 * c - c2 * s + grow - decay);
    let ddphi = k * k * (-c1 * s - c2 * c + grow + decay);
    (phi, dphi, ddphi)
}

const SHAPE_SCAN: usize = 2001;

/// Mode shape, energies and classification at a solved eigenfrequency.
pub fn tether_mode_shape(omega: f64, sys: &RigidTetherSystem) -> Result<TetherMode> {
    require_positive("omega", omega)?;
    sys.validate()?;
    let length = sys.tether.length;
    let gamma = sys.gamma(omega);
    let k = gamma / length;
    let tip = shape_parts(gamma, k, length, length).0;
    let peak = (0..SHAPE_SCAN)
        .map(|i| shape_parts(gamma, k, length, length * i as f64 / (SHAPE_SCAN - 1) as f64).0.abs())
        .fold(0.0, f64::max);
    let scale = if tip.abs() > 1e-6 * peak { 1.0 / tip } else { 1.0 / peak };
    let (sg, cg) = gamma.sin_cos();
    let eg = (-gamma).exp();
    let coefficients = (
        scale * (cg * eg + 0.5 * (1.0 + eg * eg)),
        -scale * (sg * eg + 0.5 * (1.0 - eg * eg)),
    );

    let mut mode = TetherMode {
        omega,
        gamma,
        coefficients,
        classification: ModeClass::Cm,
        u_opt: 0.0,
        u_mech: 0.0,
        length,
        k,
        scale,
    };
    mode.u_opt = 0.5 * sys.membrane_mass * sys.omega_opt * sys.omega_opt * mode.eval(length).powi(2);
    mode.u_mech = 0.5 * sys.flexural_rigidity() * curvature_square_integral(&mode);
    mode.classification = classify(omega, sys);
    Ok(mode)
}

fn curvature_square_integral(mode: &TetherMode) -> f64 {
    let panels = (4.0 * mode.gamma).ceil().max(8.0) as usize;
    let (nodes, weights) = gauss_legendre(10, 0.0, 1.0);
    let h = mode.length / panels as f64;
    let mut acc = 0.0;
    for p in 0..panels {
        for (t, w) in nodes.iter().zip(&weights) {
            let c = mode.curvature((p as f64 + t) * h);
            acc += w * h * c * c;
        }
    }
    acc
}

/// Mixed when both the mode and the trap frequency lie within five
/// half-gaps of the same tether asymptote. Otherwise the label goes to
/// whichever of the nearest asymptote and the expected CM branch is closer.
fn classify(omega: f64, sys: &RigidTetherSystem) -> ModeClass {
    let n = nearest_asymptote(omega, sys);
    let wn = sys.tether_asymptote(n);
    let gap = sys.crossing_half_gap(n);
    if (omega - wn).abs() < 5.0 * gap && (sys.omega_opt - wn).abs() < 5.0 * gap {
        return ModeClass::Mixed;
    }
    if (omega - wn).abs() < (omega - sys.cm_branch_omega()).abs() {
        ModeClass::Tether(n)
    } else {
        ModeClass::Cm
    }
}

fn nearest_asymptote(omega: f64, sys: &RigidTetherSystem) -> usize {
    let g = sys.gamma(omega);
    let n = ((g / PI) - 0.25).round().max(1.0) as usize;
    [n.saturating_sub(1).max(1), n, n + 1]
        .into_iter()
        .min_by(|&a, &b| {
            (sys.tether_asymptote(a) - omega)
                .abs()
                .total_cmp(&(sys.tether_asymptote(b) - omega).abs())
        })
        .unwrap_or(1)
}

pub fn tether_energy_ratio(mode: &TetherMode) -> f64 {
    if mode.u_mech <= 0.0 {
        f64::INFINITY
    } else {
        mode.u_opt / mode.u_mech
    }
}

/// Harmonic composition of membrane and tether ratios sharing one optical energy.
pub fn composed_energy_ratio(disk_ratio: f64, tether_ratio: f64) -> f64 {
    let inv = disk_ratio.recip() + tether_ratio.recip();
    if inv == 0.0 {
        f64::INFINITY
    } else {
        inv.recip()
    }
}

/// Scan resolution in `gamma`; doubled until the root count is stable.
const INITIAL_SCAN_STEP: f64 = 0.01;
const MAX_REFINEMENTS: usize = 6;

/// All eigenmodes with `0 < omega <= omega_max`, ascending.
pub fn solve_tether_spectrum(sys: &RigidTetherSystem, omega_max: f64) -> Result<Vec<TetherMode>> {
    require_positive("omega_max", omega_max)?;
    sys.validate()?;
    let g_max = sys.gamma(omega_max);
    // the residual tends to +inf like 1/g as g -> 0, so the scan can start close to it
    let g_min = 1e-3 * g_max.min(1.0);

    let mut step = INITIAL_SCAN_STEP;
    let mut previous = scan_brackets(sys, g_min, g_max, step);
    let mut stable = false;
    for _ in 0..MAX_REFINEMENTS {
        step *= 0.5;
        let finer = scan_brackets(sys, g_min, g_max, step);
        if finer.len() == previous.len() {
            previous = finer;
            stable = true;
            break;
        }
        previous = finer;
    }
    if !stable {
        let suspect = previous
            .windows(2)
            .map(|w| (w[1].0 - w[0].1, w[0].1, w[1].0))
            .fold((f64::INFINITY, 0.0, 0.0), |acc, x| if x.0 < acc.0 { x } else { acc });
        return Err(Error::numerical(
            "solve_tether_spectrum",
            format!(
                "root count did not stabilize; closest pair near omega in [{:e}, {:e}]",
                sys.omega_from_gamma(suspect.1),
                sys.omega_from_gamma(suspect.2)
            ),
            step,
        ));
    }

    let mut modes = Vec::with_capacity(previous.len());
    for (lo, hi) in previous {
        let g = brent(|g| residual_in_gamma(g, sys), lo, hi, 1e-15 * hi, 300)?;
        let residual = residual_in_gamma(g, sys).abs();
        if residual > 1e-8 {
            return Err(Error::numerical("solve_tether_spectrum", "root polish failed", residual));
        }
        modes.push(tether_mode_shape(sys.omega_from_gamma(g), sys)?);
    }
    Ok(modes)
}

fn scan_brackets(sys: &RigidTetherSystem, g_min: f64, g_max: f64, step: f64) -> Vec<(f64, f64)> {
    let count = ((g_max - g_min) / step).ceil().max(1.0) as usize;
    let mut out = Vec::new();
    let mut g0 = g_min;
    let mut r0 = residual_in_gamma(g0, sys);
    for i in 1..=count {
        let g1 = g_min + (g_max - g_min) * i as f64 / count as f64;
        let r1 = residual_in_gamma(g1, sys);
        if r1 == 0.0 || r0.signum() != r1.signum() {
            out.push((g0, g1));
        }
        g0 = g1;
        r0 = r1;
    }
    out
}

/// The spectrum member that best represents centre-of-mass motion: the one
/// with the largest optical-to-strain energy ratio.
pub fn cm_mode(modes: &[TetherMode]) -> Option<&TetherMode> {
    modes.iter().max_by(|a, b| a.energy_ratio().total_cmp(&b.energy_ratio()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::DiskGeometry;

    pub(crate) fn reference_system(omega_opt: f64) -> RigidTetherSystem {
        let material = MaterialParams::silicon_nitride();
        let disk = DiskGeometry::uniform(10e-6, 50e-9);
        RigidTetherSystem::new(
            disk.mass(&material),
            TetherGeometry {
                length: 50e-6,
                width: 50e-9,
            },
            material,
            omega_opt,
        )
        .unwrap()
    }

    #[test]
    fn derived_quantities() {
        let sys = reference_system(0.0);
        assert!((sys.mass_ratio() - 125.66).abs() < 0.1, "{}", sys.mass_ratio());
        let wp = sys.pendulum_omega() / (2.0 * PI);
        assert!((wp / 1.42e3 - 1.0).abs() < 0.01, "{wp}");
    }

    #[test]
    fn pendulum_is_lowest_root() {
        let sys = reference_system(0.0);
        let modes = solve_tether_spectrum(&sys, 2.0 * PI * 1e6).unwrap();
        let rel = modes[0].omega / sys.pendulum_omega() - 1.0;
        assert!(rel.abs() < 1e-3, "{rel}");
        assert_eq!(modes[0].classification, ModeClass::Cm);
        assert_eq!(modes[0].energy_ratio(), 0.0);
    }

    #[test]
    fn clamped_end_and_free_moment_hold() {
        let sys = reference_system(2.0 * PI * 1.28e6);
        for mode in solve_tether_spectrum(&sys, 2.0 * PI * 5e6).unwrap() {
            let peak = mode.shape(501).iter().map(|p| p.1.abs()).fold(0.0, f64::max);
            assert!(mode.eval(0.0).abs() < 1e-12 * peak);
            assert!(mode.slope(0.0).abs() < 1e-12 * peak * mode.k);
            let curv_peak = (0..501)
                .map(|i| mode.curvature(mode.length * i as f64 / 500.0).abs())
                .fold(0.0, f64::max);
            assert!(mode.curvature(mode.length).abs() < 1e-6 * curv_peak);
        }
    }

    #[test]
    fn composition_limits() {
        assert_eq!(composed_energy_ratio(f64::INFINITY, 7.0), 7.0);
        assert_eq!(composed_energy_ratio(7.0, f64::INFINITY), 7.0);
        assert!((composed_energy_ratio(2.0, 2.0) - 1.0).abs() < 1e-15);
        assert_eq!(composed_energy_ratio(f64::INFINITY, f64::INFINITY), f64::INFINITY);
    }

    #[test]
    fn asymptote_roots() {
        for n in 1..6 {
            let g = clamped_pinned_gamma(n);
            assert!((g.tan() - g.tanh()).abs() < 1e-9);
            assert!((g - PI * (n as f64 + 0.25)).abs() < 0.01);
        }
    }
}

//! Eigenmodes of a near-concentric cavity with a membrane at its centre.
//!
//! Let `u` be the field arriving at the membrane from the left and `v` the
//! one arriving from the right. After one pass (membrane, half-cavity to a
//! mirror and back) they become
//!
//! ```text
//! u' = H (r u + t v),    v' = H (t u + r v)
//! ```
//!
//! so every multiply-scattered path is generated by iterating this map. For
//! the symmetric membrane position the map splits into `u = v` and `u = -v`
//! blocks. The membrane sits at an antinode in the symmetric block, whose
//! one-pass operator is `G = H diag(r + t)`.
//!
//! `H` is evaluated with two Fresnel transforms between the membrane grid and
//! a conjugate mirror grid. In scaled variables the result is
//! `H = -C_r T (C_rho M C_rho) T C_r`, with chirps `C = exp(i k x^2 / (2 z))`,
//! `z = L/2` and the constant `exp(2 i k z)` dropped. Near-concentric
//! curvature cancels inside `C_rho M C_rho`, which keeps the mirror grid coarse.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::f64::consts::PI;

use super::field::{fresnel, propagate, FieldProfile};
use super::optics::{sheet_amplitudes_at, Mirror};
use super::qdht::{HankelGrid, DEFAULT_HANKEL_POINTS};
use crate::constants::SPEED_OF_LIGHT;
use crate::error::{require_positive, Error, Result};
use crate::params::{DiskGeometry, MaterialParams};

/// Membrane placed at the cavity centre.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Membrane {
    pub disk: DiskGeometry,
    pub material: MaterialParams,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CavitySetup {
    /// Mirror separation [m].
    pub length: f64,
    pub mirror: Mirror,
    pub membrane: Option<Membrane>,
    /// [m]
    pub wavelength: f64,
    pub n_points: usize,
    /// Membrane-plane grid aperture [m]; derived from the mirror aperture when absent.
    pub grid_aperture: Option<f64>,
}

impl Default for CavitySetup {
    fn default() -> Self {
        Self {
            length: 1.99e-2,
            mirror: Mirror {
                radius_of_curvature: 1e-2,
                reflectance: 1.0,
                aperture: 0.95e-3,
            },
            membrane: None,
            wavelength: 1e-6,
            n_points: DEFAULT_HANKEL_POINTS,
            grid_aperture: None,
        }
    }
}

impl CavitySetup {
    pub fn with_membrane(mut self, disk: DiskGeometry, material: MaterialParams) -> Self {
        self.membrane = Some(Membrane { disk, material });
        self
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("length", self.length)?;
        require_positive("wavelength", self.wavelength)?;
        self.mirror.validate()?;
        if let Some(m) = &self.membrane {
            m.disk.validate()?;
            m.material.validate()?;
        }
        if let Some(a) = self.grid_aperture {
            require_positive("grid_aperture", a)?;
        }
        if self.length >= 2.0 * self.mirror.radius_of_curvature {
            return Err(Error::Configuration(format!(
                "length {:e} m is not below twice the mirror curvature; the empty cavity is unstable",
                self.length
            )));
        }
        Ok(())
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength
    }

    pub fn half_length(&self) -> f64 {
        0.5 * self.length
    }

    /// Paraxial waist of the empty symmetric cavity,
    /// `w0^2 = (lambda / 2 pi) sqrt(L (2 R_c - L))`.
    pub fn empty_waist(&self) -> f64 {
        let l = self.length;
        let rc = self.mirror.radius_of_curvature;
        (self.wavelength / (2.0 * PI) * (l * (2.0 * rc - l)).sqrt()).sqrt()
    }

    /// Empty-cavity spot size on the mirrors.
    pub fn mirror_spot(&self) -> f64 {
        let w0 = self.empty_waist();
        let zr = PI * w0 * w0 / self.wavelength;
        w0 * (1.0 + (self.half_length() / zr).powi(2)).sqrt()
    }

    /// Four times the mirror aperture imaged back onto the waist plane.
    pub fn default_grid_aperture(&self) -> f64 {
        4.0 * self.empty_waist() * self.mirror.aperture / self.mirror_spot()
    }

    pub fn grid(&self) -> Result<HankelGrid> {
        let aperture = self.grid_aperture.unwrap_or_else(|| self.default_grid_aperture());
        if let Some(m) = &self.membrane {
            if m.disk.radius > aperture {
                return Err(Error::Configuration(format!(
                    "membrane radius {:e} m exceeds the grid aperture {:e} m",
                    m.disk.radius, aperture
                )));
            }
        }
        HankelGrid::new(self.n_points, aperture)
    }

    /// `r + t` of the membrane on the grid samples (1 without a membrane).
    pub fn membrane_factor(&self, grid: &HankelGrid) -> Vec<Complex64> {
        grid.radii()
            .iter()
            .map(|&r| match &self.membrane {
                Some(m) => {
                    let (rr, tt) = sheet_amplitudes_at(&m.disk, &m.material, self.wavelength, r);
                    rr + tt
                }
                None => Complex64::new(1.0, 0.0),
            })
            .collect()
    }

    /// Membrane-plane to mirror-plane grid.
    pub fn mirror_grid(&self, grid: &HankelGrid) -> Result<HankelGrid> {
        let mirror_grid = grid.with_aperture(self.wavelength * self.half_length() * grid.bandwidth())?;
        if mirror_grid.aperture() < self.mirror.aperture {
            return Err(Error::Configuration(format!(
                "conjugate mirror grid reaches only {:e} m, below the mirror aperture; increase n_points",
                mirror_grid.aperture()
            )));
        }
        Ok(mirror_grid)
    }
}

/// One pass of the symmetric supermode as a dense matrix in scaled variables.
#[derive(Debug, Clone)]
pub struct PassOperator {
    pub grid: HankelGrid,
    pub matrix: DMatrix<Complex64>,
    /// `r + t` at the membrane samples.
    pub membrane_factor: Vec<Complex64>,
}

pub fn build_pass_operator(setup: &CavitySetup) -> Result<PassOperator> {
    setup.validate()?;
    let grid = setup.grid()?;
    let mirror_grid = setup.mirror_grid(&grid)?;
    let k = setup.wavenumber();
    let z = setup.half_length();
    let chirp = |x: f64| Complex64::from_polar(1.0, k * x * x / (2.0 * z));
    let middle: Vec<Complex64> = mirror_grid
        .radii()
        .iter()
        .map(|&rho| chirp(rho) * setup.mirror.factor(rho, k) * chirp(rho))
        .collect();
    let mut matrix = grid.sandwich(&middle);
    let c_r: Vec<Complex64> = grid.radii().iter().map(|&r| chirp(r)).collect();
    let factor = setup.membrane_factor(&grid);
    let n = grid.n_points();
    for j in 0..n {
        let right = -c_r[j] * factor[j];
        for i in 0..n {
            matrix[(i, j)] *= c_r[i] * right;
        }
    }
    Ok(PassOperator {
        grid,
        matrix,
        membrane_factor: factor,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Iteration cap for each shift-invert refinement.
    pub max_iterations: usize,
    /// Stop when the eigenvalue estimate moves by less than this.
    pub tolerance: f64,
    /// Refactorizations with an updated shift allowed when convergence is slow.
    pub shift_updates: usize,
    /// Radial Laguerre–Gauss modes spanning the Ritz subspace used to locate
    /// low-loss candidates.
    pub ritz_basis: usize,
    /// Ritz values refined on the full operator besides the trial shift.
    pub candidates: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            max_iterations: 2000,
            tolerance: 1e-8,
            shift_updates: 3,
            ritz_basis: 64,
            candidates: 3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CavityModeResult {
    /// One-pass eigenvalue (membrane, half cavity and back).
    pub eigenvalue: Complex64,
    /// Round-trip eigenvalue `lambda^2`.
    pub round_trip_eigenvalue: Complex64,
    /// Shift of the resonance from the plane-wave comb `2 pi q c / (2L)` [rad/s].
    pub resonance_offset: f64,
    /// Field incident on the membrane, unit power.
    pub field: FieldProfile,
    pub round_trip_loss: f64,
    /// Energy decay rate [rad/s].
    pub kappa: f64,
    pub finesse: f64,
    /// Round-trip loss of the best competing mode found, if any.
    pub runner_up_loss: Option<f64>,
    /// A distinct mode has a round-trip loss within 1% of this one.
    pub degenerate: bool,
    pub iterations: usize,
    pub residual: f64,
    pub length: f64,
}

impl CavityModeResult {
    pub fn waist(&self) -> f64 {
        self.field.second_moment_width()
    }

    /// Antinode intensity of the standing wave at the membrane, per unit
    /// one-way power, `|u + (r + t) u|^2 = 4 |u|^2`.
    pub fn membrane_intensity(&self) -> Vec<f64> {
        let p = self.field.power();
        self.field.values.iter().map(|v| 4.0 * v.norm_sqr() / p).collect()
    }
}

fn loss_of(lambda: Complex64) -> f64 {
    (1.0 - lambda.norm_sqr().powi(2)).clamp(0.0, 1.0)
}

struct Refined {
    lambda: Complex64,
    vector: DVector<Complex64>,
    iterations: usize,
    residual: f64,
}

/// Shift-invert iteration from `start`, re-shifting to the current estimate
/// when progress stalls.
fn refine(g: &DMatrix<Complex64>, shift: Complex64, start: &DVector<Complex64>, options: &SolverOptions) -> Result<Refined> {
    let rayleigh = |x: &DVector<Complex64>| -> Complex64 { x.dotc(&(g * x)) / x.dotc(x) };
    let n = g.nrows();
    let mut x = start.normalize();
    let mut shift = shift;
    let mut estimate = rayleigh(&x);
    let mut iterations = 0;
    let mut updates = 0;
    'outer: loop {
        let mut shifted = g.clone();
        for i in 0..n {
            shifted[(i, i)] -= shift;
        }
        let lu = shifted.lu();
        let mut last_step = f64::INFINITY;
        let mut slow = 0;
        while iterations < options.max_iterations {
            iterations += 1;
            let y = lu
                .solve(&x)
                .ok_or_else(|| Error::numerical("solve_cavity_mode", "shifted operator is singular", 0.0))?;
            x = y.normalize();
            let next = rayleigh(&x);
            let step = (next - estimate).norm();
            estimate = next;
            if step < options.tolerance {
                let residual = (g * &x - &x * estimate).norm();
                return Ok(Refined {
                    lambda: estimate,
                    vector: x,
                    iterations,
                    residual,
                });
            }
            slow = if last_step.is_finite() && step > 0.5 * last_step { slow + 1 } else { 0 };
            last_step = step;
            if slow >= 5 && updates < options.shift_updates {
                updates += 1;
                shift = estimate;
                continue 'outer;
            }
        }
        break;
    }
    Err(Error::numerical(
        "solve_cavity_mode",
        format!("no convergence after {iterations} iterations"),
        (g * &x - &x * estimate).norm(),
    ))
}

/// Orthonormal radial Laguerre–Gauss modes of waist `w` in scaled variables.
fn laguerre_gauss_basis(grid: &HankelGrid, w: f64, count: usize) -> DMatrix<Complex64> {
    let radii = grid.radii();
    let mut columns = Vec::with_capacity(count);
    for p in 0..count {
        let values: Vec<Complex64> = radii
            .iter()
            .map(|&r| {
                let x = 2.0 * r * r / (w * w);
                // L_p(x) by the three-term recurrence
                let (mut l0, mut l1) = (1.0, 1.0 - x);
                let lp = match p {
                    0 => l0,
                    _ => {
                        for k in 1..p {
                            let kf = k as f64;
                            let next = ((2.0 * kf + 1.0 - x) * l1 - kf * l0) / (kf + 1.0);
                            l0 = l1;
                            l1 = next;
                        }
                        l1
                    }
                };
                Complex64::new(lp * (-x / 2.0).exp(), 0.0)
            })
            .collect();
        columns.push(grid.to_scaled(&values));
    }
    DMatrix::from_columns(&columns).qr().q()
}

/// Lowest-loss eigenpair of the symmetric pass operator.
///
/// Candidate eigenvalues come from the trial field's Rayleigh quotient and
/// from a Rayleigh–Ritz projection onto Laguerre–Gauss modes. Each is
/// refined by shift-and-invert iteration on the full operator and the mode
/// with the smallest round-trip loss wins. Modes whose losses agree to
/// within `1e-9` count as equally good, and the one closest to the trial is
/// kept, so a lossless empty cavity returns the mode the trial describes.
pub fn solve_cavity_mode(setup: &CavitySetup, trial: &FieldProfile) -> Result<CavityModeResult> {
    solve_cavity_mode_with(setup, trial, SolverOptions::default())
}

pub fn solve_cavity_mode_with(setup: &CavitySetup, trial: &FieldProfile, options: SolverOptions) -> Result<CavityModeResult> {
    let op = build_pass_operator(setup)?;
    if trial.grid != op.grid || trial.wavelength != setup.wavelength {
        return Err(Error::GridMismatch(
            "trial field must live on the setup's membrane grid".into(),
        ));
    }
    let x0 = trial.scaled();
    if x0.norm() == 0.0 {
        return Err(Error::invalid("trial", "trial field is identically zero"));
    }
    let g = &op.matrix;
    let mu = x0.dotc(&(g * &x0)) / x0.dotc(&x0);

    let mut refined = vec![refine(g, mu, &x0, &options)?];
    let basis_size = options.ritz_basis.min(op.grid.n_points() / 4);
    if options.candidates > 0 && basis_size > 1 {
        let q = laguerre_gauss_basis(&op.grid, setup.empty_waist(), basis_size);
        let projected = q.adjoint() * g * &q;
        if let Some(ritz) = projected.schur().eigenvalues() {
            let mut ritz: Vec<Complex64> = ritz.iter().copied().collect();
            ritz.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
            let start = &q * DVector::from_element(basis_size, Complex64::new(1.0, 0.0));
            for shift in ritz.into_iter().take(options.candidates) {
                // a candidate that fails to converge only removes itself from the comparison
                if let Ok(r) = refine(g, shift, &start, &options) {
                    refined.push(r);
                }
            }
        }
    }

    let best_loss = refined.iter().map(|r| loss_of(r.lambda)).fold(f64::INFINITY, f64::min);
    let chosen = refined
        .iter()
        .position(|r| loss_of(r.lambda) <= best_loss + 1e-9)
        .expect("at least the trial refinement is present");
    let iterations = refined.iter().map(|r| r.iterations).sum();
    let best = refined.swap_remove(chosen);
    let runner_up_loss = refined
        .iter()
        .filter(|r| (r.lambda - best.lambda).norm() > 1e-6)
        .map(|r| loss_of(r.lambda))
        .fold(None, |acc: Option<f64>, l| Some(acc.map_or(l, |a| a.min(l))));

    let lambda = best.lambda;
    let field = trial.with_scaled(&best.vector);
    let field = {
        let s = 1.0 / field.power().sqrt();
        FieldProfile {
            values: field.values.iter().map(|v| v * s).collect(),
            ..field
        }
    };
    let loss = loss_of(lambda);
    let kappa = loss * SPEED_OF_LIGHT / (2.0 * setup.length);
    let finesse = if loss > 0.0 { 2.0 * PI / loss } else { f64::INFINITY };
    Ok(CavityModeResult {
        eigenvalue: lambda,
        round_trip_eigenvalue: lambda * lambda,
        resonance_offset: -lambda.arg() * SPEED_OF_LIGHT / setup.length,
        field,
        round_trip_loss: loss,
        kappa,
        finesse,
        runner_up_loss,
        degenerate: runner_up_loss.is_some_and(|l| l <= 1.01 * loss + 1e-12),
        iterations,
        residual: best.residual,
        length: setup.length,
    })
}

/// Solve with the empty-cavity Gaussian as trial field.
pub fn solve_default(setup: &CavitySetup) -> Result<CavityModeResult> {
    let grid = setup.grid()?;
    let trial = FieldProfile::gaussian(grid, setup.wavelength, setup.empty_waist())?;
    solve_cavity_mode(setup, &trial)
}

/// Number of planes between the membrane and a mirror used for the mode volume.
pub const MODE_VOLUME_PLANES: usize = 64;

/// Mode-volume estimate `V_c = ∫ I dV / I_max` and the ratio of the
/// volume-wide antinode peak to the peak at the membrane plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeVolume {
    /// [m^3]
    pub volume: f64,
    /// `pi w0^2 L / 4` with `w0` the membrane-plane second-moment width [m^3].
    pub gaussian_volume: f64,
    /// `I_max / I_membrane_peak >= 1`.
    pub peak_ratio: f64,
    /// Distance from the membrane at which the peak occurs [m].
    pub peak_position: f64,
}

/// Sample the standing wave on planes between the membrane and a mirror.
///
/// At distance `z` the incoming wave is the eigenfield propagated by `-z`
/// and the outgoing one is `(r + t) u` propagated by `+z`. The antinode
/// envelope is `(|in| + |out|)^2`. With unit one-way power, `∫ I dV` over the
/// cavity is `L · 2 / 2 = L` once the `cos^2` standing-wave average is taken.
pub fn mode_volume(setup: &CavitySetup, result: &CavityModeResult) -> Result<ModeVolume> {
    let op_grid = result.field.grid.clone();
    let factor = setup.membrane_factor(&op_grid);
    let incoming = result.field.clone();
    let outgoing = FieldProfile {
        values: incoming.values.iter().zip(&factor).map(|(v, f)| v * f).collect(),
        ..incoming.clone()
    };
    let conj = |f: &FieldProfile| FieldProfile {
        values: f.values.iter().map(|v| v.conj()).collect(),
        ..f.clone()
    };
    let peak_at = |a: &FieldProfile, b: &FieldProfile| -> f64 {
        a.values
            .iter()
            .zip(&b.values)
            .map(|(x, y)| (x.norm() + y.norm()).powi(2))
            .fold(0.0, f64::max)
    };
    let membrane_peak = peak_at(&incoming, &outgoing);
    let switch = op_grid.aperture() / (setup.wavelength * op_grid.bandwidth());
    let half = setup.half_length();
    let mut best = (membrane_peak, 0.0);
    for j in 1..=MODE_VOLUME_PLANES {
        let z = half * j as f64 / (MODE_VOLUME_PLANES + 1) as f64;
        // backward propagation of u is the conjugate of forward propagation of conj(u)
        let (a, b) = if z < switch {
            (propagate(&conj(&incoming), z)?, propagate(&outgoing, z)?)
        } else {
            (fresnel(&conj(&incoming), z)?, fresnel(&outgoing, z)?)
        };
        let p = peak_at(&a, &b);
        if p > best.0 {
            best = (p, z);
        }
    }
    // standing-wave average of (|in| + |out|)^2 cos^2 is |in|^2 + |out|^2 = 2 per unit power
    let total = setup.length * (incoming.power() + outgoing.power());
    let volume = total / best.0;
    let w0 = result.waist();
    Ok(ModeVolume {
        volume,
        gaussian_volume: PI * w0 * w0 * setup.length / 4.0,
        peak_ratio: best.0 / membrane_peak,
        peak_position: best.1,
    })
}

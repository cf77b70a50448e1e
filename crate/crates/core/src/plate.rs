//! Flexural eigenmodes of a free, optically trapped thin disk.
//!
//! The radial problem for `zeta = f(r) cos(m theta)` is discretized by the
//! Rayleigh–Ritz method on the bending energy
//!
//! ```text
//! U_mech = E / (24 (1 - s^2)) ∫ g(r) [ (lap zeta)^2 + 2 (1 - s) (zeta_xy^2 - zeta_xx zeta_yy) ] dA,   g = d^3
//! ```
//!
//! with kinetic weight `rho d(r)` and trap potential `rho d(r) omega_opt(r)^2`.
//! Stationarity of this functional yields the nested operator
//! `lap(g lap zeta) - (1 - s)(...)` in the interior, and its natural boundary
//! conditions are exactly the two free-edge conditions (vanishing bending
//! moment and effective shear) specialized to the circle. Nothing is imposed
//! at the rim; regularity at `r = 0` is built into the basis.
//!
//! Basis: Zernike radial polynomials `rho^m P_k^(m,0)(1 - 2 rho^2)`, which are
//! orthogonal under `rho drho`, so the mass matrix of a uniform disk is
//! diagonal. Polar Hessian pieces for `zeta = f cos(m theta)`:
//!
//! ```text
//! zeta_rr                         = f''            cos
//! zeta_r / r + zeta_tt / r^2      = h = f'/r - m^2 f / r^2    cos
//! d/dr (zeta_t / r)               = -t = -m (f'/r - f/r^2)    sin
//! ```
//!
//! and the angular average of the energy density becomes
//! `f''^2 + h^2 + 2 s f'' h + 2 (1 - s) t^2`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::params::{trap_frequency_squared, DiskGeometry, IntensityProfile, MaterialParams, OpticalParams};
use crate::roots::brent;
use crate::special::{gauss_legendre, jacobi_all};

pub const DEFAULT_GRID_POINTS: usize = 96;
const MIN_GRID_POINTS: usize = 16;

/// Below this strain energy (J, at unit amplitude) a mode counts as strain-free.
pub const STRAIN_FREE_THRESHOLD: f64 = 1e-30;

/// Gauss–Legendre radial quadrature over the disk together with the size of
/// the polynomial trial space.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    radius: f64,
    /// Normalized node positions `r/a`, strictly increasing, clustered at both ends.
    nodes: Vec<f64>,
    weights: Vec<f64>,
    basis_size: usize,
}

impl RadialGrid {
    pub fn new(radius: f64, n_points: usize) -> Result<Self> {
        Self::with_basis(radius, n_points, n_points / 3)
    }

    pub fn with_basis(radius: f64, n_points: usize, basis_size: usize) -> Result<Self> {
        crate::error::require_positive("radius", radius)?;
        if n_points < MIN_GRID_POINTS {
            return Err(Error::invalid(
                "n_points",
                format!("need at least {MIN_GRID_POINTS} radial points, got {n_points}"),
            ));
        }
        if basis_size < 2 || 2 * basis_size > n_points {
            return Err(Error::invalid(
                "basis_size",
                format!("basis size {basis_size} incompatible with {n_points} quadrature points"),
            ));
        }
        let (nodes, weights) = gauss_legendre(n_points, 0.0, 1.0);
        Ok(Self {
            radius,
            nodes,
            weights,
            basis_size,
        })
    }

    pub fn default_for(disk: &DiskGeometry) -> Self {
        Self::new(disk.radius, DEFAULT_GRID_POINTS).expect("default grid is valid for a validated disk")
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn n_points(&self) -> usize {
        self.nodes.len()
    }

    pub fn basis_size(&self) -> usize {
        self.basis_size
    }

    /// Node radii [m].
    pub fn radii(&self) -> Vec<f64> {
        self.nodes.iter().map(|x| x * self.radius).collect()
    }

    /// Normalized nodes and quadrature weights for `∫_0^1 (.) drho`.
    pub fn quadrature(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }
}

/// Basis function values and curvature pieces at one normalized radius.
/// Derivatives are taken with respect to `rho = r/a`.
#[derive(Debug, Clone)]
struct BasisPoint {
    f: Vec<f64>,
    frr: Vec<f64>,
    h: Vec<f64>,
    t: Vec<f64>,
}

fn basis_point(m: usize, size: usize, rho: f64) -> BasisPoint {
    let alpha = m as f64;
    let x = 1.0 - 2.0 * rho * rho;
    let p = jacobi_all(size - 1, alpha, 0.0, x);
    let dp = if size > 1 { jacobi_all(size - 2, alpha + 1.0, 1.0, x) } else { vec![] };
    let ddp = if size > 2 { jacobi_all(size - 3, alpha + 2.0, 2.0, x) } else { vec![] };

    let mf = m as f64;
    let rho_m = rho.powi(m as i32);
    // rho^(m-2) only ever appears multiplied by m (m - 1), which vanishes for m < 2
    let rho_m2 = if m >= 2 { rho.powi(m as i32 - 2) } else { 0.0 };
    let mut out = BasisPoint {
        f: Vec::with_capacity(size),
        frr: Vec::with_capacity(size),
        h: Vec::with_capacity(size),
        t: Vec::with_capacity(size),
    };
    for k in 0..size {
        let kf = k as f64;
        let q = p[k];
        let q1 = if k >= 1 { 0.5 * (kf + alpha + 1.0) * dp[k - 1] } else { 0.0 };
        let q2 = if k >= 2 {
            0.25 * (kf + alpha + 1.0) * (kf + alpha + 2.0) * ddp[k - 2]
        } else {
            0.0
        };
        let f = rho_m * q;
        let frr = mf * (mf - 1.0) * rho_m2 * q - (8.0 * mf + 4.0) * rho_m * q1 + 16.0 * rho_m * rho * rho * q2;
        let h = (mf - mf * mf) * rho_m2 * q - 4.0 * rho_m * q1;
        let t = mf * ((mf - 1.0) * rho_m2 * q - 4.0 * rho_m * q1);
        out.f.push(f);
        out.frr.push(frr);
        out.h.push(h);
        out.t.push(t);
    }
    out
}

/// Angular integral of `cos^2(m theta)`.
fn angular_factor(m: usize) -> f64 {
    if m == 0 {
        2.0 * PI
    } else {
        PI
    }
}

/// Discretized stiffness, optical and mass forms at fixed azimuthal index.
#[derive(Debug, Clone)]
pub struct PlateOperator {
    pub m: usize,
    pub disk: DiskGeometry,
    pub material: MaterialParams,
    pub grid: RadialGrid,
    /// Bending stiffness form (`U_mech = c^T K c / 2`).
    pub stiffness: DMatrix<f64>,
    /// Trap stiffness form (`U_opt = c^T O c / 2`).
    pub optical: DMatrix<f64>,
    /// Kinetic form, symmetric positive definite.
    pub mass: DMatrix<f64>,
}

pub fn assemble_plate_operator(
    disk: &DiskGeometry,
    material: &MaterialParams,
    optics: &OpticalParams,
    intensity: &IntensityProfile,
    m: usize,
    grid: &RadialGrid,
) -> Result<PlateOperator> {
    disk.validate()?;
    material.validate()?;
    intensity.validate()?;
    if (grid.radius - disk.radius).abs() > 1e-12 * disk.radius {
        return Err(Error::GridMismatch(format!(
            "grid radius {} differs from disk radius {}",
            grid.radius, disk.radius
        )));
    }
    let n = grid.basis_size;
    let a = disk.radius;
    let sigma = material.poisson_ratio;
    let cm = angular_factor(m);
    let bend = material.plate_modulus() * cm / (a * a);
    let inertia = material.density * cm * a * a;

    let mut stiffness = DMatrix::zeros(n, n);
    let mut optical = DMatrix::zeros(n, n);
    let mut mass = DMatrix::zeros(n, n);
    for (rho, w) in grid.quadrature() {
        let b = basis_point(m, n, rho);
        let d = disk.thickness.at_normalized(rho);
        let g = d * d * d;
        let w_opt2 = trap_frequency_squared(material, optics, intensity.at(rho * a)?);
        let ws = w * rho * bend * g;
        let wm = w * rho * inertia * d;
        for i in 0..n {
            for j in 0..=i {
                let k_ij = b.frr[i] * b.frr[j]
                    + b.h[i] * b.h[j]
                    + sigma * (b.frr[i] * b.h[j] + b.h[i] * b.frr[j])
                    + 2.0 * (1.0 - sigma) * b.t[i] * b.t[j];
                stiffness[(i, j)] += ws * k_ij;
                let ff = wm * b.f[i] * b.f[j];
                mass[(i, j)] += ff;
                optical[(i, j)] += ff * w_opt2;
            }
        }
    }
    for mat in [&mut stiffness, &mut optical, &mut mass] {
        mat.fill_upper_triangle_with_lower_triangle();
    }
    Ok(PlateOperator {
        m,
        disk: *disk,
        material: *material,
        grid: grid.clone(),
        stiffness,
        optical,
        mass,
    })
}

impl PlateOperator {
    /// Same operator with the trap intensity multiplied by `factor`.
    pub fn with_optical_scale(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.optical *= factor;
        out
    }
}

/// One mechanical eigenmode.
#[derive(Debug, Clone)]
pub struct ModeSolution {
    /// Nodal diameters.
    pub m: usize,
    /// Nodal circles (interior sign changes of `f`).
    pub n: usize,
    /// [rad/s]
    pub omega: f64,
    /// Basis coefficients scaled so that `max |f| = 1` with a positive extremum.
    pub coefficients: Vec<f64>,
    /// `f(r)` at the grid nodes.
    pub profile: Vec<f64>,
    /// Optical potential energy at unit amplitude [J].
    pub u_opt: f64,
    /// Strain energy at unit amplitude [J].
    pub u_mech: f64,
    pub grid: RadialGrid,
}

impl ModeSolution {
    pub fn radius(&self) -> f64 {
        self.grid.radius
    }

    pub fn frequency_hz(&self) -> f64 {
        self.omega / (2.0 * PI)
    }

    /// `f(r)` anywhere in `[0, a]` from the modal expansion.
    pub fn eval(&self, r: f64) -> f64 {
        let b = basis_point(self.m, self.coefficients.len(), r / self.grid.radius);
        dot(&b.f, &self.coefficients)
    }

    /// Radial part of the Laplacian, `f'' + f'/r - m^2 f/r^2` [1/m^2].
    pub fn laplacian(&self, r: f64) -> f64 {
        let a = self.grid.radius;
        let b = basis_point(self.m, self.coefficients.len(), r / a);
        (dot(&b.frr, &self.coefficients) + dot(&b.h, &self.coefficients)) / (a * a)
    }

    /// Optical-to-strain energy ratio, `+inf` for strain-free modes.
    pub fn energy_ratio(&self) -> f64 {
        energy_ratio(self)
    }

    /// Sampled profile on `count` equally spaced radii in `[0, a]`.
    pub fn sample(&self, count: usize) -> Vec<(f64, f64)> {
        let a = self.grid.radius;
        (0..count)
            .map(|i| {
                let r = a * i as f64 / (count - 1).max(1) as f64;
                (r, self.eval(r))
            })
            .collect()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

const PROFILE_SCAN: usize = 401;

/// Lowest `k_modes` eigenpairs of `(K + O) c = omega^2 M c`, ascending.
pub fn solve_modes(op: &PlateOperator, k_modes: usize) -> Result<Vec<ModeSolution>> {
    let n = op.grid.basis_size;
    if k_modes == 0 || k_modes > n {
        return Err(Error::invalid(
            "k_modes",
            format!("requested {k_modes} modes from a trial space of {n}"),
        ));
    }
    let chol = op.mass.clone().cholesky().ok_or_else(|| {
        Error::numerical("solve_modes", "mass form is not positive definite", f64::NAN)
    })?;
    let l = chol.l();
    let total = &op.stiffness + &op.optical;
    let x = l
        .solve_lower_triangular(&total)
        .ok_or_else(|| Error::numerical("solve_modes", "singular mass factor", f64::NAN))?;
    let a = l
        .solve_lower_triangular(&x.transpose())
        .ok_or_else(|| Error::numerical("solve_modes", "singular mass factor", f64::NAN))?;
    let a = (&a + a.transpose()) * 0.5;
    let eig = SymmetricEigen::try_new(a, f64::EPSILON, 100_000).ok_or_else(|| {
        Error::numerical("solve_modes", "symmetric eigensolver did not converge", f64::NAN)
    })?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let lt = l.transpose();
    let scale = total.norm().max(f64::MIN_POSITIVE);

    let mut modes = Vec::with_capacity(k_modes);
    for &idx in order.iter().take(k_modes) {
        let lambda = eig.eigenvalues[idx];
        let y = eig.eigenvectors.column(idx).into_owned();
        let c = lt
            .solve_upper_triangular(&y)
            .ok_or_else(|| Error::numerical("solve_modes", "singular mass factor", f64::NAN))?;
        let residual = (&total * &c - &op.mass * &c * lambda).norm() / (scale * c.norm());
        // the Rayleigh quotient of the untransformed forms is second-order
        // accurate, so weak traps are not swamped by the stiffest basis modes
        let lambda = (c.dot(&(&op.stiffness * &c)) + c.dot(&(&op.optical * &c))) / c.dot(&(&op.mass * &c));
        if !(residual < 1e-8) {
            return Err(Error::numerical(
                "solve_modes",
                format!("eigenpair residual too large for omega^2 = {lambda:e}"),
                residual,
            ));
        }
        modes.push(finish_mode(op, c, lambda)?);
    }
    Ok(modes)
}

fn finish_mode(op: &PlateOperator, c: DVector<f64>, lambda: f64) -> Result<ModeSolution> {
    let size = op.grid.basis_size;
    // normalize on a dense scan including both end points
    let mut extreme = 0.0f64;
    let mut samples = Vec::with_capacity(PROFILE_SCAN);
    for i in 0..PROFILE_SCAN {
        let rho = i as f64 / (PROFILE_SCAN - 1) as f64;
        let v = dot(&basis_point(op.m, size, rho).f, c.as_slice());
        samples.push(v);
        if v.abs() > extreme.abs() {
            extreme = v;
        }
    }
    if extreme == 0.0 {
        return Err(Error::numerical("solve_modes", "eigenvector vanished", 0.0));
    }
    let c = c / extreme;
    let n = count_sign_changes(samples.iter().map(|v| v / extreme));
    let coefficients: Vec<f64> = c.iter().copied().collect();
    let profile = op
        .grid
        .nodes
        .iter()
        .map(|&rho| dot(&basis_point(op.m, size, rho).f, &coefficients))
        .collect();
    let u_mech = 0.5 * c.dot(&(&op.stiffness * &c));
    let u_opt = 0.5 * c.dot(&(&op.optical * &c));
    Ok(ModeSolution {
        m: op.m,
        n,
        omega: lambda.max(0.0).sqrt(),
        coefficients,
        profile,
        u_opt: u_opt.max(0.0),
        u_mech: u_mech.max(0.0),
        grid: op.grid.clone(),
    })
}

fn count_sign_changes(values: impl Iterator<Item = f64>) -> usize {
    let mut last = 0.0f64;
    let mut changes = 0;
    for v in values {
        if v.abs() < 1e-8 {
            continue;
        }
        if last != 0.0 && v.signum() != last.signum() {
            changes += 1;
        }
        last = v;
    }
    changes
}

struct EnergyDensities {
    full: f64,
    laplacian_only: f64,
}

fn bending_integrals(mode: &ModeSolution, disk: &DiskGeometry, material: &MaterialParams) -> EnergyDensities {
    let a = disk.radius;
    let sigma = material.poisson_ratio;
    let prefactor = 0.5 * material.plate_modulus() * angular_factor(mode.m) / (a * a);
    let (mut full, mut lap) = (0.0, 0.0);
    for (rho, w) in mode.grid.quadrature() {
        let b = basis_point(mode.m, mode.coefficients.len(), rho);
        let frr = dot(&b.frr, &mode.coefficients);
        let h = dot(&b.h, &mode.coefficients);
        let t = dot(&b.t, &mode.coefficients);
        let d = disk.thickness.at_normalized(rho);
        let wg = w * rho * d * d * d;
        full += wg * (frr * frr + h * h + 2.0 * sigma * frr * h + 2.0 * (1.0 - sigma) * t * t);
        lap += wg * (frr + h) * (frr + h);
    }
    EnergyDensities {
        full: prefactor * full,
        laplacian_only: prefactor * lap,
    }
}

/// Strain energy at the mode's stored amplitude, including the
/// `(1 - sigma)` Hessian-determinant term [J].
pub fn strain_energy(mode: &ModeSolution, disk: &DiskGeometry, material: &MaterialParams) -> Result<f64> {
    check_grid(mode, disk)?;
    Ok(bending_integrals(mode, disk, material).full.max(0.0))
}

/// Strain energy with the Hessian-determinant term dropped [J]. The
/// difference from [`strain_energy`] is a pure edge contribution for a
/// uniform disk.
pub fn laplacian_strain_energy(mode: &ModeSolution, disk: &DiskGeometry, material: &MaterialParams) -> Result<f64> {
    check_grid(mode, disk)?;
    Ok(bending_integrals(mode, disk, material).laplacian_only.max(0.0))
}

/// Potential energy stored in the optical trap, `1/2 ∫ rho d omega_opt^2 zeta^2 dA` [J].
pub fn optical_energy(
    mode: &ModeSolution,
    disk: &DiskGeometry,
    material: &MaterialParams,
    optics: &OpticalParams,
    intensity: &IntensityProfile,
) -> Result<f64> {
    check_grid(mode, disk)?;
    let a = disk.radius;
    let mut acc = 0.0;
    for ((rho, w), f) in mode.grid.quadrature().zip(&mode.profile) {
        let w_opt2 = trap_frequency_squared(material, optics, intensity.at(rho * a)?);
        acc += w * rho * disk.thickness.at_normalized(rho) * w_opt2 * f * f;
    }
    Ok(0.5 * material.density * angular_factor(mode.m) * a * a * acc)
}

/// `∫ d(r)^power (lap zeta)^2 dA` at the mode's stored amplitude.
pub fn laplacian_square_integral(mode: &ModeSolution, disk: &DiskGeometry, power: i32) -> Result<f64> {
    check_grid(mode, disk)?;
    let a = disk.radius;
    let mut acc = 0.0;
    for (rho, w) in mode.grid.quadrature() {
        let b = basis_point(mode.m, mode.coefficients.len(), rho);
        let lap = dot(&b.frr, &mode.coefficients) + dot(&b.h, &mode.coefficients);
        acc += w * rho * disk.thickness.at_normalized(rho).powi(power) * lap * lap;
    }
    Ok(angular_factor(mode.m) * acc / (a * a))
}

/// `U_opt / U_mech`, `+inf` below [`STRAIN_FREE_THRESHOLD`].
pub fn energy_ratio(mode: &ModeSolution) -> f64 {
    if mode.u_mech < STRAIN_FREE_THRESHOLD {
        f64::INFINITY
    } else {
        mode.u_opt / mode.u_mech
    }
}

fn check_grid(mode: &ModeSolution, disk: &DiskGeometry) -> Result<()> {
    if (mode.grid.radius - disk.radius).abs() > 1e-12 * disk.radius {
        Err(Error::GridMismatch(format!(
            "mode solved on radius {} but disk radius is {}",
            mode.grid.radius, disk.radius
        )))
    } else {
        Ok(())
    }
}

/// Everything needed to set up a trapped-disk solve.
#[derive(Debug, Clone)]
pub struct DiskProblem {
    pub disk: DiskGeometry,
    pub material: MaterialParams,
    pub optics: OpticalParams,
    pub grid: RadialGrid,
}

impl DiskProblem {
    pub fn new(disk: DiskGeometry, material: MaterialParams, optics: OpticalParams) -> Self {
        let grid = RadialGrid::default_for(&disk);
        Self {
            disk,
            material,
            optics,
            grid,
        }
    }

    pub fn with_grid(mut self, grid: RadialGrid) -> Self {
        self.grid = grid;
        self
    }

    pub fn operator(&self, intensity: &IntensityProfile, m: usize) -> Result<PlateOperator> {
        assemble_plate_operator(&self.disk, &self.material, &self.optics, intensity, m, &self.grid)
    }

    pub fn modes(&self, intensity: &IntensityProfile, m: usize, k_modes: usize) -> Result<Vec<ModeSolution>> {
        solve_modes(&self.operator(intensity, m)?, k_modes)
    }

    /// Lowest axisymmetric mode: the (possibly flexure-mixed) centre-of-mass mode.
    pub fn cm_mode(&self, intensity: &IntensityProfile) -> Result<ModeSolution> {
        Ok(self.modes(intensity, 0, 1)?.remove(0))
    }

    /// Scales the intensity profile `shape` so that the CM mode oscillates at
    /// `target_omega`. Returns the scaled profile and its CM mode.
    pub fn cm_mode_at_frequency(
        &self,
        shape: &IntensityProfile,
        target_omega: f64,
    ) -> Result<(IntensityProfile, ModeSolution)> {
        crate::error::require_positive("target_omega", target_omega)?;
        if shape.is_zero() {
            return Err(Error::invalid("intensity", "cannot scale a zero intensity profile"));
        }
        let unit = shape.scaled(1.0 / shape.peak());
        let op = self.operator(&unit, 0)?;
        let cm_omega = |scale: f64| -> Result<f64> {
            Ok(solve_modes(&op.with_optical_scale(scale), 1)?[0].omega)
        };
        // start from the intensity that traps a plane wave at the target
        let guess = crate::params::intensity_for_trap_frequency(&self.material, &self.optics, target_omega);
        let mut hi = guess;
        let mut iterations = 0;
        while cm_omega(hi)? < target_omega {
            hi *= 2.0;
            iterations += 1;
            if iterations > 80 {
                return Err(Error::Infeasible(format!(
                    "no trap intensity reaches CM frequency {target_omega:e} rad/s"
                )));
            }
        }
        let mut lo = hi / 2.0;
        while cm_omega(lo)? > target_omega {
            lo /= 2.0;
        }
        let mut failure = None;
        let scale = brent(
            |s| match cm_omega(s) {
                Ok(w) => w - target_omega,
                Err(e) => {
                    failure = Some(e);
                    0.0
                }
            },
            lo,
            hi,
            1e-13 * hi,
            200,
        )?;
        if let Some(e) = failure {
            return Err(e);
        }
        let profile = unit.scaled(scale);
        let mode = self.cm_mode(&profile)?;
        Ok((profile, mode))
    }
}

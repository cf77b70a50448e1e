//! Independent reference calculations shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use optomech::{DiskGeometry, MaterialParams, RigidTetherSystem};
use std::f64::consts::PI;

/// `J_n(x)` and `I_n(x)` by their power series; adequate for `x < 20`.
pub fn bessel_series(n: usize, x: f64, modified: bool) -> f64 {
    let half = 0.5 * x;
    let mut term = half.powi(n as i32) / (1..=n).map(|k| k as f64).product::<f64>();
    let mut sum = term;
    for k in 1..200 {
        let kf = k as f64;
        term *= half * half / (kf * (kf + n as f64));
        if !modified {
            term = -term;
        }
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

fn bessel_pair(n: usize, x: f64, modified: bool) -> (f64, f64) {
    let v = bessel_series(n, x, modified);
    // Z_n' = Z_(n-1) - (n/x) Z_n for J and I alike; Z_(-1) = -J_1 or I_1
    let prev = if n == 0 {
        if modified {
            bessel_series(1, x, true)
        } else {
            -bessel_series(1, x, false)
        }
    } else {
        bessel_series(n - 1, x, modified)
    };
    (v, prev - n as f64 / x * v)
}

/// Free-edge characteristic function of a uniform circular plate, cross-multiplied.
pub fn free_plate_residual(m: usize, lambda: f64, sigma: f64) -> f64 {
    let n2 = (m * m) as f64;
    let l = lambda;
    let (j, dj) = bessel_pair(m, l, false);
    let (i, di) = bessel_pair(m, l, true);
    let nj = l * l * j + (1.0 - sigma) * (l * dj - n2 * j);
    let dj_ = l * l * l * dj + (1.0 - sigma) * n2 * (l * dj - j);
    let ni = l * l * i - (1.0 - sigma) * (l * di - n2 * i);
    let di_ = l * l * l * di - (1.0 - sigma) * n2 * (l * di - i);
    nj * di_ - ni * dj_
}

/// Frequency parameters `lambda` with `omega = lambda^2 / a^2 sqrt(D / (rho d))`.
pub fn free_plate_lambdas(m: usize, sigma: f64, lambda_max: f64) -> Vec<f64> {
    let mut roots = Vec::new();
    let step = 1e-3;
    let mut x = 0.3;
    let mut fx = free_plate_residual(m, x, sigma);
    while x < lambda_max {
        let y = x + step;
        let fy = free_plate_residual(m, y, sigma);
        if fx == 0.0 || fx.signum() != fy.signum() {
            let (mut lo, mut hi, mut flo) = (x, y, fx);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                let fm = free_plate_residual(m, mid, sigma);
                if fm.signum() == flo.signum() {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        x = y;
        fx = fy;
    }
    roots
}

pub fn free_plate_omega(lambda: f64, disk: &DiskGeometry, material: &MaterialParams) -> f64 {
    let d = disk.thickness.max_thickness();
    let rigidity = material.youngs_modulus * d.powi(3) / (12.0 * (1.0 - material.poisson_ratio.powi(2)));
    lambda * lambda / (disk.radius * disk.radius) * (rigidity / (material.density * d)).sqrt()
}

/// Eigenfrequencies of the clamped tether carrying the trapped membrane at
/// its free end, from cubic Hermite beam elements.
pub fn beam_fem_spectrum(sys: &RigidTetherSystem, elements: usize) -> Vec<f64> {
    let b = sys.tether.width;
    let len = sys.tether.length;
    let ei = sys.material.youngs_modulus * b.powi(4) / 12.0;
    let mu = sys.material.density * b * b;
    let h = len / elements as f64;
    let dofs = 2 * elements;
    let mut k = DMatrix::<f64>::zeros(dofs, dofs);
    let mut m = DMatrix::<f64>::zeros(dofs, dofs);
    let ke = [
        [12.0, 6.0 * h, -12.0, 6.0 * h],
        [6.0 * h, 4.0 * h * h, -6.0 * h, 2.0 * h * h],
        [-12.0, -6.0 * h, 12.0, -6.0 * h],
        [6.0 * h, 2.0 * h * h, -6.0 * h, 4.0 * h * h],
    ];
    let me = [
        [156.0, 22.0 * h, 54.0, -13.0 * h],
        [22.0 * h, 4.0 * h * h, 13.0 * h, -3.0 * h * h],
        [54.0, 13.0 * h, 156.0, -22.0 * h],
        [-13.0 * h, -3.0 * h * h, -22.0 * h, 4.0 * h * h],
    ];
    for e in 0..elements {
        // global dofs of node j are (2j - 2, 2j - 1); node 0 is clamped and dropped
        let ids: Vec<Option<usize>> = (0..4)
            .map(|l| {
                let node = e + l / 2;
                if node == 0 {
                    None
                } else {
                    Some(2 * (node - 1) + l % 2)
                }
            })
            .collect();
        for p in 0..4 {
            for q in 0..4 {
                if let (Some(i), Some(j)) = (ids[p], ids[q]) {
                    k[(i, j)] += ei / h.powi(3) * ke[p][q];
                    m[(i, j)] += mu * h / 420.0 * me[p][q];
                }
            }
        }
    }
    let tip = dofs - 2;
    m[(tip, tip)] += sys.membrane_mass;
    k[(tip, tip)] += sys.membrane_mass * sys.omega_opt * sys.omega_opt;
    let l = m.cholesky().expect("mass matrix is positive definite").l();
    let linv = l.clone().try_inverse().expect("triangular factor is invertible");
    let a = &linv * k * linv.transpose();
    let a = (&a + a.transpose()) * 0.5;
    let mut w: Vec<f64> = SymmetricEigen::new(a).eigenvalues.iter().map(|v| v.max(0.0).sqrt()).collect();
    w.sort_by(f64::total_cmp);
    w
}

/// Normal-incidence `(r, t)` of a slab in vacuum from its characteristic matrix,
/// referenced to the two faces.
pub fn transfer_matrix_slab(d: f64, index: f64, wavelength: f64) -> (Complex64, Complex64) {
    let delta = 2.0 * PI / wavelength * index * d;
    let i = Complex64::new(0.0, 1.0);
    let m11 = Complex64::new(delta.cos(), 0.0);
    let m12 = -i * delta.sin() / index;
    let m21 = -i * index * delta.sin();
    let m22 = m11;
    let den = m11 + m12 + m21 + m22;
    ((m11 + m12 - m21 - m22) / den, 2.0 / den)
}

/// `J0(x)` from `(1/pi) ∫_0^pi cos(x sin t) dt`, trapezoid rule (exponentially convergent).
pub fn j0_integral(x: f64) -> f64 {
    let n = 400 + (2.0 * x.abs()) as usize;
    let h = PI / n as f64;
    let mut acc = 0.5 * (1.0 + (x * 0.0f64.sin()).cos());
    for j in 1..n {
        acc += (x * (j as f64 * h).sin()).cos();
    }
    acc * h / PI
}

/// `2 pi ∫_0^rmax f(r) J0(2 pi nu r) r dr` by composite Simpson.
pub fn hankel_quadrature(f: impl Fn(f64) -> f64, nu: f64, r_max: f64, panels: usize) -> f64 {
    let n = panels + panels % 2;
    let h = r_max / n as f64;
    let g = |r: f64| f(r) * j0_integral(2.0 * PI * nu * r) * r;
    let mut acc = g(0.0) + g(r_max);
    for j in 1..n {
        acc += if j % 2 == 1 { 4.0 } else { 2.0 } * g(j as f64 * h);
    }
    2.0 * PI * acc * h / 3.0
}

pub struct GaussianBeam {
    pub waist: f64,
    pub wavelength: f64,
}

impl GaussianBeam {
    pub fn rayleigh(&self) -> f64 {
        PI * self.waist * self.waist / self.wavelength
    }

    pub fn width(&self, z: f64) -> f64 {
        self.waist * (1.0 + (z / self.rayleigh()).powi(2)).sqrt()
    }

    pub fn gouy(&self, z: f64) -> f64 {
        (z / self.rayleigh()).atan()
    }

    /// On-axis amplitude relative to the waist, without the `exp(i k z)` carrier.
    pub fn on_axis(&self, z: f64) -> Complex64 {
        Complex64::from_polar(self.waist / self.width(z), -self.gouy(z))
    }
}

//! Quasi-discrete Hankel transform of order zero.
//!
//! Samples sit at `r_n = j_n R / S`, `nu_n = j_n / (2 pi R)` with `j_n` the
//! zeros of `J0` and `S = j_(N+1)`. In the scaled variables
//! `u_n = E(r_n) R / |J1(j_n)|` and `U_m = F(nu_m) V / |J1(j_m)|`
//! (`V = S / (2 pi R)`, `F(nu) = 2 pi ∫ E J0(2 pi nu r) r dr`) the transform is
//! the symmetric matrix `T_mn = 2 J0(j_m j_n / S) / (|J1(j_m)| |J1(j_n)| S)`,
//! which is orthogonal up to an error that decays with `N`. The same matrix
//! serves as its own inverse, and `||u||^2` is proportional to beam power.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{require_positive, Error, Result};
use crate::special::{bessel_j0, bessel_j0_zeros, bessel_j1};

pub const DEFAULT_HANKEL_POINTS: usize = 1024;

/// Size-dependent part of the transform, shared by every grid with the same `N`.
#[derive(Debug)]
struct HankelKernel {
    zeros: Vec<f64>,
    s: f64,
    j1_abs: Vec<f64>,
    matrix: DMatrix<f64>,
}

impl HankelKernel {
    fn new(n: usize) -> Self {
        let mut zeros = bessel_j0_zeros(n + 1);
        let s = zeros.pop().expect("n + 1 zeros requested");
        let j1_abs: Vec<f64> = zeros.iter().map(|&j| bessel_j1(j).abs()).collect();
        let matrix = DMatrix::from_fn(n, n, |m, k| {
            2.0 * bessel_j0(zeros[m] * zeros[k] / s) / (j1_abs[m] * j1_abs[k] * s)
        });
        Self {
            zeros,
            s,
            j1_abs,
            matrix,
        }
    }
}

/// Radial sampling for axisymmetric fields with aperture radius `R`.
#[derive(Debug, Clone)]
pub struct HankelGrid {
    kernel: Arc<HankelKernel>,
    aperture: f64,
}

impl PartialEq for HankelGrid {
    fn eq(&self, other: &Self) -> bool {
        self.n_points() == other.n_points() && self.aperture == other.aperture
    }
}

impl HankelGrid {
    pub fn new(n_points: usize, aperture: f64) -> Result<Self> {
        require_positive("aperture", aperture)?;
        if n_points < 8 {
            return Err(Error::invalid("n_points", format!("need at least 8 Hankel points, got {n_points}")));
        }
        Ok(Self {
            kernel: Arc::new(HankelKernel::new(n_points)),
            aperture,
        })
    }

    /// Same sample count and transform matrix with a different aperture.
    pub fn with_aperture(&self, aperture: f64) -> Result<Self> {
        require_positive("aperture", aperture)?;
        Ok(Self {
            kernel: Arc::clone(&self.kernel),
            aperture,
        })
    }

    pub fn n_points(&self) -> usize {
        self.kernel.zeros.len()
    }

    pub fn aperture(&self) -> f64 {
        self.aperture
    }

    /// `S = j_(N+1)`.
    pub fn space_bandwidth(&self) -> f64 {
        self.kernel.s
    }

    /// Spatial-frequency cutoff `V = S / (2 pi R)` [1/m].
    pub fn bandwidth(&self) -> f64 {
        self.kernel.s / (2.0 * PI * self.aperture)
    }

    pub fn radius(&self, n: usize) -> f64 {
        self.kernel.zeros[n] * self.aperture / self.kernel.s
    }

    pub fn radii(&self) -> Vec<f64> {
        (0..self.n_points()).map(|n| self.radius(n)).collect()
    }

    /// Conjugate spatial frequencies `nu_m` [1/m].
    pub fn frequencies(&self) -> Vec<f64> {
        self.kernel.zeros.iter().map(|j| j / (2.0 * PI * self.aperture)).collect()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.kernel.matrix
    }

    /// Weights `w_n` with `∫ |E|^2 dA ≈ Σ w_n |E(r_n)|^2`.
    pub fn power_weights(&self) -> Vec<f64> {
        let s = self.kernel.s;
        let r = self.aperture;
        self.kernel.j1_abs.iter().map(|j1| 4.0 * PI * r * r / (s * s * j1 * j1)).collect()
    }

    /// Real-space samples to the scaled vector `u`.
    pub fn to_scaled(&self, values: &[Complex64]) -> DVector<Complex64> {
        DVector::from_iterator(
            values.len(),
            values.iter().zip(&self.kernel.j1_abs).map(|(v, j1)| v * (self.aperture / j1)),
        )
    }

    /// Scaled vector `u` back to real-space samples.
    pub fn from_scaled(&self, u: &DVector<Complex64>) -> Vec<Complex64> {
        u.iter().zip(&self.kernel.j1_abs).map(|(v, j1)| v * (j1 / self.aperture)).collect()
    }

    /// Spectrum samples `F(nu_m)` to scaled spectrum `U`.
    pub fn spectrum_to_scaled(&self, values: &[Complex64]) -> DVector<Complex64> {
        let v = self.bandwidth();
        DVector::from_iterator(
            values.len(),
            values.iter().zip(&self.kernel.j1_abs).map(|(f, j1)| f * (v / j1)),
        )
    }

    pub fn spectrum_from_scaled(&self, u: &DVector<Complex64>) -> Vec<Complex64> {
        let v = self.bandwidth();
        u.iter().zip(&self.kernel.j1_abs).map(|(f, j1)| f * (j1 / v)).collect()
    }

    /// `T u` for a complex vector.
    pub fn apply(&self, u: &DVector<Complex64>) -> DVector<Complex64> {
        let re = DVector::from_iterator(u.len(), u.iter().map(|c| c.re));
        let im = DVector::from_iterator(u.len(), u.iter().map(|c| c.im));
        let t = &self.kernel.matrix;
        let (a, b) = (t * re, t * im);
        DVector::from_iterator(u.len(), a.iter().zip(b.iter()).map(|(&x, &y)| Complex64::new(x, y)))
    }

    /// `T D T` for a complex diagonal `D`, computed with two real products.
    pub fn sandwich(&self, diagonal: &[Complex64]) -> DMatrix<Complex64> {
        let t = &self.kernel.matrix;
        let n = self.n_points();
        let mut re = t.clone();
        let mut im = t.clone();
        for (j, d) in diagonal.iter().enumerate() {
            re.column_mut(j).scale_mut(d.re);
            im.column_mut(j).scale_mut(d.im);
        }
        let re = &re * t;
        let im = &im * t;
        DMatrix::from_fn(n, n, |i, j| Complex64::new(re[(i, j)], im[(i, j)]))
    }

    /// `max |T T - I|`.
    pub fn orthogonality_error(&self) -> f64 {
        let t = &self.kernel.matrix;
        let tt = t * t;
        let n = self.n_points();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((tt[(i, j)] - target).abs());
            }
        }
        worst
    }

    /// Fourier–Bessel series of a band-limited field built from its scaled spectrum.
    pub fn series(&self, scaled_spectrum: &DVector<Complex64>) -> FourierBessel {
        let r = self.aperture;
        let v = self.bandwidth();
        let coefficients = scaled_spectrum
            .iter()
            .zip(&self.kernel.j1_abs)
            .map(|(u, j1)| u / (PI * r * r * v * j1))
            .collect();
        FourierBessel {
            coefficients,
            wavenumbers: self.kernel.zeros.iter().map(|j| j / r).collect(),
            aperture: r,
        }
    }
}

/// `E(r) = Σ c_m J0(j_m r / R)`, valid on `[0, R]`.
#[derive(Debug, Clone)]
pub struct FourierBessel {
    coefficients: Vec<Complex64>,
    wavenumbers: Vec<f64>,
    aperture: f64,
}

impl FourierBessel {
    pub fn eval(&self, r: f64) -> Complex64 {
        if r > self.aperture {
            return Complex64::new(0.0, 0.0);
        }
        self.coefficients
            .iter()
            .zip(&self.wavenumbers)
            .map(|(c, q)| c * bessel_j0(q * r))
            .sum()
    }
}

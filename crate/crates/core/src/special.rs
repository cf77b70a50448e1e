//! Special functions and quadrature rules used by the solvers.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

const ASYMPTOTIC_THRESHOLD: f64 = 25.0;

/// Bessel functions of the first kind `(J0(x), J1(x))`.
///
/// Miller's backward recurrence below the asymptotic threshold, the Hankel
/// asymptotic expansion above it. Both branches are accurate to a few ulp
/// of the larger of the two values.
pub fn bessel_j01(x: f64) -> (f64, f64) {
    let ax = x.abs();
    let (j0, j1) = if ax == 0.0 {
        (1.0, 0.0)
    } else if ax > ASYMPTOTIC_THRESHOLD {
        hankel_asymptotic(ax)
    } else {
        miller(ax)
    };
    // J1 is odd
    (j0, if x < 0.0 { -j1 } else { j1 })
}

pub fn bessel_j0(x: f64) -> f64 {
    bessel_j01(x).0
}

pub fn bessel_j1(x: f64) -> f64 {
    bessel_j01(x).1
}

fn miller(x: f64) -> (f64, f64) {
    let start = 2 * ((x as usize + 40) / 2);
    let mut above = 0.0; // J_{k+1}
    let mut current = 1e-30; // J_k, k = start
    let mut norm = 0.0;
    let mut j1 = 0.0;
    for k in (1..=start).rev() {
        let below = 2.0 * k as f64 / x * current - above;
        above = current;
        current = below;
        let order = k - 1;
        if order == 1 {
            j1 = current;
        }
        if order > 0 && order % 2 == 0 {
            norm += 2.0 * current;
        }
        if current.abs() > 1e250 {
            current *= 1e-250;
            above *= 1e-250;
            norm *= 1e-250;
            j1 *= 1e-250;
        }
    }
    norm += current;
    (current / norm, j1 / norm)
}

fn hankel_asymptotic(x: f64) -> (f64, f64) {
    let (p0, q0) = hankel_pq(0.0, x);
    let (p1, q1) = hankel_pq(1.0, x);
    let (s, c) = x.sin_cos();
    // cos/sin of (x - pi/4) and (x - 3 pi/4) without forming the shifted argument
    let c0 = (c + s) * FRAC_1_SQRT_2;
    let s0 = (s - c) * FRAC_1_SQRT_2;
    let c1 = (s - c) * FRAC_1_SQRT_2;
    let s1 = -(s + c) * FRAC_1_SQRT_2;
    let amp = (2.0 / (PI * x)).sqrt();
    (amp * (p0 * c0 - q0 * s0), amp * (p1 * c1 - q1 * s1))
}

fn hankel_pq(nu: f64, x: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        if term.abs() >= last || term.abs() < 1e-18 {
            break;
        }
        last = term.abs();
        // a_k / x^k alternates between Q (odd k) and P (even k) with signs (-1)^{floor(k/2)}
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 1 {
            q += sign * term;
        } else {
            p += sign * term;
        }
    }
    (p, q)
}

/// First `n` positive zeros of `J0`.
pub fn bessel_j0_zeros(n: usize) -> Vec<f64> {
    (1..=n)
        .map(|s| {
            let beta = (s as f64 - 0.25) * PI;
            let b8 = 8.0 * beta;
            let mut z = beta + 1.0 / b8 - 124.0 / (3.0 * b8.powi(3));
            for _ in 0..8 {
                let (j0, j1) = bessel_j01(z);
                // d/dx J0 = -J1
                let step = j0 / j1;
                z += step;
                if step.abs() < 1e-15 * z {
                    break;
                }
            }
            z
        })
        .collect()
}

/// Gauss–Legendre nodes and weights on `[lo, hi]`.
pub fn gauss_legendre(n: usize, lo: f64, hi: f64) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = mid - half * x;
        nodes[n - 1 - i] = mid + half * x;
        weights[i] = half * w;
        weights[n - 1 - i] = half * w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Jacobi polynomials `P_k^(alpha, beta)(x)` for `k = 0..=max_degree`.
pub fn jacobi_all(max_degree: usize, alpha: f64, beta: f64, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(max_degree + 1);
    out.push(1.0);
    if max_degree == 0 {
        return out;
    }
    out.push(0.5 * ((alpha + beta + 2.0) * x + (alpha - beta)));
    for n in 2..=max_degree {
        let nf = n as f64;
        let s = 2.0 * nf + alpha + beta;
        let a1 = 2.0 * nf * (nf + alpha + beta) * (s - 2.0);
        let a2 = (s - 1.0) * (alpha * alpha - beta * beta);
        let a3 = (s - 2.0) * (s - 1.0) * s;
        let a4 = 2.0 * (nf + alpha - 1.0) * (nf + beta - 1.0) * s;
        let next = ((a2 + a3 * x) * out[n - 1] - a4 * out[n - 2]) / a1;
        out.push(next);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values from Abramowitz & Stegun tables.
    #[test]
    fn bessel_reference_values() {
        let cases = [
            (1.0, 0.765_197_686_557_966_6, 0.440_050_585_744_933_5),
            (5.0, -0.177_596_771_314_338_3, -0.327_579_137_591_465_2),
            (10.0, -0.245_935_764_451_348_3, 0.043_472_746_168_861_44),
            (30.0, -0.086_367_983_581_040_2, -0.118_751_062_616_623_05),
        ];
        for (x, j0, j1) in cases {
            let (a, b) = bessel_j01(x);
            assert!((a - j0).abs() < 1e-14, "J0({x}) = {a}");
            assert!((b - j1).abs() < 1e-14, "J1({x}) = {b}");
        }
    }

    #[test]
    fn branches_agree_at_threshold() {
        for x in [24.0, 25.0, 26.0, 31.5] {
            let (m0, m1) = miller(x);
            let (h0, h1) = hankel_asymptotic(x);
            assert!((m0 - h0).abs() < 1e-14 && (m1 - h1).abs() < 1e-14, "x = {x}");
        }
    }

    #[test]
    fn zeros_are_zeros() {
        let z = bessel_j0_zeros(200);
        assert!((z[0] - 2.404_825_557_695_773).abs() < 1e-14);
        for w in z.windows(2) {
            assert!((w[1] - w[0] - PI).abs() < 0.03);
        }
        for &x in &z {
            assert!(bessel_j0(x).abs() < 1e-14);
        }
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(12, 0.0, 2.0);
        let integral: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(23)).sum();
        assert!((integral / (2f64.powi(24) / 24.0) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn jacobi_matches_closed_forms() {
        // P_2^(1,0)(x) = (5x^2 + 2x - 1)/4... checked through orthogonality instead
        let (x, w) = gauss_legendre(40, -1.0, 1.0);
        let alpha = 3.0;
        let polys: Vec<Vec<f64>> = x.iter().map(|&xi| jacobi_all(6, alpha, 0.0, xi)).collect();
        for a in 0..6 {
            for b in 0..a {
                let ip: f64 = (0..x.len()).map(|i| w[i] * (1.0 - x[i]).powf(alpha) * polys[i][a] * polys[i][b]).sum();
                assert!(ip.abs() < 1e-12, "<{a},{b}> = {ip}");
            }
        }
        let p = jacobi_all(3, 0.0, 0.0, 0.3);
        assert!((p[2] - 0.5 * (3.0 * 0.09 - 1.0)).abs() < 1e-15);
    }
}

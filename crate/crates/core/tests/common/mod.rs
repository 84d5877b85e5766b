//! Independent reference computations for the square well `V = χ_{|x|<1}`.
//!
//! None of these use the library: they reduce the problem to its s-wave
//! radial form and solve it with textbook one-dimensional methods.

#![allow(dead_code)]

use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on `[a, b]` by Newton iteration on
/// the Legendre recurrence.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        loop {
            let (mut p0, mut p1) = (1.0, 0.0);
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j + 1) as f64;
            }
            let dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                x[i] = 0.5 * (a + b) - 0.5 * (b - a) * z;
                w[i] = (b - a) / ((1.0 - z * z) * dp * dp);
                break;
            }
        }
    }
    (x, w)
}

/// Largest eigenvalue of the symmetric s-wave kernel
/// `k(r, s) = e^{-κ r_>} sinh(κ r_<)/κ` on `L²(0, 1)`, which is the
/// Birman–Schwinger operator of the unit well at `E = -κ²` restricted to
/// radial functions. Nyström discretization with `points` Gauss nodes and
/// power iteration on the symmetrized matrix.
pub fn radial_nystrom_alpha(kappa: f64, points: usize) -> f64 {
    let (x, w) = gauss_legendre(points, 0.0, 1.0);
    let k = |r: f64, s: f64| {
        let (lo, hi) = if r < s { (r, s) } else { (s, r) };
        if kappa == 0.0 {
            lo
        } else {
            (-kappa * hi).exp() * (kappa * lo).sinh() / kappa
        }
    };
    let m: Vec<Vec<f64>> = (0..points)
        .map(|i| (0..points).map(|j| w[i].sqrt() * k(x[i], x[j]) * w[j].sqrt()).collect())
        .collect();
    let mut v = vec![1.0; points];
    let mut alpha = 0.0;
    for _ in 0..2000 {
        let mv: Vec<f64> = m.iter().map(|row| row.iter().zip(&v).map(|(a, b)| a * b).sum()).collect();
        let norm = mv.iter().map(|a| a * a).sum::<f64>().sqrt();
        let next = mv.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>();
        v = mv.iter().map(|a| a / norm).collect();
        if (next - alpha).abs() < 1e-15 {
            alpha = next;
            break;
        }
        alpha = next;
    }
    alpha
}

/// Threshold coupling of the unit well by shooting: integrate
/// `u'' = -λ u`, `u(0) = 0`, `u'(0) = 1` with RK4 and bisect on the
/// zero-energy matching condition `u'(1) = 0`.
pub fn shooting_threshold() -> f64 {
    let slope_at_edge = |lambda: f64| {
        let steps = 4000;
        let h = 1.0 / steps as f64;
        let (mut u, mut du) = (0.0f64, 1.0f64);
        let f = |u: f64, du: f64| (du, -lambda * u);
        for _ in 0..steps {
            let (k1u, k1d) = f(u, du);
            let (k2u, k2d) = f(u + 0.5 * h * k1u, du + 0.5 * h * k1d);
            let (k3u, k3d) = f(u + 0.5 * h * k2u, du + 0.5 * h * k2d);
            let (k4u, k4d) = f(u + h * k3u, du + h * k3d);
            u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
            du += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
        }
        du
    };
    let (mut lo, mut hi) = (1.0, 4.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if slope_at_edge(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `∫ V φ₀` for the unit well's threshold state normalized by
/// `‖V^{1/2} φ₀‖₂ = 1`: inside the well `φ₀ = A sin(πr/2)/r` with
/// `4π A² ∫₀¹ sin²(πr/2) dr = 1`, so the integral is
/// `4π A ∫₀¹ r sin(πr/2) dr`. Both integrals by composite Simpson.
pub fn resonance_integral() -> f64 {
    let simpson = |f: &dyn Fn(f64) -> f64| {
        let n = 10_000;
        let h = 1.0 / n as f64;
        let mut s = f(0.0) + f(1.0);
        for i in 1..n {
            s += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    };
    let norm2 = 4.0 * PI * simpson(&|r| (0.5 * PI * r).sin().powi(2));
    let amplitude = 1.0 / norm2.sqrt();
    4.0 * PI * amplitude * simpson(&|r| r * (0.5 * PI * r).sin())
}

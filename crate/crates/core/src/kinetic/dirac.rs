//! Dirac matrices in the standard (Dirac) representation.
//!
//! `β = diag(1, 1, -1, -1)`, `αᵢ` has the Pauli matrix `σᵢ` in both
//! off-diagonal 2×2 blocks, and `γ⁵` swaps the upper and lower pairs.

use num_complex::Complex64;

use super::Matrix4;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

fn pauli(i: usize) -> [[Complex64; 2]; 2] {
    match i {
        0 => [[ZERO, ONE], [ONE, ZERO]],
        1 => [[ZERO, -I], [I, ZERO]],
        2 => [[ONE, ZERO], [ZERO, -ONE]],
        _ => panic!("Pauli index out of range: {i}"),
    }
}

pub fn alpha(i: usize) -> Matrix4 {
    let s = pauli(i);
    let mut m = Matrix4::zeros();
    for r in 0..2 {
        for c in 0..2 {
            m[(r, c + 2)] = s[r][c];
            m[(r + 2, c)] = s[r][c];
        }
    }
    m
}

pub fn beta() -> Matrix4 {
    Matrix4::from_diagonal(&nalgebra::Vector4::new(ONE, ONE, -ONE, -ONE))
}

pub fn gamma5() -> Matrix4 {
    let mut m = Matrix4::zeros();
    for r in 0..2 {
        m[(r, r + 2)] = ONE;
        m[(r + 2, r)] = ONE;
    }
    m
}

/// `β₊ = (1 + β)/2`, projector onto the upper pair.
pub fn beta_plus() -> Matrix4 {
    (Matrix4::identity() + beta()) * Complex64::from(0.5)
}

/// `β₋ = (1 - β)/2`, projector onto the lower pair.
pub fn beta_minus() -> Matrix4 {
    (Matrix4::identity() - beta()) * Complex64::from(0.5)
}

/// `α·p`.
pub fn alpha_dot(p: [f64; 3]) -> Matrix4 {
    (0..3).fold(Matrix4::zeros(), |acc, i| acc + alpha(i) * Complex64::from(p[i]))
}

/// `(α·p) v` without forming the matrix.
#[inline]
pub fn apply_alpha_dot(p: [f64; 3], v: [Complex64; 4]) -> [Complex64; 4] {
    // σ·p = [[p3, p1 - i p2], [p1 + i p2, -p3]]
    let a = Complex64::new(p[0], -p[1]);
    let b = Complex64::new(p[0], p[1]);
    let sp = |x: Complex64, y: Complex64| (p[2] * x + a * y, b * x - p[2] * y);
    let (u0, u1) = sp(v[2], v[3]);
    let (l0, l1) = sp(v[0], v[1]);
    [u0, u1, l0, l1]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clifford_relations() {
        let id = Matrix4::identity();
        let b = beta();
        for i in 0..3 {
            let ai = alpha(i);
            assert!((ai * b + b * ai).norm() < 1e-15);
            for j in 0..3 {
                let aj = alpha(j);
                let anti = ai * aj + aj * ai;
                let expected = if i == j { id * Complex64::from(2.0) } else { Matrix4::zeros() };
                assert!((anti - expected).norm() < 1e-15);
            }
            assert!((gamma5() * ai - ai * gamma5()).norm() < 1e-15);
        }
        assert!((b * b - id).norm() < 1e-15);
        assert!((gamma5() * b + b * gamma5()).norm() < 1e-15);
    }

    #[test]
    fn projectors() {
        let (p, m) = (beta_plus(), beta_minus());
        assert!((p * p - p).norm() < 1e-15);
        assert!((p * m).norm() < 1e-15);
        assert!((p + m - Matrix4::identity()).norm() < 1e-15);
        assert!((gamma5() * p * gamma5() - m).norm() < 1e-15);
    }

    #[test]
    fn fast_alpha_dot_matches_matrix() {
        let p = [0.3, -1.2, 0.7];
        let v = [
            Complex64::new(1.0, 0.5),
            Complex64::new(-0.2, 0.1),
            Complex64::new(0.0, -1.0),
            Complex64::new(2.0, 0.3),
        ];
        let fast = apply_alpha_dot(p, v);
        let slow = alpha_dot(p) * nalgebra::Vector4::from(v);
        for i in 0..4 {
            assert!((fast[i] - slow[i]).norm() < 1e-14);
        }
    }
}

//! Modified Bessel functions, quadrature, radial convolutions and the
//! closed-form position kernels of `(T - E)⁻¹` and their threshold limits.

mod bessel;
pub mod quadrature;
mod radial;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kinetic::{decay_rate, dirac, Branch, KineticKind, KineticModel, Matrix4, SpectralPoint};

pub use bessel::{bessel_k, k0, k1};
pub use radial::{radial_convolution, BesselK1, FnProfile, Gaussian, RadialProfile, Yukawa};

/// Kernel value at a separation: scalar or 4×4 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelValue {
    Scalar(f64),
    Matrix(Matrix4),
}

impl KernelValue {
    pub fn as_matrix(&self) -> Matrix4 {
        match *self {
            KernelValue::Scalar(s) => Matrix4::identity() * Complex64::from(s),
            KernelValue::Matrix(m) => m,
        }
    }

    pub fn scalar(&self) -> Option<f64> {
        match *self {
            KernelValue::Scalar(s) => Some(s),
            KernelValue::Matrix(_) => None,
        }
    }
}

/// Radial ingredients of a kernel: the Yukawa rate `ν`, the shift
/// `z = m + E` and the threshold flag.
fn kernel_parameters(model: &KineticModel, point: &SpectralPoint) -> Result<(f64, f64)> {
    let m = model.mass;
    match *point {
        SpectralPoint::Energy(w) => {
            crate::kinetic::EnergyWindow::new(model, w.branch, w.energy)?;
            let nu = match model.kind {
                KineticKind::Schrodinger => (-w.energy).sqrt(),
                _ => decay_rate(m, w.energy),
            };
            Ok((nu, m + w.energy))
        }
        SpectralPoint::Threshold(b) => {
            if b == Branch::Lower && !model.is_dirac() {
                return Err(Error::Domain("the lower branch exists only for the Dirac model".into()));
            }
            Ok((0.0, m + model.threshold(b)))
        }
    }
}

/// Third term of the pseudorelativistic kernel,
/// `[(m/2π²)K₁(m|·|)/|·| ∗ e^{-ν|·|}/(4π|·|)](r)`.
pub fn pseudorelativistic_convolution(mass: f64, nu: f64, r: f64) -> Result<f64> {
    radial_convolution(&BesselK1 { mass }, &Yukawa { nu }, r)
}

/// Closed-form kernel `(T - E)⁻¹(x, y)` at separation `r = x - y`, or its
/// threshold limit.
///
/// * Schrödinger: `e^{-√|E| r}/(4πr)`.
/// * Pseudorelativistic: `(m+E) e^{-νr}/(4πr) + (m/2π²)K₁(mr)/r
///   + (m² - ν²)[(m/2π²)K₁(m|·|)/|·| ∗ e^{-ν|·|}/(4π|·|)](r)`.
/// * Dirac: `(e^{-νr}/4π)[(mβ + m + E)/r + iν α·r/r² + iα·r/r³]`.
pub fn resolvent_kernel(model: &KineticModel, r: [f64; 3], point: &SpectralPoint) -> Result<KernelValue> {
    let dist = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    if !(dist > 0.0) {
        return Err(Error::Domain("the kernel is singular at zero separation".into()));
    }
    let (nu, z) = kernel_parameters(model, point)?;
    let m = model.mass;
    let yukawa = (-nu * dist).exp() / (4.0 * PI * dist);
    Ok(match model.kind {
        KineticKind::Schrodinger => KernelValue::Scalar(yukawa),
        KineticKind::Pseudorelativistic => {
            let bessel_term = m / (2.0 * PI * PI) * k1(m * dist) / dist;
            let conv = pseudorelativistic_convolution(m, nu, dist)?;
            KernelValue::Scalar(z * yukawa + bessel_term + (m * m - nu * nu) * conv)
        }
        KineticKind::Dirac => {
            let scalar = dirac::beta() * Complex64::from(m) + Matrix4::identity() * Complex64::from(z);
            let radial = (-nu * dist).exp() / (4.0 * PI) * (nu / (dist * dist) + 1.0 / dist.powi(3));
            let vector = dirac::alpha_dot(r) * Complex64::new(0.0, radial);
            KernelValue::Matrix(scalar * Complex64::from(yukawa) + vector)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinetic::EnergyWindow;
    use approx::assert_relative_eq;

    fn at(e: f64, model: &KineticModel) -> SpectralPoint {
        SpectralPoint::Energy(EnergyWindow::new(model, Branch::Upper, e).unwrap())
    }

    #[test]
    fn schrodinger_values() {
        let s = KineticModel::schrodinger();
        let v = resolvent_kernel(&s, [1.0, 0.0, 0.0], &at(-1.0, &s)).unwrap().scalar().unwrap();
        assert_relative_eq!(v, (-1.0f64).exp() / (4.0 * PI), epsilon = 1e-16);
        assert!((v - 0.029_27).abs() < 1e-5);
        let t = resolvent_kernel(&s, [0.0, 2.0, 0.0], &SpectralPoint::Threshold(Branch::Upper)).unwrap();
        assert_relative_eq!(t.scalar().unwrap(), 1.0 / (8.0 * PI), epsilon = 1e-15);
        assert!(resolvent_kernel(&s, [0.0; 3], &at(-1.0, &s)).is_err());
    }

    #[test]
    fn schrodinger_kernel_grows_toward_threshold() {
        let s = KineticModel::schrodinger();
        let r = [0.3, 0.4, 1.2];
        let vals: Vec<f64> = [-4.0, -1.0, -0.1, -1e-4]
            .iter()
            .map(|&e| resolvent_kernel(&s, r, &at(e, &s)).unwrap().scalar().unwrap())
            .collect();
        assert!(vals.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn dirac_threshold_kernel() {
        let d = KineticModel::dirac(1.0).unwrap();
        let k = resolvent_kernel(&d, [1.0, 0.0, 0.0], &SpectralPoint::Threshold(Branch::Upper))
            .unwrap()
            .as_matrix();
        let expected = (dirac::beta_plus() * Complex64::from(2.0) + dirac::alpha(0) * Complex64::i())
            / Complex64::from(4.0 * PI);
        assert!((k - expected).norm() < 1e-15);
        // no 1/r term in the lower block
        for i in 2..4 {
            for j in 2..4 {
                assert_eq!(k[(i, j)], Complex64::default());
            }
        }
        let lower = resolvent_kernel(&d, [1.0, 0.0, 0.0], &SpectralPoint::Threshold(Branch::Lower))
            .unwrap()
            .as_matrix();
        let expected = (dirac::beta_minus() * Complex64::from(-2.0) + dirac::alpha(0) * Complex64::i())
            / Complex64::from(4.0 * PI);
        assert!((lower - expected).norm() < 1e-15);
    }

    #[test]
    fn dirac_kernel_is_hermitian_under_reflection() {
        let d = KineticModel::dirac(0.8).unwrap();
        let p = at(-0.3, &d);
        let r = [0.4, -0.9, 1.3];
        let a = resolvent_kernel(&d, r, &p).unwrap().as_matrix();
        let b = resolvent_kernel(&d, r.map(|x| -x), &p).unwrap().as_matrix();
        assert!((a - b.adjoint()).norm() < 1e-15);
    }

    #[test]
    fn pseudorelativistic_at_minus_mass_has_only_bessel_term() {
        let pr = KineticModel::pseudorelativistic(1.0).unwrap();
        let v = resolvent_kernel(&pr, [0.0, 0.0, 1.5], &at(-1.0, &pr)).unwrap().scalar().unwrap();
        assert_relative_eq!(v, k1(1.5) / (2.0 * PI * PI * 1.5), max_relative = 1e-14);
    }
}

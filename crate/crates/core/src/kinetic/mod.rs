//! Kinetic energies in momentum space, their resolvent multipliers, the
//! Dirac matrices and the Foldy–Wouthuysen transform.

pub mod dirac;
mod lattice;

use std::fmt;

use nalgebra::Matrix4 as NMatrix4;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use lattice::{truncated_yukawa, Boundary, LatticeResolvent, SpectralPoint};

/// Complex 4×4 matrix.
pub type Matrix4 = NMatrix4<Complex64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KineticKind {
    /// `T = -Δ`, symbol `p²`.
    Schrodinger,
    /// `T = √(-Δ + m²) - m`.
    Pseudorelativistic,
    /// `T = α·(-i∇) + mβ - m` acting on four-spinors.
    Dirac,
}

/// A kinetic energy operator together with its mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KineticModel {
    pub kind: KineticKind,
    /// Ignored for the Schrödinger model.
    pub mass: f64,
}

impl KineticModel {
    pub fn new(kind: KineticKind, mass: f64) -> Result<Self> {
        if kind != KineticKind::Schrodinger && !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::Domain(format!("{kind:?} model needs a positive mass, got {mass}")));
        }
        Ok(Self { kind, mass })
    }

    pub fn schrodinger() -> Self {
        Self { kind: KineticKind::Schrodinger, mass: 1.0 }
    }

    pub fn pseudorelativistic(mass: f64) -> Result<Self> {
        Self::new(KineticKind::Pseudorelativistic, mass)
    }

    pub fn dirac(mass: f64) -> Result<Self> {
        Self::new(KineticKind::Dirac, mass)
    }

    /// Number of field components the model acts on.
    pub fn components(&self) -> usize {
        match self.kind {
            KineticKind::Dirac => 4,
            _ => 1,
        }
    }

    pub fn is_dirac(&self) -> bool {
        self.kind == KineticKind::Dirac
    }

    /// Edge of the essential spectrum approached by `branch`.
    pub fn threshold(&self, branch: Branch) -> f64 {
        match branch {
            Branch::Upper => 0.0,
            Branch::Lower => -2.0 * self.mass,
        }
    }
}

impl fmt::Display for KineticModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            KineticKind::Schrodinger => write!(f, "schrodinger"),
            KineticKind::Pseudorelativistic => write!(f, "pseudorelativistic(m={})", self.mass),
            KineticKind::Dirac => write!(f, "dirac(m={})", self.mass),
        }
    }
}

/// Which spectral edge an energy ladder approaches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// `E ↑ 0`.
    #[default]
    Upper,
    /// `E ↓ -2m`, Dirac only.
    Lower,
}

/// An energy in a spectral gap together with the edge it approaches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyWindow {
    pub branch: Branch,
    pub energy: f64,
}

impl EnergyWindow {
    pub fn new(model: &KineticModel, branch: Branch, energy: f64) -> Result<Self> {
        if !energy.is_finite() || energy >= 0.0 {
            return Err(Error::Domain(format!("energy {energy} is not below the spectrum edge 0")));
        }
        if model.is_dirac() && energy <= -2.0 * model.mass {
            return Err(Error::Domain(format!(
                "energy {energy} is not above the lower Dirac edge {}",
                -2.0 * model.mass
            )));
        }
        if branch == Branch::Lower && !model.is_dirac() {
            return Err(Error::Domain("the lower branch exists only for the Dirac model".into()));
        }
        Ok(Self { branch, energy })
    }

    /// Distance to the threshold the branch approaches.
    pub fn offset(&self, model: &KineticModel) -> f64 {
        (self.energy - model.threshold(self.branch)).abs()
    }
}

/// Decay rate `ν_E = √|m² - (E + m)²|`.
pub fn decay_rate(mass: f64, energy: f64) -> f64 {
    let z = mass + energy;
    (mass * mass - z * z).abs().sqrt()
}

/// Value of a momentum-space symbol: a scalar for the scalar models, a
/// 4×4 matrix for Dirac.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Symbol {
    Scalar(f64),
    Matrix(Matrix4),
}

impl Symbol {
    pub fn as_matrix(&self) -> Matrix4 {
        match *self {
            Symbol::Scalar(s) => Matrix4::identity() * Complex64::from(s),
            Symbol::Matrix(m) => m,
        }
    }

    pub fn scalar(&self) -> Option<f64> {
        match *self {
            Symbol::Scalar(s) => Some(s),
            Symbol::Matrix(_) => None,
        }
    }

    /// Absolute value for scalars, spectral norm for matrices.
    pub fn norm(&self) -> f64 {
        match self {
            Symbol::Scalar(s) => s.abs(),
            Symbol::Matrix(m) => operator_norm(m),
        }
    }
}

/// Largest singular value.
pub fn operator_norm(m: &Matrix4) -> f64 {
    m.singular_values().max()
}

pub fn is_hermitian(m: &Matrix4, tol: f64) -> bool {
    (m - m.adjoint()).norm() <= tol * m.norm().max(1.0)
}

fn norm3(p: [f64; 3]) -> f64 {
    (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt()
}

/// `T(p)`: `p²`, `√(p²+m²) - m`, or `α·p + mβ - m`.
pub fn kinetic_symbol(model: &KineticModel, p: [f64; 3]) -> Symbol {
    let p2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
    let m = model.mass;
    match model.kind {
        KineticKind::Schrodinger => Symbol::Scalar(p2),
        KineticKind::Pseudorelativistic => Symbol::Scalar(p2 / ((p2 + m * m).sqrt() + m)),
        KineticKind::Dirac => {
            Symbol::Matrix(dirac::alpha_dot(p) + dirac::beta() * Complex64::from(m) - Matrix4::identity() * Complex64::from(m))
        }
    }
}

fn fw_coefficients(p: [f64; 3], m: f64) -> (f64, f64) {
    let e = (norm3(p).powi(2) + m * m).sqrt();
    let plus = (0.5 * (1.0 + m / e)).sqrt();
    let minus = (0.5 * (1.0 - m / e)).max(0.0).sqrt();
    (plus, minus)
}

/// Foldy–Wouthuysen matrix `U(p) = a₊ + a₋ βα·p̂`, which satisfies
/// `U T_D U⁻¹ = diag(s - m, s - m, -s - m, -s - m)` with `s = √(p²+m²)`.
pub fn fw_matrix(p: [f64; 3], m: f64) -> Matrix4 {
    fw(p, m, 1.0)
}

/// `U(p)⁻¹ = a₊ - a₋ βα·p̂`.
pub fn fw_inverse(p: [f64; 3], m: f64) -> Matrix4 {
    fw(p, m, -1.0)
}

fn fw(p: [f64; 3], m: f64, sign: f64) -> Matrix4 {
    let (plus, minus) = fw_coefficients(p, m);
    let norm = norm3(p);
    let mut u = Matrix4::identity() * Complex64::from(plus);
    if norm > 0.0 {
        let dir = p.map(|c| c / norm);
        u += dirac::beta() * dirac::alpha_dot(dir) * Complex64::from(sign * minus);
    }
    u
}

fn check_window(model: &KineticModel, window: &EnergyWindow) -> Result<()> {
    EnergyWindow::new(model, window.branch, window.energy).map(|_| ())
}

/// `(T(p) - E)⁻¹`. For Dirac this is `U⁻¹ [β₊h⁺ + β₋h⁻] U` with
/// `h^±(p) = (±√(p²+m²) - m - E)⁻¹`.
pub fn resolvent_multiplier(model: &KineticModel, p: [f64; 3], window: &EnergyWindow) -> Result<Symbol> {
    check_window(model, window)?;
    let e = window.energy;
    Ok(match model.kind {
        KineticKind::Schrodinger | KineticKind::Pseudorelativistic => {
            let t = kinetic_symbol(model, p).scalar().unwrap();
            Symbol::Scalar(1.0 / (t - e))
        }
        KineticKind::Dirac => {
            let m = model.mass;
            let s = (norm3(p).powi(2) + m * m).sqrt();
            let hp = 1.0 / (s - m - e);
            let hm = 1.0 / (-s - m - e);
            Symbol::Matrix(fw_conjugate(p, m, hp, hm))
        }
    })
}

/// `U⁻¹ diag(a, a, b, b) U`.
pub(crate) fn fw_conjugate(p: [f64; 3], m: f64, a: f64, b: f64) -> Matrix4 {
    let d = Matrix4::from_diagonal(&nalgebra::Vector4::new(a, a, b, b).map(Complex64::from));
    fw_inverse(p, m) * d * fw_matrix(p, m)
}

/// Threshold multiplier: `T(p)⁻¹` on the upper branch, `(T_D(p) + 2m)⁻¹`
/// on the lower Dirac branch. The `p = 0` node is assigned zero.
pub fn zero_energy_multiplier(model: &KineticModel, p: [f64; 3], branch: Branch) -> Symbol {
    let p2 = norm3(p).powi(2);
    let m = model.mass;
    match model.kind {
        KineticKind::Schrodinger | KineticKind::Pseudorelativistic => {
            if p2 == 0.0 {
                return Symbol::Scalar(0.0);
            }
            Symbol::Scalar(1.0 / kinetic_symbol(model, p).scalar().unwrap())
        }
        KineticKind::Dirac => {
            if p2 == 0.0 {
                return Symbol::Matrix(Matrix4::zeros());
            }
            // (α·p + mβ ∓ m)⁻¹ = (α·p + mβ ± m) / p²
            let shift = match branch {
                Branch::Upper => m,
                Branch::Lower => -m,
            };
            let num = dirac::alpha_dot(p) + dirac::beta() * Complex64::from(m) + Matrix4::identity() * Complex64::from(shift);
            Symbol::Matrix(num / Complex64::from(p2))
        }
    }
}

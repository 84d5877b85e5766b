//! Momentum-space weights `w(p)`, their admissibility for each kinetic
//! model, weighted distances and the convergence certificate
//! `‖w(φ̂_{E_n} - φ̂₀)‖₂ → 0`.

mod admissibility;
mod certify;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{Field, Representation};
use crate::kinetic::{fw_conjugate, Branch, KineticKind, KineticModel, Matrix4, Symbol};

pub use admissibility::{check_admissible, Admissibility, ConditionVerdict, Method};
pub use certify::{align_eigenvector, certify_convergence, momentum_phi, proof_factors, CertifyOptions, ConvergenceReport};

type Evaluator = dyn Fn([f64; 3]) -> Symbol + Send + Sync;

/// A user-supplied weight.
#[derive(Clone)]
pub struct CustomWeight {
    pub name: String,
    eval: Arc<Evaluator>,
}

impl fmt::Debug for CustomWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomWeight").field("name", &self.name).finish()
    }
}

#[derive(Debug, Clone)]
pub enum WeightKind {
    /// `|T(p)|^s`; on the lower Dirac branch `|T(p) + 2m|^s`.
    Power { s: f64 },
    Custom(CustomWeight),
}

/// A momentum-space weight together with the spectral edge it refers to.
#[derive(Debug, Clone)]
pub struct Weight {
    pub kind: WeightKind,
    pub branch: Branch,
}

impl Weight {
    pub fn power(s: f64) -> Self {
        Self { kind: WeightKind::Power { s }, branch: Branch::Upper }
    }

    pub fn custom(name: impl Into<String>, eval: impl Fn([f64; 3]) -> Symbol + Send + Sync + 'static) -> Self {
        Self { kind: WeightKind::Custom(CustomWeight { name: name.into(), eval: Arc::new(eval) }), branch: Branch::Upper }
    }

    /// Radial weight interpolated linearly in `(p, w)` from a table, held
    /// constant below the first node and extrapolated with the last slope
    /// beyond the final node.
    pub fn radial_table(name: impl Into<String>, p: Vec<f64>, w: Vec<f64>) -> Result<Self> {
        if p.len() < 2 || p.len() != w.len() {
            return Err(Error::Domain("a weight table needs at least two (p, w) pairs of equal length".into()));
        }
        if p.windows(2).any(|x| !(x[1] > x[0])) || p[0] < 0.0 {
            return Err(Error::Domain("weight table momenta must be nonnegative and strictly increasing".into()));
        }
        if w.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("weight table values must be finite".into()));
        }
        Ok(Self::custom(name, move |q| {
            let r = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2]).sqrt();
            let k = p.partition_point(|&x| x <= r);
            let value = if k == 0 {
                w[0]
            } else {
                let i = (k - 1).min(p.len() - 2);
                w[i] + (w[i + 1] - w[i]) * (r - p[i]) / (p[i + 1] - p[i])
            };
            Symbol::Scalar(value)
        }))
    }

    pub fn for_branch(mut self, branch: Branch) -> Self {
        self.branch = branch;
        self
    }

    pub fn label(&self) -> String {
        match &self.kind {
            WeightKind::Power { s } => format!("power(s={s})"),
            WeightKind::Custom(c) => c.name.clone(),
        }
    }

    /// `w(p)` for `model`.
    pub fn evaluate(&self, model: &KineticModel, p: [f64; 3]) -> Symbol {
        match &self.kind {
            WeightKind::Custom(c) => (c.eval)(p),
            WeightKind::Power { s } => power_weight(model, self.branch, *s, p),
        }
    }
}

fn power_weight(model: &KineticModel, branch: Branch, s: f64, p: [f64; 3]) -> Symbol {
    let p2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
    let m = model.mass;
    let pow = |x: f64| if x == 0.0 && s == 0.0 { 1.0 } else { x.abs().powf(s) };
    match model.kind {
        KineticKind::Schrodinger => Symbol::Scalar(pow(p2)),
        KineticKind::Pseudorelativistic => Symbol::Scalar(pow(p2 / ((p2 + m * m).sqrt() + m))),
        KineticKind::Dirac => {
            let e = (p2 + m * m).sqrt();
            let small = pow(p2 / (e + m));
            let large = pow(e + m);
            let (upper, lower) = match branch {
                Branch::Upper => (small, large),
                Branch::Lower => (large, small),
            };
            Symbol::Matrix(fw_conjugate(p, m, upper, lower))
        }
    }
}

/// `‖w(φ̂_A - φ̂_B)‖₂` on the momentum lattice, skipping `p = 0`. Scalar
/// weights act as `w·I` on spinors; matrix weights need spinors.
pub fn weighted_distance(weight: &Weight, model: &KineticModel, a: &Field, b: &Field) -> Result<f64> {
    if a.representation() != Representation::Momentum {
        return Err(Error::Contract("weighted distances are taken between momentum fields".into()));
    }
    let diff = a.sub(b)?;
    let grid = *diff.grid();
    let n3 = grid.len();
    let comps = diff.components();
    let mut sum = 0.0;
    for idx in 1..n3 {
        let v: Vec<Complex64> = (0..comps).map(|c| diff.values()[c * n3 + idx]).collect();
        sum += match weight.evaluate(model, grid.momentum(idx)) {
            Symbol::Scalar(w) => w * w * v.iter().map(|z| z.norm_sqr()).sum::<f64>(),
            Symbol::Matrix(m) => {
                if comps != 4 {
                    return Err(Error::Contract("a matrix weight needs a four-component field".into()));
                }
                matrix_apply_norm_sqr(&m, &v)
            }
        };
    }
    Ok((sum * grid.momentum_cell_volume()).sqrt())
}

fn matrix_apply_norm_sqr(m: &Matrix4, v: &[Complex64]) -> f64 {
    (0..4).map(|r| (0..4).map(|c| m[(r, c)] * v[c]).sum::<Complex64>().norm_sqr()).sum()
}

/// Weight description as it appears in configuration files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightSpec {
    Power { s: f64 },
    /// Radial table `w(|p|)`.
    Table { p: Vec<f64>, w: Vec<f64> },
}

impl WeightSpec {
    pub fn build(&self, branch: Branch) -> Result<Weight> {
        let w = match self {
            WeightSpec::Power { s } => {
                if !s.is_finite() {
                    return Err(Error::Domain(format!("weight exponent must be finite, got {s}")));
                }
                Weight::power(*s)
            }
            WeightSpec::Table { p, w } => Weight::radial_table("table", p.clone(), w.clone())?,
        };
        Ok(w.for_branch(branch))
    }
}

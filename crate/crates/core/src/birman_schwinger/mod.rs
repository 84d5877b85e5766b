//! The Birman–Schwinger operator `K_E = V^{1/2}(T - E)⁻¹V^{1/2}`, its
//! leading eigenpair along an energy ladder and the extrapolation to the
//! coupling-constant threshold.
//!
//! `H = T - λV` has eigenvalue `E` exactly when `K_E` has eigenvalue
//! `1/λ`. Tracking the largest eigenvalue `α(E)` as `E` approaches the
//! edge of the essential spectrum gives the threshold coupling
//! `λ_c = lim 1/α(E)`.

pub mod eigen;
pub mod hamiltonian;
mod curve;
mod operator;
mod potential;

pub use curve::{
    default_start, extrapolate_threshold, geometric_ladder, lambda_curve, mirrored_lambda_curve,
    norm_convergence_check, validate_ladder, CurveOptions, Fit, FitKind, LambdaCurve, NormConvergenceReport,
    ThresholdResult, FIT_POINTS,
};
pub use eigen::{largest_eigenpair, Eigenpair, Solver, SolverOptions};
pub use operator::{apply_bs, gamma5_parity, kramers_partner, BSOperator, Difference, LinearOperator, Mirrored};
pub use potential::{PotentialSpec, SampledPotential};

use crate::error::Result;
use crate::fields::{Field, Representation};

/// `(α, μ)` with `K μ = α μ` for the largest `α`, `‖μ‖₂ = 1` on the
/// lattice and the largest-magnitude entry of `μ` real and positive.
pub fn leading_eigenpair(op: &BSOperator, tol: f64, max_iter: usize) -> Result<(f64, Field)> {
    if op.potential().is_zero() {
        return Err(crate::Error::Degenerate("V vanishes identically".into()));
    }
    let opts = SolverOptions { tol, max_iter, ..SolverOptions::default() };
    let start = default_start(op.model(), op.potential());
    let pair = largest_eigenpair(op, &start, &opts)?;
    let grid = *op.grid();
    let s = 1.0 / grid.cell_volume().sqrt();
    let values = pair.vector.iter().map(|v| v * s).collect();
    Ok((pair.value, Field::from_values(grid, op.model().components(), Representation::Position, values)?))
}

#[cfg(test)]
mod tests;

//! Matrix-free solvers for the largest eigenvalue of a Hermitian operator.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::operator::LinearOperator;
use crate::error::{Error, Result};

pub(crate) fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn axpy(a: Complex64, x: &[Complex64], y: &mut [Complex64]) {
    y.iter_mut().zip(x).for_each(|(u, v)| *u += a * v);
}

fn scale(a: f64, x: &mut [Complex64]) {
    x.iter_mut().for_each(|v| *v *= a);
}

/// Rotates `x` so that its largest-magnitude entry is real and positive.
pub fn fix_gauge(x: &mut [Complex64]) {
    let big = x.iter().copied().max_by(|a, b| a.norm_sqr().total_cmp(&b.norm_sqr()));
    if let Some(v) = big {
        if v.norm() > 0.0 {
            let phase = v.conj() / v.norm();
            x.iter_mut().for_each(|u| *u *= phase);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Solver {
    /// Power iteration; converges to the eigenvalue of largest modulus.
    Power,
    /// Restarted Lanczos with full reorthogonalization; converges to the
    /// largest algebraic eigenvalue even for indefinite operators.
    #[default]
    Lanczos,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub solver: Solver,
    /// Relative residual target `‖Kx - αx‖ ≤ tol·|α|`.
    pub tol: f64,
    /// Maximum number of operator applications.
    pub max_iter: usize,
    /// Krylov basis size per Lanczos cycle.
    pub basis: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { solver: Solver::Lanczos, tol: 1e-9, max_iter: 2000, basis: 30 }
    }
}

/// Unit vector (Euclidean norm) and eigenvalue.
#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub value: f64,
    pub vector: Vec<Complex64>,
    /// `‖Kx - αx‖ / |α|`.
    pub residual: f64,
    pub applications: usize,
}

pub fn largest_eigenpair(op: &dyn LinearOperator, start: &[Complex64], opts: &SolverOptions) -> Result<Eigenpair> {
    if !(opts.tol > 0.0) {
        return Err(Error::Domain(format!("solver tolerance must be positive, got {}", opts.tol)));
    }
    match opts.solver {
        Solver::Power => power_iteration(op, start, opts.tol, opts.max_iter),
        Solver::Lanczos => lanczos(op, start, opts.tol, opts.max_iter, opts.basis.max(4)),
    }
}

fn start_vector(start: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = norm(start);
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::Contract("start vector must be nonzero and finite".into()));
    }
    Ok(start.iter().map(|v| v / n).collect())
}

fn degenerate(kx: &[Complex64]) -> Result<()> {
    if norm(kx) == 0.0 {
        return Err(Error::Degenerate("the operator annihilates the start vector".into()));
    }
    Ok(())
}

pub fn power_iteration(op: &dyn LinearOperator, start: &[Complex64], tol: f64, max_iter: usize) -> Result<Eigenpair> {
    let mut x = start_vector(start)?;
    let mut residual = f64::INFINITY;
    for it in 1..=max_iter {
        let mut kx = op.apply(&x);
        degenerate(&kx)?;
        let alpha = dot(&x, &kx).re;
        let r: f64 = kx.iter().zip(&x).map(|(a, b)| (a - alpha * b).norm_sqr()).sum::<f64>().sqrt();
        residual = r / alpha.abs();
        if residual <= tol {
            fix_gauge(&mut x);
            return Ok(Eigenpair { value: alpha, vector: x, residual, applications: it });
        }
        let nk = norm(&kx);
        scale(1.0 / nk, &mut kx);
        x = kx;
    }
    Err(Error::IterationLimit { iterations: max_iter, residual })
}

pub fn lanczos(
    op: &dyn LinearOperator,
    start: &[Complex64],
    tol: f64,
    max_iter: usize,
    basis: usize,
) -> Result<Eigenpair> {
    let mut x = start_vector(start)?;
    let mut applications = 0;
    let mut residual = f64::INFINITY;
    while applications < max_iter {
        let mut vs: Vec<Vec<Complex64>> = vec![x.clone()];
        let mut alphas = Vec::new();
        let mut betas: Vec<f64> = Vec::new();
        let mut last_beta = 0.0;
        for j in 0..basis {
            let mut w = op.apply(&vs[j]);
            applications += 1;
            if j == 0 {
                degenerate(&w)?;
            }
            let a = dot(&vs[j], &w).re;
            alphas.push(a);
            for _ in 0..2 {
                for v in &vs {
                    let c = dot(v, &w);
                    axpy(-c, v, &mut w);
                }
            }
            let b = norm(&w);
            last_beta = b;
            if b <= 1e-14 * a.abs().max(1e-300) || j + 1 == basis || applications >= max_iter {
                break;
            }
            scale(1.0 / b, &mut w);
            betas.push(b);
            vs.push(w);
        }
        let m = alphas.len();
        let mut t = DMatrix::<f64>::zeros(m, m);
        for i in 0..m {
            t[(i, i)] = alphas[i];
            if i + 1 < m {
                t[(i, i + 1)] = betas[i];
                t[(i + 1, i)] = betas[i];
            }
        }
        let eig = SymmetricEigen::new(t);
        let top = (0..m).max_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b])).unwrap();
        let theta = eig.eigenvalues[top];
        let y = eig.eigenvectors.column(top);
        let mut ritz = vec![Complex64::default(); x.len()];
        for (i, v) in vs.iter().take(m).enumerate() {
            axpy(Complex64::from(y[i]), v, &mut ritz);
        }
        let nr = norm(&ritz);
        scale(1.0 / nr, &mut ritz);
        residual = (last_beta * y[m - 1]).abs() / theta.abs();
        log::debug!("lanczos cycle: {m} vectors, theta {theta:.12e}, residual {residual:.3e}");
        x = ritz;
        if residual <= tol {
            // confirm with a true residual
            let kx = op.apply(&x);
            applications += 1;
            let r = kx.iter().zip(&x).map(|(a, b)| (a - theta * b).norm_sqr()).sum::<f64>().sqrt();
            residual = r / theta.abs();
            if residual <= tol * 10.0 {
                fix_gauge(&mut x);
                return Ok(Eigenpair { value: theta, vector: x, residual, applications });
            }
        }
    }
    Err(Error::IterationLimit { iterations: applications, residual })
}

/// Estimates `‖A‖` for Hermitian `A` by power iteration on `A`, returning
/// the last `‖Ax‖` with `‖x‖ = 1`.
pub fn operator_norm_estimate(op: &dyn LinearOperator, start: &[Complex64], iterations: usize) -> Result<f64> {
    let mut x = start_vector(start)?;
    let mut estimate = 0.0;
    for _ in 0..iterations {
        let ax = op.apply(&x);
        let n = norm(&ax);
        if n == 0.0 {
            return Ok(0.0);
        }
        let change = (n - estimate).abs();
        estimate = n;
        x = ax.into_iter().map(|v| v / n).collect();
        if change <= 1e-8 * n {
            break;
        }
    }
    Ok(estimate)
}

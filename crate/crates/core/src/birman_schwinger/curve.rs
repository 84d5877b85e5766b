use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::eigen::{dot, largest_eigenpair, norm, operator_norm_estimate, Eigenpair, SolverOptions};
use super::operator::{kramers_partner, BSOperator, Difference, LinearOperator, Mirrored};
use super::potential::SampledPotential;
use crate::error::{Error, Result};
use crate::fields::{Field, Grid3, Representation};
use crate::kinetic::{Boundary, Branch, EnergyWindow, KineticModel, SpectralPoint};

/// Discretization and solver choices shared by the ladder computations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveOptions {
    pub boundary: Boundary,
    pub solver: SolverOptions,
}

impl Default for CurveOptions {
    fn default() -> Self {
        Self { boundary: Boundary::Isolated, solver: SolverOptions::default() }
    }
}

/// Leading Birman–Schwinger eigenpairs along an energy ladder.
#[derive(Debug, Clone)]
pub struct LambdaCurve {
    pub model: KineticModel,
    pub branch: Branch,
    pub boundary: Boundary,
    pub energies: Vec<f64>,
    pub alphas: Vec<f64>,
    pub lambdas: Vec<f64>,
    /// Unit-norm eigenvectors `μ_{E_n}`.
    pub mus: Vec<Field>,
    /// `‖μ_{E_{n+1}} - μ_{E_n}‖₂`, one per consecutive pair.
    pub cauchy_residuals: Vec<f64>,
    /// `Re⟨μ_{E_n}, μ_{E_{n+1}}⟩`.
    pub overlaps: Vec<f64>,
    pub solver_residuals: Vec<f64>,
    pub applications: Vec<usize>,
}

/// Default start vector: `V^{1/2}` in component 0, and for Dirac also in
/// component 2. Both entries carry the same spin, which keeps the Krylov
/// space away from the Kramers partner, while covering both parity
/// channels so the leading eigenvalue is found on either branch.
pub fn default_start(model: &KineticModel, potential: &SampledPotential) -> Vec<Complex64> {
    let n3 = potential.grid().len();
    let comps = model.components();
    let mut x = vec![Complex64::default(); comps * n3];
    for slot in (0..comps).step_by(2) {
        for (i, s) in potential.sqrt_values().iter().enumerate() {
            x[slot * n3 + i] = Complex64::from(*s);
        }
    }
    x
}

/// Checks that `energies` approach the branch threshold strictly.
pub fn validate_ladder(model: &KineticModel, branch: Branch, energies: &[f64]) -> Result<()> {
    let thr = model.threshold(branch);
    for &e in energies {
        EnergyWindow::new(model, branch, e)?;
    }
    if energies.windows(2).any(|w| (w[1] - thr).abs() >= (w[0] - thr).abs()) {
        return Err(Error::Domain("energies must approach the threshold strictly monotonically".into()));
    }
    Ok(())
}

fn to_field(grid: &Grid3, comps: usize, mut x: Vec<Complex64>) -> Result<Field> {
    let s = 1.0 / (norm(&x) * grid.cell_volume().sqrt());
    x.iter_mut().for_each(|v| *v *= s);
    Field::from_values(*grid, comps, Representation::Position, x)
}

/// The vector of `span{x}` (or `span{x, Θx}` for Dirac spinors, whose
/// eigenvalues are Kramers-degenerate) closest to `prev`, with the norm
/// of `x`.
fn align_with(x: Vec<Complex64>, prev: &[Complex64], comps: usize) -> Vec<Complex64> {
    let scale = norm(&x);
    let mut basis = vec![x];
    if comps == 4 {
        basis.push(kramers_partner(&basis[0]));
    }
    let mut y = vec![Complex64::default(); prev.len()];
    for b in &basis {
        let c = dot(b, prev) / (scale * scale);
        y.iter_mut().zip(b).for_each(|(y, b)| *y += c * b);
    }
    let ny = norm(&y);
    if ny < 1e-12 * scale {
        return basis.swap_remove(0);
    }
    y.iter_mut().for_each(|v| *v *= scale / ny);
    y
}

fn trace(
    model: KineticModel,
    branch: Branch,
    boundary: Boundary,
    potential: &SampledPotential,
    energies: &[f64],
    solve_at: impl Fn(f64, &[Complex64]) -> Result<Eigenpair>,
) -> Result<LambdaCurve> {
    validate_ladder(&model, branch, energies)?;
    let grid = *potential.grid();
    let comps = model.components();
    let mut start = default_start(&model, potential);
    let mut curve = LambdaCurve {
        model,
        branch,
        boundary,
        energies: energies.to_vec(),
        alphas: vec![],
        lambdas: vec![],
        mus: vec![],
        cauchy_residuals: vec![],
        overlaps: vec![],
        solver_residuals: vec![],
        applications: vec![],
    };
    let mut previous: Option<Vec<Complex64>> = None;
    for &e in energies {
        let pair = solve_at(e, &start)?;
        if !(pair.value > 0.0) {
            return Err(Error::Inconsistent(format!(
                "no positive Birman–Schwinger eigenvalue at E = {e}"
            )));
        }
        let mut x = pair.vector;
        if let Some(prev) = &previous {
            x = align_with(x, prev, comps);
            let ov = dot(prev, &x).re;
            let diff: Vec<Complex64> = x.iter().zip(prev).map(|(a, b)| a - b).collect();
            curve.overlaps.push(ov);
            curve.cauchy_residuals.push(norm(&diff));
        }
        log::info!("E = {e:.6e}: alpha = {:.12e}, lambda = {:.12e}", pair.value, 1.0 / pair.value);
        curve.alphas.push(pair.value);
        curve.lambdas.push(1.0 / pair.value);
        curve.solver_residuals.push(pair.residual);
        curve.applications.push(pair.applications);
        curve.mus.push(to_field(&grid, comps, x.clone())?);
        start = x.clone();
        previous = Some(x);
    }
    Ok(curve)
}

/// `λ(E) = 1/α(E)` along the ladder, each solve warm-started from the
/// previous eigenvector.
pub fn lambda_curve(
    model: &KineticModel,
    potential: &Arc<SampledPotential>,
    energies: &[f64],
    branch: Branch,
    opts: &CurveOptions,
) -> Result<LambdaCurve> {
    trace(*model, branch, opts.boundary, potential, energies, |e, start| {
        let w = EnergyWindow::new(model, branch, e)?;
        let op = BSOperator::new(*model, potential.clone(), SpectralPoint::Energy(w), opts.boundary)?;
        largest_eigenpair(&op, start, &opts.solver)
    })
}

/// Lower-branch curve computed through the upper-branch operator: at
/// each `E'` the operator is `-Γ K_{-2m-E'}[V(-·)] Γ` with
/// `Γ = γ⁵ ∘ parity`.
pub fn mirrored_lambda_curve(
    model: &KineticModel,
    potential: &Arc<SampledPotential>,
    lower_energies: &[f64],
    opts: &CurveOptions,
) -> Result<LambdaCurve> {
    if !model.is_dirac() {
        return Err(Error::Contract("the branch mirror needs the Dirac model".into()));
    }
    let reflected = Arc::new(potential.reflected());
    trace(*model, Branch::Lower, opts.boundary, potential, lower_energies, |e, start| {
        let upper = -2.0 * model.mass - e;
        let w = EnergyWindow::new(model, Branch::Upper, upper)?;
        let op = BSOperator::new(*model, reflected.clone(), SpectralPoint::Energy(w), opts.boundary)?;
        largest_eigenpair(&Mirrored::new(&op)?, start, &opts.solver)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitKind {
    /// `λ = c₀ + c₁ κ`, `κ = |E - E_thr|^{1/2}`.
    SqrtLinear,
    /// `λ = c₀ + c₁ κ + c₂ κ²`.
    SqrtQuadratic,
    /// `λ = c₀ + c₁ |E - E_thr|`.
    Linear,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub kind: FitKind,
    pub coefficients: Vec<f64>,
    /// Root-mean-square residual of the fit.
    pub rms_residual: f64,
    /// `√(RSS / (points - parameters))`, infinite without spare points.
    pub standard_error: f64,
}

fn least_squares(kind: FitKind, offsets: &[f64], lambdas: &[f64]) -> Fit {
    let basis = |d: f64| -> Vec<f64> {
        let k = d.sqrt();
        match kind {
            FitKind::SqrtLinear => vec![1.0, k],
            FitKind::SqrtQuadratic => vec![1.0, k, k * k],
            FitKind::Linear => vec![1.0, d],
        }
    };
    let rows: Vec<Vec<f64>> = offsets.iter().map(|&d| basis(d)).collect();
    let p = rows[0].len();
    let a = DMatrix::from_fn(rows.len(), p, |i, j| rows[i][j]);
    let b = DVector::from_column_slice(lambdas);
    let coef = a.clone().svd(true, true).solve(&b, 1e-15).expect("SVD solve");
    let res = &a * &coef - &b;
    let rss = res.norm_squared();
    let dof = rows.len().saturating_sub(p);
    Fit {
        kind,
        coefficients: coef.iter().copied().collect(),
        rms_residual: (rss / rows.len() as f64).sqrt(),
        standard_error: if dof == 0 { f64::INFINITY } else { (rss / dof as f64).sqrt() },
    }
}

/// Ladder with extrapolated threshold coupling and the limit vector.
#[derive(Debug, Clone)]
pub struct ThresholdResult {
    pub curve: LambdaCurve,
    pub lambda_c: f64,
    pub fit: Fit,
    pub candidate_fits: Vec<Fit>,
    /// Last ladder eigenvector, taken as `μ₀`.
    pub mu_0: Field,
    /// `⟨μ₀, K₀ μ₀⟩`.
    pub threshold_rayleigh: f64,
    /// `‖K₀ μ₀ - λ_c⁻¹ μ₀‖₂`.
    pub threshold_residual: f64,
}

impl ThresholdResult {
    pub fn branch(&self) -> Branch {
        self.curve.branch
    }

    pub fn model(&self) -> &KineticModel {
        &self.curve.model
    }
}

/// Number of trailing rungs used by the extrapolation fits.
pub const FIT_POINTS: usize = 5;

/// Extrapolates `λ_n` to the threshold and checks the limit relation
/// `K₀ μ₀ ≈ λ_c⁻¹ μ₀`.
pub fn extrapolate_threshold(curve: LambdaCurve, potential: &Arc<SampledPotential>) -> Result<ThresholdResult> {
    let n = curve.lambdas.len();
    if n < 4 {
        return Err(Error::Domain(format!("extrapolation needs at least 4 energies, got {n}")));
    }
    let increasing = curve.lambdas.windows(2).all(|w| w[1] > w[0]);
    let decreasing = curve.lambdas.windows(2).all(|w| w[1] < w[0]);
    if !(increasing || decreasing) {
        return Err(Error::Inconsistent("λ_n is not monotone along the ladder".into()));
    }
    let thr = curve.model.threshold(curve.branch);
    let k = n.min(FIT_POINTS);
    let offsets: Vec<f64> = curve.energies[n - k..].iter().map(|e| (e - thr).abs()).collect();
    let lambdas = &curve.lambdas[n - k..];
    let candidates: Vec<Fit> = [FitKind::SqrtLinear, FitKind::SqrtQuadratic, FitKind::Linear]
        .into_iter()
        .map(|kind| least_squares(kind, &offsets, lambdas))
        .collect();
    let fit = candidates
        .iter()
        .min_by(|a, b| a.standard_error.total_cmp(&b.standard_error))
        .cloned()
        .unwrap();
    let lambda_c = fit.coefficients[0];

    let mu_0 = curve.mus[n - 1].clone();
    let k0 = BSOperator::new(curve.model, potential.clone(), SpectralPoint::Threshold(curve.branch), curve.boundary)?;
    let kmu = k0.apply(mu_0.values());
    let h3 = mu_0.grid().cell_volume();
    let rayleigh = dot(mu_0.values(), &kmu).re * h3;
    let diff: Vec<Complex64> = kmu.iter().zip(mu_0.values()).map(|(a, b)| a - b / lambda_c).collect();
    let threshold_residual = norm(&diff) * h3.sqrt();
    Ok(ThresholdResult {
        curve,
        lambda_c,
        fit,
        candidate_fits: candidates,
        mu_0,
        threshold_rayleigh: rayleigh,
        threshold_residual,
    })
}

/// Operator-norm gaps `‖K_{E_{n+1}} - K_{E_n}‖` along a ladder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormConvergenceReport {
    pub energies: Vec<f64>,
    pub gaps: Vec<f64>,
    pub decreasing: bool,
}

pub fn norm_convergence_check(
    model: &KineticModel,
    potential: &Arc<SampledPotential>,
    energies: &[f64],
    branch: Branch,
    opts: &CurveOptions,
    seed: u64,
) -> Result<NormConvergenceReport> {
    validate_ladder(model, branch, energies)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n3 = potential.grid().len();
    let sqrt = potential.sqrt_values();
    let start: Vec<Complex64> = (0..model.components() * n3)
        .map(|i| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * sqrt[i % n3])
        .collect();
    let ops = energies
        .iter()
        .map(|&e| {
            let w = EnergyWindow::new(model, branch, e)?;
            BSOperator::new(*model, potential.clone(), SpectralPoint::Energy(w), opts.boundary)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut gaps = Vec::with_capacity(ops.len().saturating_sub(1));
    for pair in ops.windows(2) {
        if potential.is_zero() {
            gaps.push(0.0);
            continue;
        }
        let diff = Difference { a: &pair[1], b: &pair[0] };
        gaps.push(operator_norm_estimate(&diff, &start, 200)?);
    }
    let decreasing = gaps.windows(2).all(|w| w[1] <= w[0]);
    Ok(NormConvergenceReport { energies: energies.to_vec(), gaps, decreasing })
}

/// Geometric ladder `E_n = E_thr ± offset₀·ratioⁿ`, `n = 0..count`.
pub fn geometric_ladder(model: &KineticModel, branch: Branch, offset0: f64, ratio: f64, count: usize) -> Vec<f64> {
    let thr = model.threshold(branch);
    let sign = if branch == Branch::Upper { -1.0 } else { 1.0 };
    (0..count).map(|n| thr + sign * offset0 * ratio.powi(n as i32)).collect()
}

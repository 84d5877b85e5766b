//! Threshold states: the Lippmann–Schwinger reconstruction
//! `φ_E = λ(T - E)⁻¹V^{1/2}μ_E`, its threshold limit
//! `φ₀ = λ_c T⁻¹V^{1/2}μ₀`, the resonance criterion and the weak form of
//! `Hφ₀ = 0`.

mod holder;
mod quadrature;
mod residual;

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::birman_schwinger::{LambdaCurve, SampledPotential};
use crate::error::{Error, Result};
use crate::fields::{fourier, lq_norm, Direction, Field, Representation};
use crate::kinetic::{
    zero_energy_multiplier, Boundary, Branch, EnergyWindow, KineticModel, LatticeResolvent, SpectralPoint, Symbol,
};

pub use holder::{holder_check, HolderReport, HOLDER_TRIPLES};
pub use quadrature::{kernel_cross_check, KernelCrossCheck};
pub use residual::{default_test_pack, weak_residual, weak_residual_of, GaussianTest};

/// Whether a threshold state is square integrable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    /// `φ₀ ∈ L₂`: the threshold is an eigenvalue.
    Eigenvalue,
    /// `φ₀ ∉ L₂`: a zero resonance.
    Resonance,
}

/// Construction parameters for [`build_threshold_state`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateOptions {
    /// Relative tolerance of the resonance criterion.
    pub tol_c: f64,
    /// Number of nodes in the kernel-quadrature cross-check.
    pub subsample: usize,
    pub seed: u64,
}

impl Default for StateOptions {
    fn default() -> Self {
        Self { tol_c: 1e-2, subsample: 64, seed: 7 }
    }
}

/// `c = ∫ V P φ₀` with `P` the identity for scalar models and `β_±` for
/// the Dirac branches, together with the decision threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonanceReport {
    /// One entry for scalar models, four for Dirac.
    pub criterion: Vec<Complex64>,
    /// Euclidean norm of `criterion`.
    pub magnitude: f64,
    /// `tol_c ‖V‖₁ max_{supp V} |φ₀|`.
    pub tolerance: f64,
    pub classification: Classification,
}

impl ResonanceReport {
    /// `magnitude / tolerance`.
    pub fn margin(&self) -> f64 {
        self.magnitude / self.tolerance
    }
}

#[derive(Debug, Clone)]
pub struct ThresholdState {
    pub model: KineticModel,
    pub branch: Branch,
    pub lambda_c: f64,
    /// `V^{1/2}μ₀`, position representation.
    pub f0: Field,
    /// `λ_c T(p)⁻¹ f̂₀(p)`, zero at `p = 0`.
    pub phi_momentum: Field,
    /// `λ_c ∫ T⁻¹(x - y) f₀(y) dy` through the isolated lattice resolvent.
    pub phi_position: Field,
    pub resonance: ResonanceReport,
    pub cross_check: KernelCrossCheck,
}

impl ThresholdState {
    pub fn classification(&self) -> Classification {
        self.resonance.classification
    }
}

fn position_product(potential: &SampledPotential, field: &Field, root: bool) -> Result<Field> {
    let weights = if root { potential.sqrt_values() } else { potential.values() };
    if field.grid() != potential.grid() || field.representation() != Representation::Position {
        return Err(Error::Contract("expected a position field on the potential grid".into()));
    }
    let n3 = weights.len();
    Ok(field.map(|i, v| v * weights[i % n3]))
}

fn check_components(model: &KineticModel, field: &Field) -> Result<()> {
    if field.components() != model.components() {
        return Err(Error::Contract("component count does not match the kinetic model".into()));
    }
    Ok(())
}

/// `φ_E = λ (T - E)⁻¹ V^{1/2} μ` on the lattice.
pub fn reconstruct_phi(
    model: &KineticModel,
    potential: &SampledPotential,
    window: &EnergyWindow,
    mu: &Field,
    lambda: f64,
    boundary: Boundary,
) -> Result<Field> {
    check_components(model, mu)?;
    let f = position_product(potential, mu, true)?;
    let resolvent = LatticeResolvent::new(*model, *potential.grid(), SpectralPoint::Energy(*window), boundary)?;
    Ok(resolvent.apply(&f)?.scale(Complex64::from(lambda)))
}

/// `‖V^{1/2}φ / ‖V^{1/2}φ‖₂ - μ‖₂` for unit `μ`: how well `φ` solves the
/// Lippmann–Schwinger equation with source `μ`.
pub fn lippmann_schwinger_residual(potential: &SampledPotential, phi: &Field, mu: &Field) -> Result<f64> {
    let g = position_product(potential, phi, true)?;
    let norm = lq_norm(&g, 2.0)?;
    if norm == 0.0 {
        return lq_norm(mu, 2.0);
    }
    lq_norm(&g.scale(Complex64::from(1.0 / norm)).sub(mu)?, 2.0)
}

/// `f₀ = V^{1/2}μ₀` and `φ̂₀ = λ_c T(p)⁻¹ f̂₀` with the zero node set to 0.
fn momentum_state(model: &KineticModel, branch: Branch, potential: &SampledPotential, mu0: &Field, lambda_c: f64) -> Result<(Field, Field)> {
    let f0 = position_product(potential, mu0, true)?;
    let f_hat = fourier(&f0, Direction::Forward)?;
    let grid = *f0.grid();
    let n3 = grid.len();
    let comps = model.components();
    let mut values = vec![Complex64::default(); comps * n3];
    for idx in 0..n3 {
        match zero_energy_multiplier(model, grid.momentum(idx), branch) {
            Symbol::Scalar(s) => values[idx] = f_hat.values()[idx] * s * lambda_c,
            Symbol::Matrix(m) => {
                for r in 0..4 {
                    let mut acc = Complex64::default();
                    for c in 0..4 {
                        acc += m[(r, c)] * f_hat.values()[c * n3 + idx];
                    }
                    values[r * n3 + idx] = acc * lambda_c;
                }
            }
        }
    }
    Ok((f0, Field::from_values(grid, comps, Representation::Momentum, values)?))
}

/// Builds `φ₀` (or `φ_{-2m}` on the lower Dirac branch) from the limit
/// eigenvector `μ₀` (unit lattice norm) and the threshold coupling.
///
/// The momentum form samples `λ_c T(p)⁻¹ f̂₀` on the lattice. The
/// position form applies the threshold resolvent with its Coulomb part
/// truncated at `L/2`, which equals the free-space convolution at every
/// node within `L/2 - R` of the origin when `supp V` lies in the ball of
/// radius `R`. A kernel quadrature on a seeded subsample cross-checks it.
pub fn build_threshold_state(
    model: &KineticModel,
    branch: Branch,
    potential: &Arc<SampledPotential>,
    mu0: &Field,
    lambda_c: f64,
    opts: &StateOptions,
) -> Result<ThresholdState> {
    check_components(model, mu0)?;
    if branch == Branch::Lower && !model.is_dirac() {
        return Err(Error::Domain("the lower branch exists only for the Dirac model".into()));
    }
    if !(lambda_c > 0.0 && lambda_c.is_finite()) {
        return Err(Error::Domain(format!("threshold coupling must be positive, got {lambda_c}")));
    }
    let (f0, phi_momentum) = momentum_state(model, branch, potential, mu0, lambda_c)?;
    let resolvent =
        LatticeResolvent::new(*model, *potential.grid(), SpectralPoint::Threshold(branch), Boundary::Isolated)?;
    let phi_position = resolvent.apply(&f0)?.scale(Complex64::from(lambda_c));
    let resonance = resonance_criterion(&phi_position, branch, potential, opts.tol_c)?;
    let cross_check = kernel_cross_check(model, branch, potential, &f0, &phi_position, lambda_c, opts.subsample, opts.seed)?;
    Ok(ThresholdState {
        model: *model,
        branch,
        lambda_c,
        f0,
        phi_momentum,
        phi_position,
        resonance,
        cross_check,
    })
}

/// Computes `c = ∫ V P φ` and classifies `φ`: eigenvalue when
/// `|c| < tol_c ‖V‖₁ max_{supp V}|φ|`, resonance otherwise. `P` is the
/// identity for one-component fields and `β₊` (upper) or `β₋` (lower)
/// for spinors.
pub fn resonance_criterion(phi: &Field, branch: Branch, potential: &SampledPotential, tol_c: f64) -> Result<ResonanceReport> {
    if !(tol_c > 0.0) {
        return Err(Error::Domain(format!("classification tolerance must be positive, got {tol_c}")));
    }
    let vphi = position_product(potential, phi, false)?;
    let n3 = potential.grid().len();
    let h3 = potential.grid().cell_volume();
    let kept = |c: usize| match (phi.components(), branch) {
        (1, _) => true,
        (_, Branch::Upper) => c < 2,
        (_, Branch::Lower) => c >= 2,
    };
    let criterion: Vec<Complex64> = (0..phi.components())
        .map(|c| if kept(c) { vphi.component(c).iter().sum::<Complex64>() * h3 } else { Complex64::default() })
        .collect();
    let magnitude = criterion.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    let local = (0..n3)
        .filter(|&i| potential.values()[i] > 0.0)
        .map(|i| phi.pointwise_norm(i))
        .fold(0.0, f64::max);
    let tolerance = tol_c * potential.l1_norm() * local;
    let classification = if magnitude < tolerance { Classification::Eigenvalue } else { Classification::Resonance };
    Ok(ResonanceReport { criterion, magnitude, tolerance, classification })
}

/// Lattice norms of `f_{E_n} - f₀` along a ladder, `f = V^{1/2}μ`, with
/// `f₀` from the last rung.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceConvergence {
    pub energies: Vec<f64>,
    /// `‖f_{E_n} - f₀‖₁`.
    pub l1: Vec<f64>,
    /// `‖f_{E_n} - f₀‖₂`.
    pub l2: Vec<f64>,
    /// `‖f̂_{E_n} - f̂₀‖₂`.
    pub hat_l2: Vec<f64>,
    /// `‖f̂_{E_n} - f̂₀‖_∞`.
    pub hat_linf: Vec<f64>,
    /// All four sequences decrease strictly.
    pub monotone: bool,
}

pub fn source_convergence(curve: &LambdaCurve, potential: &SampledPotential) -> Result<SourceConvergence> {
    let n = curve.mus.len();
    if n < 2 {
        return Err(Error::Domain("source convergence needs at least two rungs".into()));
    }
    let f0 = position_product(potential, &curve.mus[n - 1], true)?;
    let mut report = SourceConvergence {
        energies: curve.energies[..n - 1].to_vec(),
        l1: vec![],
        l2: vec![],
        hat_l2: vec![],
        hat_linf: vec![],
        monotone: false,
    };
    for mu in &curve.mus[..n - 1] {
        let d = position_product(potential, mu, true)?.sub(&f0)?;
        let d_hat = fourier(&d, Direction::Forward)?;
        report.l1.push(lq_norm(&d, 1.0)?);
        report.l2.push(lq_norm(&d, 2.0)?);
        report.hat_l2.push(lq_norm(&d_hat, 2.0)?);
        report.hat_linf.push(lq_norm(&d_hat, f64::INFINITY)?);
    }
    let strictly = |v: &[f64]| v.windows(2).all(|w| w[1] < w[0]);
    report.monotone = strictly(&report.l1) && strictly(&report.l2) && strictly(&report.hat_l2) && strictly(&report.hat_linf);
    Ok(report)
}

/// Least-squares slope of `log ⟨|φ|⟩` against `log r` over the shell
/// averages of the listed components in `r_min < |x| < r_max`.
pub fn far_field_exponent(phi: &Field, components: &[usize], r_min: f64, r_max: f64) -> Result<f64> {
    if phi.representation() != Representation::Position {
        return Err(Error::Contract("far-field fit expects a position field".into()));
    }
    let grid = phi.grid();
    let h = grid.spacing();
    let bins = ((r_max - r_min) / h).ceil().max(1.0) as usize;
    let mut sums = vec![(0.0f64, 0.0f64, 0usize); bins];
    for idx in 0..grid.len() {
        let x = grid.position(idx);
        let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        if r <= r_min || r >= r_max {
            continue;
        }
        let b = (((r - r_min) / h) as usize).min(bins - 1);
        let mag = components.iter().map(|&c| phi.component(c)[idx].norm_sqr()).sum::<f64>().sqrt();
        sums[b].0 += r;
        sums[b].1 += mag;
        sums[b].2 += 1;
    }
    let points: Vec<(f64, f64)> = sums
        .iter()
        .filter(|s| s.2 > 0 && s.1 > 0.0)
        .map(|s| ((s.0 / s.2 as f64).ln(), (s.1 / s.2 as f64).ln()))
        .collect();
    if points.len() < 3 {
        return Err(Error::Domain("too few populated shells for a far-field fit".into()));
    }
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests;

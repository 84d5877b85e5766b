use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::admissibility::critical_block_norm;
use super::{check_admissible, weighted_distance, Admissibility, Weight};
use crate::birman_schwinger::{kramers_partner, SampledPotential, ThresholdResult};
use crate::error::{Error, Result};
use crate::fields::{fourier, inner, Direction, Field, Grid3, Representation};
use crate::kinetic::{
    resolvent_multiplier, zero_energy_multiplier, Branch, EnergyWindow, KineticModel, SpectralPoint, Symbol,
};
use crate::threshold_state::ThresholdState;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertifyOptions {
    /// Upper bound required of the last distance.
    pub floor: f64,
    /// Number of trailing rungs over which the distances must decrease
    /// strictly.
    pub tail: usize,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self { floor: 5e-2, tail: 4 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub weight: String,
    pub model: KineticModel,
    pub branch: Branch,
    pub admissibility: Admissibility,
    pub energies: Vec<f64>,
    /// `‖w(φ̂_{E_n} - φ̂₀)‖₂`.
    pub distances: Vec<f64>,
    /// `‖wχ_<(T - E_n)⁻¹‖₂` on the lattice.
    pub smallp_factors: Vec<f64>,
    /// `‖wχ_>(T - E_n)⁻¹‖_∞` on the lattice.
    pub largep_factors: Vec<f64>,
    /// The two factors with `T⁻¹` (or `(T + 2m)⁻¹`) in place of the
    /// resolvent, which bound every rung.
    pub smallp_bound: f64,
    pub largep_bound: f64,
    pub decreasing: bool,
    pub below_floor: bool,
    pub factors_bounded: bool,
}

impl ConvergenceReport {
    pub fn passed(&self) -> bool {
        self.decreasing && self.below_floor
    }
}

fn multiply(symbol: Symbol, comps: usize, n3: usize, idx: usize, src: &[Complex64], dst: &mut [Complex64], factor: f64) {
    match symbol {
        Symbol::Scalar(s) => {
            for c in 0..comps {
                dst[c * n3 + idx] = src[c * n3 + idx] * (s * factor);
            }
        }
        Symbol::Matrix(m) => {
            for r in 0..4 {
                dst[r * n3 + idx] = (0..4).map(|c| m[(r, c)] * src[c * n3 + idx]).sum::<Complex64>() * factor;
            }
        }
    }
}

fn multiplier(model: &KineticModel, point: &SpectralPoint, p: [f64; 3]) -> Result<Symbol> {
    match point {
        SpectralPoint::Energy(w) => resolvent_multiplier(model, p, w),
        SpectralPoint::Threshold(b) => Ok(zero_energy_multiplier(model, p, *b)),
    }
}

/// `λ (T(p) - E)⁻¹ f̂(p)` sampled on the momentum lattice, or
/// `λ T(p)⁻¹ f̂(p)` at a threshold; the `p = 0` node of a threshold
/// multiplier is zero.
pub fn momentum_phi(model: &KineticModel, point: &SpectralPoint, f_hat: &Field, lambda: f64) -> Result<Field> {
    if f_hat.representation() != Representation::Momentum {
        return Err(Error::Contract("expected a momentum field".into()));
    }
    let grid = *f_hat.grid();
    let n3 = grid.len();
    let comps = f_hat.components();
    let mut out = vec![Complex64::default(); comps * n3];
    for idx in 0..n3 {
        multiply(multiplier(model, point, grid.momentum(idx))?, comps, n3, idx, f_hat.values(), &mut out, lambda);
    }
    Field::from_values(grid, comps, Representation::Momentum, out)
}

/// Unit vector of the eigenspace of the unit-norm `mu` closest to
/// `target`: a phase rotation of `mu` for scalar models, and the
/// normalized projection of `target` onto `span{μ, Θμ}` for Dirac, whose
/// eigenvalues are Kramers-degenerate.
pub fn align_eigenvector(mu: &Field, target: &Field) -> Result<Field> {
    let mut basis = vec![mu.clone()];
    if mu.components() == 4 {
        let partner = kramers_partner(mu.values());
        basis.push(Field::from_values(*mu.grid(), 4, mu.representation(), partner)?);
    }
    let mut out = Field::zeros(*mu.grid(), mu.components(), mu.representation());
    for b in &basis {
        out = out.add(&b.scale(inner(b, target)?))?;
    }
    let norm = inner(&out, &out)?.re.sqrt();
    if norm < 1e-12 {
        return Ok(mu.clone());
    }
    Ok(out.scale(Complex64::from(1.0 / norm)))
}

/// `(‖wχ_<R‖₂, ‖wχ_>R‖_∞)` over the nonzero lattice momenta, `R` the
/// resolvent multiplier at `point`. The pointwise norm is `|w(p)R(p)|`
/// for scalar models and, for Dirac, the spectral norm of the critical
/// `β_±` block of `w(p)R(p)` in the Foldy–Wouthuysen frame; the opposite
/// block stays bounded uniformly in `E`.
pub fn proof_factors(weight: &Weight, model: &KineticModel, grid: &Grid3, point: &SpectralPoint) -> Result<(f64, f64)> {
    let mut small = 0.0;
    let mut large: f64 = 0.0;
    for idx in 1..grid.len() {
        let p = grid.momentum(idx);
        let r = multiplier(model, point, p)?;
        let w = weight.evaluate(model, p);
        let norm = match (w, r) {
            (Symbol::Scalar(a), Symbol::Scalar(b)) => (a * b).abs(),
            (w, r) => critical_block_norm(&(w.as_matrix() * r.as_matrix()), model.mass, weight.branch, p),
        };
        let pn = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        if pn < 1.0 {
            small += norm * norm;
        } else {
            large = large.max(norm);
        }
    }
    Ok(((small * grid.momentum_cell_volume()).sqrt(), large))
}

/// Weighted distances `d_n = ‖w(φ̂_{E_n} - φ̂₀)‖₂` along the ladder of
/// `result`, with `φ̂_{E_n} = λ_n (T - E_n)⁻¹ (V^{1/2}μ_n)^` sampled on
/// the same lattice as `state.phi_momentum` after aligning `μ_n` with
/// `μ₀` inside its eigenspace, and the two resolvent
/// factors that control the small- and large-momentum parts.
pub fn certify_convergence(
    model: &KineticModel,
    potential: &SampledPotential,
    weight: &Weight,
    result: &ThresholdResult,
    state: &ThresholdState,
    opts: &CertifyOptions,
) -> Result<ConvergenceReport> {
    let branch = result.branch();
    let weight = weight.clone().for_branch(branch);
    let admissibility = check_admissible(&weight, model)?;
    if !admissibility.admissible {
        return Err(Error::Inadmissible(format!("{}: {}", weight.label(), admissibility.summary())));
    }
    if state.branch != branch || state.model != *model {
        return Err(Error::Contract("threshold state and ladder describe different problems".into()));
    }
    let curve = &result.curve;
    let grid = *potential.grid();
    let sqrt = potential.sqrt_values();
    let rungs: Vec<(f64, f64, f64)> = curve
        .energies
        .par_iter()
        .zip(curve.mus.par_iter())
        .zip(curve.lambdas.par_iter())
        .map(|((&e, mu), &lambda)| {
            let point = SpectralPoint::Energy(EnergyWindow::new(model, branch, e)?);
            let mu = align_eigenvector(mu, &result.mu_0)?;
            let f = mu.map(|i, v| v * sqrt[i % sqrt.len()]);
            let phi = momentum_phi(model, &point, &fourier(&f, Direction::Forward)?, lambda)?;
            let d = weighted_distance(&weight, model, &phi, &state.phi_momentum)?;
            let (s, l) = proof_factors(&weight, model, &grid, &point)?;
            Ok((d, s, l))
        })
        .collect::<Result<_>>()?;
    let distances: Vec<f64> = rungs.iter().map(|r| r.0).collect();
    let smallp_factors: Vec<f64> = rungs.iter().map(|r| r.1).collect();
    let largep_factors: Vec<f64> = rungs.iter().map(|r| r.2).collect();
    let (smallp_bound, largep_bound) = proof_factors(&weight, model, &grid, &SpectralPoint::Threshold(branch))?;
    let tail = opts.tail.min(distances.len());
    let decreasing = tail >= 2 && distances[distances.len() - tail..].windows(2).all(|w| w[1] < w[0]);
    let below_floor = distances.last().is_some_and(|&d| d < opts.floor);
    let slack = 1.0 + 1e-12;
    let factors_bounded = smallp_factors.iter().all(|&s| s <= smallp_bound * slack)
        && largep_factors.iter().all(|&l| l <= largep_bound * slack);
    Ok(ConvergenceReport {
        weight: weight.label(),
        model: *model,
        branch,
        admissibility,
        energies: curve.energies.clone(),
        distances,
        smallp_factors,
        largep_factors,
        smallp_bound,
        largep_bound,
        decreasing,
        below_floor,
        factors_bounded,
    })
}

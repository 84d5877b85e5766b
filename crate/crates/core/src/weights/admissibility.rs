use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{Weight, WeightKind};
use crate::error::{Error, Result};
use crate::kinetic::{fw_matrix, fw_inverse, operator_norm, Branch, KineticKind, KineticModel, Matrix4, Symbol};

/// How a sub-verdict was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Exact radial-exponent criterion for power weights.
    Analytic,
    /// Refinement-ladder or growth-rate heuristic for custom weights.
    Numeric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionVerdict {
    pub finite: bool,
    pub method: Method,
    /// Small-p: `‖wχ_</d(p)‖₂²` cut off at the finest ladder radius.
    /// Large-p: the largest sampled `|w|/d(p)`.
    pub value: f64,
    /// Small-p: ratio of successive shell contributions on the
    /// refinement ladder. Large-p: fitted growth exponent of `|w|/d(p)`.
    pub rate: f64,
}

/// Verdict on `wχ_</p² ∈ L₂` and `wχ_>/p^k ∈ L_∞` (`k = 2` Schrödinger,
/// `k = 1` otherwise).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Admissibility {
    pub model: KineticKind,
    pub branch: Branch,
    pub small_p: ConditionVerdict,
    pub large_p: ConditionVerdict,
    pub admissible: bool,
    /// Dirac only: the small-p condition with `|w|` the full matrix norm,
    /// which no weight of the form `|T_D|^s` meets because the opposite
    /// branch keeps `|w(0)| > 0`. Reported, not used.
    pub literal_small_p: Option<bool>,
    /// Power weights only: whether the verdict agrees with the exponent
    /// range `s ∈ (1/2, 2]` quoted alongside the weight examples.
    pub agrees_with_quoted_range: Option<bool>,
}

impl Admissibility {
    pub fn summary(&self) -> String {
        format!(
            "small-p {} ({:?}), large-p {} ({:?})",
            if self.small_p.finite { "finite" } else { "divergent" },
            self.small_p.method,
            if self.large_p.finite { "bounded" } else { "unbounded" },
            self.large_p.method,
        )
    }
}

/// Radii of the small-p refinement ladder, `2^{-k}`.
const LADDER: std::ops::RangeInclusive<i32> = 2..=24;
/// Decay factor per halving below which the shell contributions count
/// as summable.
const SUMMABLE_RATIO: f64 = 0.9;
/// Largest growth exponent of `|w|/d(p)` accepted as bounded.
const GROWTH_TOLERANCE: f64 = 0.05;
const LARGE_P_MAX: f64 = 1e6;

/// Fixed direction set: the 26 lattice neighbours of the origin.
fn directions() -> Vec<[f64; 3]> {
    let mut out = Vec::with_capacity(26);
    for a in -1i32..=1 {
        for b in -1i32..=1 {
            for c in -1i32..=1 {
                if (a, b, c) != (0, 0, 0) {
                    let n = ((a * a + b * b + c * c) as f64).sqrt();
                    out.push([a as f64 / n, b as f64 / n, c as f64 / n]);
                }
            }
        }
    }
    out
}

/// Norm of the weight part that meets the critical resolvent block: all
/// of `w` for scalar models; for Dirac the `β_±` column block of the
/// Foldy–Wouthuysen-rotated weight, `β₊` on the upper branch and `β₋` on
/// the lower one.
fn critical_norm(weight: &Weight, model: &KineticModel, p: [f64; 3]) -> f64 {
    match weight.evaluate(model, p) {
        Symbol::Scalar(w) => w.abs(),
        Symbol::Matrix(w) => critical_block_norm(&w, model.mass, weight.branch, p),
    }
}

/// Spectral norm of the `β_±` column block of `U m U⁻¹`.
pub(super) fn critical_block_norm(m: &Matrix4, mass: f64, branch: Branch, p: [f64; 3]) -> f64 {
    let rotated = fw_matrix(p, mass) * m * fw_inverse(p, mass);
    let cols = match branch {
        Branch::Upper => 0..2,
        Branch::Lower => 2..4,
    };
    let mut block = Matrix4::zeros();
    for c in cols {
        block.set_column(c, &rotated.column(c));
    }
    operator_norm(&block)
}

fn full_norm(weight: &Weight, model: &KineticModel, p: [f64; 3]) -> f64 {
    weight.evaluate(model, p).norm()
}

/// `∫_{r<|p|<1} g(p)² / p⁴ d³p` by Gauss–Legendre in `log p` on each
/// dyadic shell, averaged over the direction set. Returns the shell
/// contributions from the outermost inwards.
fn small_p_shells(g: &dyn Fn([f64; 3]) -> f64) -> Vec<f64> {
    const NODES: [(f64, f64); 4] = [
        (-0.861_136_311_594_052_6, 0.347_854_845_137_453_9),
        (-0.339_981_043_584_856_3, 0.652_145_154_862_546_1),
        (0.339_981_043_584_856_3, 0.652_145_154_862_546_1),
        (0.861_136_311_594_052_6, 0.347_854_845_137_453_9),
    ];
    let dirs = directions();
    LADDER
        .map(|k| {
            let (hi, lo) = (-(k as f64 - 1.0) * 2f64.ln(), -(k as f64) * 2f64.ln());
            let half = 0.5 * (hi - lo);
            let mid = 0.5 * (hi + lo);
            NODES
                .iter()
                .map(|&(x, w)| {
                    let t = mid + half * x;
                    let r = t.exp();
                    let avg = dirs.iter().map(|d| g([r * d[0], r * d[1], r * d[2]]).powi(2)).sum::<f64>() / dirs.len() as f64;
                    // d³p = 4π r² dr = 4π r³ dt
                    w * half * 4.0 * PI * avg / r.powi(4) * r.powi(3)
                })
                .sum()
        })
        .collect()
}

fn numeric_small_p(g: &dyn Fn([f64; 3]) -> f64) -> ConditionVerdict {
    let shells = small_p_shells(g);
    let total: f64 = shells.iter().sum();
    let tail = &shells[shells.len() - 6..];
    let ratios: Vec<f64> = tail.windows(2).filter(|w| w[0] > 0.0).map(|w| w[1] / w[0]).collect();
    let rate = if ratios.is_empty() { 0.0 } else { ratios.iter().sum::<f64>() / ratios.len() as f64 };
    let finite = total.is_finite() && (tail.iter().all(|&s| s == 0.0) || rate < SUMMABLE_RATIO);
    ConditionVerdict { finite, method: Method::Numeric, value: total, rate }
}

fn large_p_profile(weight: &Weight, model: &KineticModel, power: i32) -> (f64, f64) {
    let dirs = directions();
    let samples: Vec<(f64, f64)> = (0..=60)
        .map(|i| {
            let r = LARGE_P_MAX.powf(i as f64 / 60.0);
            let worst = dirs
                .iter()
                .map(|d| full_norm(weight, model, [r * d[0], r * d[1], r * d[2]]))
                .fold(0.0, f64::max);
            (r, worst / r.powi(power))
        })
        .collect();
    let sup = samples.iter().map(|s| s.1).fold(0.0, f64::max);
    let last: Vec<(f64, f64)> = samples[samples.len() - 11..]
        .iter()
        .filter(|s| s.1 > 0.0)
        .map(|s| (s.0.ln(), s.1.ln()))
        .collect();
    let growth = if last.len() < 2 {
        0.0
    } else {
        let k = last.len() as f64;
        let mx = last.iter().map(|p| p.0).sum::<f64>() / k;
        let my = last.iter().map(|p| p.1).sum::<f64>() / k;
        last.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / last.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>()
    };
    (sup, growth)
}

/// Decides whether `weight` meets the small- and large-momentum
/// conditions for `model`. Power weights `|T|^s` are decided exactly:
/// small-p needs `s > 1/4` and large-p needs `s ≤ 1` for every model.
/// Custom weights use the refinement-ladder and growth-rate heuristics.
pub fn check_admissible(weight: &Weight, model: &KineticModel) -> Result<Admissibility> {
    if weight.branch == Branch::Lower && !model.is_dirac() {
        return Err(Error::Domain("the lower branch exists only for the Dirac model".into()));
    }
    let power = if model.kind == KineticKind::Schrodinger { 2 } else { 1 };
    let critical = |p: [f64; 3]| critical_norm(weight, model, p);
    let mut small = numeric_small_p(&critical);
    let (sup, growth) = large_p_profile(weight, model, power);
    if !sup.is_finite() {
        return Err(Error::Domain(format!("weight {} is not finite at large momenta", weight.label())));
    }
    let mut large = ConditionVerdict { finite: growth < GROWTH_TOLERANCE, method: Method::Numeric, value: sup, rate: growth };
    let mut agrees = None;
    if let WeightKind::Power { s } = weight.kind {
        small.finite = s > 0.25;
        small.method = Method::Analytic;
        large.finite = s <= 1.0;
        large.method = Method::Analytic;
        let quoted = s > 0.5 && s <= 2.0;
        agrees = Some(quoted == (small.finite && large.finite));
    }
    let literal_small_p = model.is_dirac().then(|| {
        let full = |p: [f64; 3]| full_norm(weight, model, p);
        numeric_small_p(&full).finite
    });
    Ok(Admissibility {
        model: model.kind,
        branch: weight.branch,
        admissible: small.finite && large.finite,
        small_p: small,
        large_p: large,
        literal_small_p,
        agrees_with_quoted_range: agrees,
    })
}

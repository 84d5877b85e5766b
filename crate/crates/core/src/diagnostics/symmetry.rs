use std::sync::Arc;

use serde_json::json;

use super::{CheckReport, Provenance, Relation, Suite, SuiteConfig};
use crate::birman_schwinger::{geometric_ladder, lambda_curve, mirrored_lambda_curve, CurveOptions, PotentialSpec};
use crate::error::Result;
use crate::fields::Grid3;
use crate::kinetic::{Branch, KineticModel};

/// Energies per window at which the resolvent block bounds are checked.
const BOUND_ENERGIES: usize = 11;

pub(super) fn dirac_symmetry_suite(config: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let c = &config.dirac_symmetry;
    let m = config.mass;
    let model = KineticModel::dirac(m)?;
    let grid = Grid3::new(c.n, c.box_length)?;
    let v = Arc::new(PotentialSpec::square_well(1.0).sample(&grid)?);
    let energies = geometric_ladder(&model, Branch::Lower, m, 0.5, c.rungs);
    let opts = CurveOptions::default();
    let direct = lambda_curve(&model, &v, &energies, Branch::Lower, &opts)?;
    let mirrored = mirrored_lambda_curve(&model, &v, &energies, &opts)?;
    let deviation = direct
        .lambdas
        .iter()
        .zip(&mirrored.lambdas)
        .map(|(a, b)| ((a - b) / a).abs())
        .fold(0.0, f64::max);
    let mirror = CheckReport::new(
        Suite::DiracSymmetry,
        "branch_mirror",
        json!({ "mass": m, "n": c.n, "box_length": c.box_length, "potential": "square_well(1)", "rungs": c.rungs, "offset0": m, "ratio": 0.5 }),
        deviation,
        Relation::Below,
        c.tolerance,
        Provenance::SelfConvergence,
    )
    .with("lambda_last_direct", *direct.lambdas.last().unwrap_or(&f64::NAN))
    .with("lambda_last_mirrored", *mirrored.lambdas.last().unwrap_or(&f64::NAN));

    // |h⁻| ≤ 1/s on E ∈ [-m, 0]; |h⁻| ≤ 1/(s - m) and |h⁺| ≤ 1/s on
    // E ∈ [-2m, -m]; s = √(p² + m²), h^± = (±s - m - E)⁻¹.
    let (mut upper_minus, mut lower_minus, mut lower_plus): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for k in 0..BOUND_ENERGIES {
        let t = k as f64 / (BOUND_ENERGIES - 1) as f64;
        let e_upper = -m * t;
        let e_lower = -m - m * t;
        for idx in 1..grid.len() {
            let p = grid.momentum(idx);
            let s = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + m * m).sqrt();
            let h = |sign: f64, e: f64| 1.0 / (sign * s - m - e).abs();
            upper_minus = upper_minus.max(h(-1.0, e_upper) * s);
            lower_minus = lower_minus.max(h(-1.0, e_lower) * (s - m));
            lower_plus = lower_plus.max(h(1.0, e_lower) * s);
        }
    }
    let worst = upper_minus.max(lower_minus).max(lower_plus);
    let bounds = CheckReport::new(
        Suite::DiracSymmetry,
        "resolvent_block_bounds",
        json!({ "mass": m, "n": c.n, "box_length": c.box_length, "energies_per_window": BOUND_ENERGIES }),
        worst,
        Relation::AtMost,
        1.0 + 1e-12,
        Provenance::Analytic,
    )
    .with("upper_window_h_minus", upper_minus)
    .with("lower_window_h_minus", lower_minus)
    .with("lower_window_h_plus", lower_plus);
    Ok(vec![mirror, bounds])
}

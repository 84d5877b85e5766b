use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;
use serde_json::json;

use super::{CheckReport, Provenance, Relation, Suite, SuiteConfig};
use crate::birman_schwinger::{extrapolate_threshold, geometric_ladder, lambda_curve, CurveOptions, PotentialSpec};
use crate::error::{Error, Result};
use crate::fields::Grid3;
use crate::kinetic::{Branch, KineticModel};

/// Richardson extrapolation of values on grids with `n` nodes per axis,
/// assuming an error `O(n^{-order})`.
pub fn richardson((n_coarse, coarse): (usize, f64), (n_fine, fine): (usize, f64), order: f64) -> f64 {
    let ratio = (n_fine as f64 / n_coarse as f64).powf(order);
    fine + (fine - coarse) / (ratio - 1.0)
}

pub(super) fn selfconv_suite(config: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let c = &config.selfconv;
    if c.sizes.len() < 2 || c.sizes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("selfconv needs at least two strictly increasing grid sizes".into()));
    }
    let model = KineticModel::schrodinger();
    let lambdas: Vec<f64> = c
        .sizes
        .par_iter()
        .map(|&n| {
            let grid = Grid3::new(n, c.box_length)?;
            let v = Arc::new(PotentialSpec::square_well(1.0).sample(&grid)?);
            let energies = geometric_ladder(&model, Branch::Upper, 1.0, 0.5, c.rungs);
            let curve = lambda_curve(&model, &v, &energies, Branch::Upper, &CurveOptions::default())?;
            Ok(extrapolate_threshold(curve, &v)?.lambda_c)
        })
        .collect::<Result<_>>()?;
    let exact = PI * PI / 4.0;
    let k = lambdas.len();
    let (fine, coarse) = ((c.sizes[k - 1], lambdas[k - 1]), (c.sizes[k - 2], lambdas[k - 2]));
    let extrapolated = richardson(coarse, fine, 2.0);
    let inputs = json!({
        "sizes": c.sizes, "box_length": c.box_length, "rungs": c.rungs, "offset0": 1.0, "ratio": 0.5,
        "potential": "square_well(1)",
    });
    let mut pair = CheckReport::new(
        Suite::Selfconv,
        "finest_pair_discrepancy",
        inputs.clone(),
        ((fine.1 - coarse.1) / fine.1).abs(),
        Relation::Below,
        c.tolerance,
        Provenance::SelfConvergence,
    );
    for (&n, &l) in c.sizes.iter().zip(&lambdas) {
        pair = pair.with(&format!("lambda_c_n{n}"), l).with(&format!("deviation_n{n}"), (l - exact) / exact);
    }
    let richardson_check = CheckReport::new(
        Suite::Selfconv,
        "richardson_vs_square_well",
        inputs,
        ((extrapolated - exact) / exact).abs(),
        Relation::Below,
        c.tolerance,
        Provenance::Analytic,
    )
    .with("richardson", extrapolated)
    .with("exact", exact);
    Ok(vec![pair, richardson_check])
}

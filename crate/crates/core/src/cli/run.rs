use std::sync::Arc;

use serde_json::json;

use super::{format_number, CliError, RunConfig, RunOutput, Table};
use crate::birman_schwinger::{
    extrapolate_threshold, lambda_curve, mirrored_lambda_curve, CurveOptions, SampledPotential, ThresholdResult,
};
use crate::diagnostics::{run_suites, Suite};
use crate::error::Error;
use crate::fields::Grid3;
use crate::kinetic::{Branch, KineticModel};
use crate::threshold_state::{build_threshold_state, default_test_pack, weak_residual, StateOptions};
use crate::weights::{certify_convergence, check_admissible, CertifyOptions};

fn header(command: &str, config: &RunConfig) -> serde_json::Map<String, serde_json::Value> {
    let mut map = serde_json::Map::new();
    map.insert("tool".into(), json!(env!("CARGO_PKG_NAME")));
    map.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    map.insert("command".into(), json!(command));
    map.insert("config".into(), serde_json::to_value(config).unwrap_or(serde_json::Value::Null));
    map
}

struct ThresholdStage {
    model: KineticModel,
    potential: Arc<SampledPotential>,
    result: ThresholdResult,
    mirrored: bool,
}

fn threshold_stage(config: &RunConfig) -> Result<ThresholdStage, CliError> {
    let model = config.kinetic_model()?;
    let grid = Grid3::new(config.grid.n, config.grid.box_length)?;
    let potential = Arc::new(config.potential.sample(&grid)?);
    let energies = config.energies()?;
    let opts = CurveOptions { boundary: config.boundary, solver: config.solver.options() };
    let mirrored = config.branch == Branch::Lower;
    let curve = if mirrored {
        mirrored_lambda_curve(&model, &potential, &energies, &opts)?
    } else {
        lambda_curve(&model, &potential, &energies, config.branch, &opts)?
    };
    let result = extrapolate_threshold(curve, &potential)?;
    Ok(ThresholdStage { model, potential, result, mirrored })
}

fn threshold_table(result: &ThresholdResult) -> Table {
    let curve = &result.curve;
    let mut table = Table::new("threshold", &["E", "lambda", "alpha", "mu_cauchy_residual"]);
    for k in 0..curve.energies.len() {
        let cauchy = if k == 0 { f64::NAN } else { curve.cauchy_residuals[k - 1] };
        table.push_numbers(&[curve.energies[k], curve.lambdas[k], curve.alphas[k], cauchy]);
    }
    table
}

fn threshold_summary(stage: &ThresholdStage) -> serde_json::Value {
    let r = &stage.result;
    json!({
        "model": stage.model,
        "branch": r.branch(),
        "boundary": r.curve.boundary,
        "mirrored": stage.mirrored,
        "rungs": r.curve.energies.len(),
        "lambda_c": r.lambda_c,
        "fit": r.fit,
        "candidate_fits": r.candidate_fits,
        "threshold_rayleigh": r.threshold_rayleigh,
        "threshold_residual": r.threshold_residual,
        "solver_applications": r.curve.applications.iter().sum::<usize>(),
    })
}

/// Runs the energy ladder and the threshold extrapolation.
pub fn cmd_threshold(config: &RunConfig) -> Result<RunOutput, CliError> {
    let stage = threshold_stage(config)?;
    let mut summary = header("threshold", config);
    summary.insert("threshold".into(), threshold_summary(&stage));
    Ok(RunOutput {
        command: "threshold".into(),
        tables: vec![threshold_table(&stage.result)],
        summary: summary.into(),
        failures: Vec::new(),
    })
}

pub(super) fn slug(label: &str) -> String {
    let mut out = String::new();
    for c in label.chars() {
        if c.is_ascii_alphanumeric() {
            out.push(c);
        } else if c == '.' {
            out.push('p');
        } else if !out.ends_with('_') {
            out.push('_');
        }
    }
    out.trim_matches('_').to_string()
}

/// Threshold stage, threshold state, resonance classification, weak
/// residual and one convergence certificate per configured weight.
/// Inadmissible weights are recorded and skipped.
pub fn cmd_converge(config: &RunConfig) -> Result<RunOutput, CliError> {
    let stage = threshold_stage(config)?;
    let (model, potential, result) = (&stage.model, &stage.potential, &stage.result);
    let options = StateOptions { tol_c: config.state.tol_c, subsample: config.state.subsample, seed: config.seed };
    let state = build_threshold_state(model, result.branch(), potential, &result.mu_0, result.lambda_c, &options)?;
    let tests = default_test_pack(potential.grid(), model.components());
    let residual = weak_residual(&state, potential, &tests)?;
    let resonance = &state.resonance;

    let mut tables = vec![threshold_table(result)];
    let mut failures = Vec::new();
    let mut weights = Vec::new();
    let certify = CertifyOptions { floor: config.certify.floor, tail: config.certify.tail };
    for (i, spec) in config.weights.iter().enumerate() {
        let weight = spec.build(result.branch())?;
        let label = weight.label();
        let admissibility = check_admissible(&weight, model)?;
        if !admissibility.admissible {
            weights.push(json!({
                "index": i, "weight": label, "admissible": false,
                "verdict": admissibility.summary(), "admissibility": admissibility,
            }));
            continue;
        }
        let report = match certify_convergence(model, potential, &weight, result, &state, &certify) {
            Ok(r) => r,
            Err(Error::Inadmissible(m)) => {
                weights.push(json!({ "index": i, "weight": label, "admissible": false, "verdict": m }));
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let name = format!("convergence_{i}_{}", slug(&label));
        let mut table = Table::new(&name, &["E", "weighted_distance", "smallp_factor", "largep_factor"]);
        for k in 0..report.energies.len() {
            table.push_numbers(&[
                report.energies[k],
                report.distances[k],
                report.smallp_factors[k],
                report.largep_factors[k],
            ]);
        }
        tables.push(table);
        if !report.passed() {
            failures.push(format!(
                "certificate for {label}: decreasing={} d_last={} floor={}",
                report.decreasing,
                format_number(*report.distances.last().unwrap_or(&f64::NAN)),
                certify.floor
            ));
        }
        weights.push(json!({
            "index": i, "weight": label, "admissible": true, "table": name,
            "passed": report.passed(), "decreasing": report.decreasing, "below_floor": report.below_floor,
            "factors_bounded": report.factors_bounded, "d_last": report.distances.last(),
            "smallp_bound": report.smallp_bound, "largep_bound": report.largep_bound,
            "admissibility": report.admissibility,
        }));
    }

    let mut summary = header("converge", config);
    summary.insert("threshold".into(), threshold_summary(&stage));
    summary.insert(
        "state".into(),
        json!({
            "lambda_c": state.lambda_c,
            "classification": state.classification(),
            "criterion": resonance.criterion,
            "criterion_magnitude": resonance.magnitude,
            "criterion_tolerance": resonance.tolerance,
            "criterion_margin": resonance.margin(),
            "weak_residual": residual,
            "kernel_cross_check": {
                "nodes": state.cross_check.nodes.len(),
                "discrepancy": state.cross_check.discrepancy,
            },
        }),
    );
    summary.insert("weights".into(), serde_json::Value::Array(weights));
    summary.insert("failures".into(), json!(failures));
    Ok(RunOutput { command: "converge".into(), tables, summary: summary.into(), failures })
}

/// Runs the named diagnostic suites; randomness follows `config.seed`.
pub fn cmd_check(config: &RunConfig, suites: &[Suite]) -> Result<RunOutput, CliError> {
    if suites.is_empty() {
        return Err(CliError::Usage("no suite selected".into()));
    }
    let mut settings = config.checks.settings.clone();
    settings.seed = config.seed;
    let reports = run_suites(suites, &settings)?;
    let mut table =
        Table::new("checks", &["suite", "check", "measured", "relation", "target", "passed", "provenance", "digest"]);
    let mut failures = Vec::new();
    for r in &reports {
        table.push(vec![
            r.suite.to_string(),
            r.check.clone(),
            format_number(r.measured),
            tag(&r.relation),
            format_number(r.target),
            r.passed.to_string(),
            tag(&r.provenance),
            r.digest.clone(),
        ]);
        if !r.passed {
            failures.push(format!("{}/{}: {} vs {}", r.suite, r.check, format_number(r.measured), format_number(r.target)));
        }
    }
    let mut summary = header("check", config);
    summary.insert("suites".into(), json!(suites));
    summary.insert("settings".into(), json!(settings));
    summary.insert("reports".into(), json!(reports));
    summary.insert("failures".into(), json!(failures));
    Ok(RunOutput { command: "check".into(), tables: vec![table], summary: summary.into(), failures })
}

/// Serialized name of a unit enum variant.
fn tag<T: serde::Serialize>(value: &T) -> String {
    match serde_json::to_value(value) {
        Ok(serde_json::Value::String(s)) => s,
        other => format!("{other:?}"),
    }
}

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::birman_schwinger::{validate_ladder, PotentialSpec, Solver, SolverOptions, FIT_POINTS};
use crate::diagnostics::{Suite, SuiteConfig};
use crate::fields::Grid3;
use crate::kinetic::{Boundary, Branch, EnergyWindow, KineticKind, KineticModel};
use crate::threshold_state::StateOptions;
use crate::weights::{CertifyOptions, WeightSpec};

fn one() -> f64 {
    1.0
}

fn default_seed() -> u64 {
    7
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub kind: KineticKind,
    #[serde(default = "one")]
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub n: usize,
    pub box_length: f64,
}

/// `E_k = E_thr + (E0 - E_thr) ratio^k`, `k = 0..count`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LadderConfig {
    #[serde(rename = "E0")]
    pub e0: f64,
    pub ratio: f64,
    pub count: usize,
}

impl LadderConfig {
    pub fn energies(&self, model: &KineticModel, branch: Branch) -> Vec<f64> {
        let thr = model.threshold(branch);
        (0..self.count).map(|k| thr + (self.e0 - thr) * self.ratio.powi(k as i32)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub method: Solver,
    pub tol: f64,
    pub max_iter: usize,
    pub basis: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        let d = SolverOptions::default();
        Self { method: d.solver, tol: d.tol, max_iter: d.max_iter, basis: d.basis }
    }
}

impl SolverConfig {
    pub fn options(&self) -> SolverOptions {
        SolverOptions { solver: self.method, tol: self.tol, max_iter: self.max_iter, basis: self.basis }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StateConfig {
    pub tol_c: f64,
    pub subsample: usize,
}

impl Default for StateConfig {
    fn default() -> Self {
        let d = StateOptions::default();
        Self { tol_c: d.tol_c, subsample: d.subsample }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CertifyConfig {
    pub floor: f64,
    pub tail: usize,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        let d = CertifyOptions::default();
        Self { floor: d.floor, tail: d.tail }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub directory: Option<String>,
    pub formats: Vec<Format>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { directory: None, formats: vec![Format::Csv, Format::Json] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChecksConfig {
    pub suites: Vec<Suite>,
    pub settings: SuiteConfig,
}

impl Default for ChecksConfig {
    fn default() -> Self {
        Self { suites: Suite::ALL.to_vec(), settings: SuiteConfig::default() }
    }
}

/// Complete description of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelConfig,
    pub grid: GridConfig,
    pub potential: PotentialSpec,
    #[serde(default)]
    pub branch: Branch,
    pub energy_ladder: LadderConfig,
    #[serde(default)]
    pub weights: Vec<WeightSpec>,
    #[serde(default)]
    pub boundary: Boundary,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub state: StateConfig,
    #[serde(default)]
    pub certify: CertifyConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub checks: ChecksConfig,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

fn invalid(path: &str, message: impl Into<String>) -> CliError {
    CliError::Config { path: path.to_string(), message: message.into() }
}

fn positive(path: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(path, format!("must be positive and finite, got {v}")))
    }
}

impl RunConfig {
    /// Parses JSON, reporting the path of the first offending field.
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let config: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            invalid(if path.is_empty() { "." } else { &path }, e.inner().to_string())
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn kinetic_model(&self) -> Result<KineticModel, CliError> {
        KineticModel::new(self.model.kind, self.model.mass).map_err(|e| invalid("model.mass", e.to_string()))
    }

    pub fn energies(&self) -> Result<Vec<f64>, CliError> {
        Ok(self.energy_ladder.energies(&self.kinetic_model()?, self.branch))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        positive("model.mass", self.model.mass)?;
        let model = self.kinetic_model()?;
        Grid3::new(self.grid.n, self.grid.box_length).map_err(|e| invalid("grid", e.to_string()))?;
        self.potential.validate().map_err(|e| invalid("potential", e.to_string()))?;
        if self.branch == Branch::Lower && !model.is_dirac() {
            return Err(invalid("branch", "the lower branch exists only for the Dirac model"));
        }
        let ladder = &self.energy_ladder;
        if !(ladder.ratio > 0.0 && ladder.ratio < 1.0) {
            return Err(invalid("energy_ladder.ratio", format!("must lie in (0, 1), got {}", ladder.ratio)));
        }
        if ladder.count < FIT_POINTS {
            return Err(invalid("energy_ladder.count", format!("needs at least {FIT_POINTS} rungs, got {}", ladder.count)));
        }
        EnergyWindow::new(&model, self.branch, ladder.e0).map_err(|e| invalid("energy_ladder.E0", e.to_string()))?;
        let energies = self.energies()?;
        validate_ladder(&model, self.branch, &energies).map_err(|e| invalid("energy_ladder", e.to_string()))?;
        for (i, w) in self.weights.iter().enumerate() {
            w.build(self.branch).map_err(|e| invalid(&format!("weights[{i}]"), e.to_string()))?;
        }
        positive("solver.tol", self.solver.tol)?;
        if self.solver.max_iter == 0 {
            return Err(invalid("solver.max_iter", "must be positive"));
        }
        if self.solver.basis < 2 {
            return Err(invalid("solver.basis", "needs at least two vectors"));
        }
        positive("state.tol_c", self.state.tol_c)?;
        positive("certify.floor", self.certify.floor)?;
        if self.certify.tail < 2 || self.certify.tail > ladder.count {
            return Err(invalid("certify.tail", format!("must lie in [2, {}], got {}", ladder.count, self.certify.tail)));
        }
        if self.output.formats.is_empty() {
            return Err(invalid("output.formats", "needs at least one format"));
        }
        positive("checks.settings.mass", self.checks.settings.mass)?;
        Ok(())
    }
}

/// Configuration used by `check` when no file is given.
pub fn default_check_config() -> RunConfig {
    RunConfig {
        model: ModelConfig { kind: KineticKind::Schrodinger, mass: 1.0 },
        grid: GridConfig { n: 64, box_length: 16.0 },
        potential: PotentialSpec::square_well(1.0),
        branch: Branch::Upper,
        energy_ladder: LadderConfig { e0: -1.0, ratio: 0.5, count: 11 },
        weights: vec![],
        boundary: Boundary::default(),
        solver: SolverConfig::default(),
        state: StateConfig::default(),
        certify: CertifyConfig::default(),
        output: OutputConfig::default(),
        checks: ChecksConfig::default(),
        seed: default_seed(),
    }
}

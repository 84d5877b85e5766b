//! Numeric verification suites: Bessel bounds, Foldy–Wouthuysen
//! unitarity and the Fourier round trip, kernel/multiplier duality, Dirac
//! branch symmetry, lattice self-convergence of `λ_c` and the matrix
//! Hölder inequality.

mod duality;
mod selfconv;
mod special;
mod symmetry;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::fields::Grid3;
use crate::threshold_state::holder_check;

pub use duality::{mollified_dirac_kernel, mollified_scalar_kernel, smoothed_yukawa};
pub use selfconv::richardson;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Bessel,
    Fw,
    Duality,
    DiracSymmetry,
    Selfconv,
    Holder,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Bessel, Suite::Fw, Suite::Duality, Suite::DiracSymmetry, Suite::Selfconv, Suite::Holder];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Bessel => "bessel",
            Suite::Fw => "fw",
            Suite::Duality => "duality",
            Suite::DiracSymmetry => "dirac_symmetry",
            Suite::Selfconv => "selfconv",
            Suite::Holder => "holder",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| {
                let known: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
                Error::Usage(format!("unknown suite '{s}' (known: {})", known.join(", ")))
            })
    }
}

/// Where a tolerance comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Exact inequality or closed form, rounding aside.
    Analytic,
    /// Lattice discretization error measured by grid refinement.
    SelfConvergence,
}

/// How `measured` is compared with `target`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Below,
    AtMost,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub suite: Suite,
    pub check: String,
    /// Parameters that determine the check, echoed verbatim.
    pub inputs: serde_json::Value,
    /// SHA-256 prefix of the canonical JSON of `inputs`.
    pub digest: String,
    pub measured: f64,
    pub relation: Relation,
    pub target: f64,
    pub passed: bool,
    pub provenance: Provenance,
    /// Auxiliary measured quantities.
    pub values: BTreeMap<String, f64>,
}

impl CheckReport {
    pub fn new(
        suite: Suite,
        check: impl Into<String>,
        inputs: serde_json::Value,
        measured: f64,
        relation: Relation,
        target: f64,
        provenance: Provenance,
    ) -> Self {
        let passed = match relation {
            Relation::Below => measured < target,
            Relation::AtMost => measured <= target,
        };
        let canonical = serde_json::to_string(&inputs).unwrap_or_default();
        let hash = Sha256::digest(canonical.as_bytes());
        let digest = hash.iter().take(8).map(|b| format!("{b:02x}")).collect();
        Self {
            suite,
            check: check.into(),
            inputs,
            digest,
            measured,
            relation,
            target,
            passed,
            provenance,
            values: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.values.insert(key.to_string(), value);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DualityConfig {
    pub n: usize,
    pub box_length: f64,
    /// Width of the Gaussian mollifier, in lattice spacings.
    pub width_cells: f64,
    pub energies: Vec<f64>,
    pub r_min: f64,
    pub tolerance: f64,
}

impl Default for DualityConfig {
    fn default() -> Self {
        Self { n: 64, box_length: 16.0, width_cells: 2.0, energies: vec![-1.0, -0.5], r_min: 0.3, tolerance: 2e-2 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SymmetryConfig {
    pub n: usize,
    pub box_length: f64,
    pub rungs: usize,
    pub tolerance: f64,
}

impl Default for SymmetryConfig {
    fn default() -> Self {
        Self { n: 32, box_length: 8.0, rungs: 8, tolerance: 1e-3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SelfconvConfig {
    pub sizes: Vec<usize>,
    pub box_length: f64,
    pub rungs: usize,
    /// Largest accepted relative discrepancy between the two finest grids.
    pub tolerance: f64,
}

impl Default for SelfconvConfig {
    fn default() -> Self {
        Self { sizes: vec![48, 64, 96], box_length: 16.0, rungs: 11, tolerance: 1e-2 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Mass of the relativistic models.
    pub mass: f64,
    /// Random momenta in the Foldy–Wouthuysen suite.
    pub fw_samples: usize,
    /// Sample points of the Bessel suite.
    pub bessel_samples: usize,
    pub holder_samples: usize,
    pub duality: DualityConfig,
    pub dirac_symmetry: SymmetryConfig,
    pub selfconv: SelfconvConfig,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 7,
            mass: 1.0,
            fw_samples: 1000,
            bessel_samples: 10_000,
            holder_samples: 1000,
            duality: DualityConfig::default(),
            dirac_symmetry: SymmetryConfig::default(),
            selfconv: SelfconvConfig::default(),
        }
    }
}

/// Runs one suite.
pub fn run_suite(suite: Suite, config: &SuiteConfig) -> Result<Vec<CheckReport>> {
    if !(config.mass > 0.0 && config.mass.is_finite()) {
        return Err(Error::Domain(format!("mass must be positive, got {}", config.mass)));
    }
    match suite {
        Suite::Bessel => special::bessel_suite(config),
        Suite::Fw => special::fw_suite(config),
        Suite::Duality => duality::duality_suite(config),
        Suite::DiracSymmetry => symmetry::dirac_symmetry_suite(config),
        Suite::Selfconv => selfconv::selfconv_suite(config),
        Suite::Holder => holder_suite(config),
    }
}

/// Runs several suites concurrently; reports keep the order of `suites`.
pub fn run_suites(suites: &[Suite], config: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let parts: Vec<Vec<CheckReport>> = suites.par_iter().map(|&s| run_suite(s, config)).collect::<Result<_>>()?;
    Ok(parts.into_iter().flatten().collect())
}

fn holder_suite(config: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let grid = Grid3::new(8, 4.0)?;
    let report = holder_check(&grid, config.holder_samples, config.seed)?;
    let inputs = serde_json::json!({ "n": 8, "box_length": 4.0, "samples": config.holder_samples, "seed": config.seed });
    let total: usize = report.violations.iter().sum();
    let mut check = CheckReport::new(
        Suite::Holder,
        "matrix_holder",
        inputs,
        total as f64,
        Relation::Below,
        1.0,
        Provenance::Analytic,
    );
    for (&(q, r, s), worst) in report.triples.iter().zip(&report.worst_ratio) {
        check = check.with(&format!("worst_ratio_q{q}_r{r}_s{s}"), *worst);
    }
    Ok(vec![check])
}

#[cfg(test)]
mod tests;

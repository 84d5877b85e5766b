use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::Grid3;

fn one() -> f64 {
    1.0
}

/// A nonnegative, bounded, integrable potential `V`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum PotentialSpec {
    /// `depth · χ_{|x| < radius}`.
    SquareWell {
        #[serde(default = "one")]
        depth: f64,
        radius: f64,
    },
    /// `depth · e^{-|x|²/(2 width²)}`.
    Gaussian {
        #[serde(default = "one")]
        depth: f64,
        width: f64,
    },
    /// Node values on the grid, in the flat `(i, j, k)` layout.
    Table { values: Vec<f64> },
}

impl PotentialSpec {
    pub fn square_well(radius: f64) -> Self {
        PotentialSpec::SquareWell { depth: 1.0, radius }
    }

    pub fn gaussian(width: f64) -> Self {
        PotentialSpec::Gaussian { depth: 1.0, width }
    }

    /// Radius of a ball containing the support (or the effective support
    /// for the Gaussian).
    pub fn support_radius(&self) -> Option<f64> {
        match self {
            PotentialSpec::SquareWell { radius, .. } => Some(*radius),
            PotentialSpec::Gaussian { width, .. } => Some(8.0 * width),
            PotentialSpec::Table { .. } => None,
        }
    }

    /// `V` with its amplitude multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        match self.clone() {
            PotentialSpec::SquareWell { depth, radius } => PotentialSpec::SquareWell { depth: depth * factor, radius },
            PotentialSpec::Gaussian { depth, width } => PotentialSpec::Gaussian { depth: depth * factor, width },
            PotentialSpec::Table { values } => PotentialSpec::Table { values: values.iter().map(|v| v * factor).collect() },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Domain(format!("potential {name} must be positive, got {v}")))
            }
        };
        match self {
            PotentialSpec::SquareWell { depth, radius } => {
                positive("radius", *radius)?;
                nonnegative(*depth)
            }
            PotentialSpec::Gaussian { depth, width } => {
                positive("width", *width)?;
                nonnegative(*depth)
            }
            PotentialSpec::Table { values } => values.iter().try_for_each(|&v| nonnegative(v)),
        }
    }

    /// Samples `V` on the grid. The square well is cell-averaged: each
    /// node carries the fraction of its cell inside the ball.
    pub fn sample(&self, grid: &Grid3) -> Result<SampledPotential> {
        self.validate()?;
        let values = match self {
            PotentialSpec::SquareWell { depth, radius } => {
                (0..grid.len()).map(|i| depth * ball_fraction(grid, i, *radius)).collect()
            }
            PotentialSpec::Gaussian { depth, width } => (0..grid.len())
                .map(|i| {
                    let x = grid.position(i);
                    depth * (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / (2.0 * width * width)).exp()
                })
                .collect(),
            PotentialSpec::Table { values } => {
                if values.len() != grid.len() {
                    return Err(Error::Contract(format!(
                        "tabulated potential has {} values, grid has {} nodes",
                        values.len(),
                        grid.len()
                    )));
                }
                values.clone()
            }
        };
        SampledPotential::new(*grid, values)
    }
}

fn nonnegative(v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("potential values must be finite and nonnegative, got {v}")))
    }
}

fn ball_fraction(grid: &Grid3, idx: usize, radius: f64) -> f64 {
    const SUB: usize = 16;
    let h = grid.spacing();
    let x = grid.position(idx);
    let dist = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    let half_diag = 0.5 * 3f64.sqrt() * h;
    if dist + half_diag <= radius {
        return 1.0;
    }
    if dist - half_diag >= radius {
        return 0.0;
    }
    let offset = |a: usize| (a as f64 + 0.5) / SUB as f64 - 0.5;
    let r2 = radius * radius;
    let mut inside = 0usize;
    for a in 0..SUB {
        let xa = x[0] + h * offset(a);
        for b in 0..SUB {
            let yb = x[1] + h * offset(b);
            for c in 0..SUB {
                let zc = x[2] + h * offset(c);
                if xa * xa + yb * yb + zc * zc < r2 {
                    inside += 1;
                }
            }
        }
    }
    inside as f64 / (SUB * SUB * SUB) as f64
}

/// A potential sampled on a grid together with its nodewise square root.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledPotential {
    grid: Grid3,
    values: Vec<f64>,
    sqrt: Vec<f64>,
}

impl SampledPotential {
    pub fn new(grid: Grid3, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Contract("potential sample count does not match the grid".into()));
        }
        values.iter().try_for_each(|&v| nonnegative(v))?;
        let sqrt = values.iter().map(|v| v.sqrt()).collect();
        Ok(Self { grid, values, sqrt })
    }

    pub fn grid(&self) -> &Grid3 {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn sqrt_values(&self) -> &[f64] {
        &self.sqrt
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn l1_norm(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell_volume()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// `V(-x)` on the same grid.
    pub fn reflected(&self) -> Self {
        let values = (0..self.grid.len()).map(|i| self.values[self.grid.reflect(i)]).collect();
        Self::new(self.grid, values).expect("reflection preserves validity")
    }

    /// Largest distance from the origin of a node with `V > 0`.
    pub fn support_extent(&self) -> f64 {
        (0..self.grid.len())
            .filter(|&i| self.values[i] > 0.0)
            .map(|i| {
                let x = self.grid.position(i);
                (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()
            })
            .fold(0.0, f64::max)
    }
}

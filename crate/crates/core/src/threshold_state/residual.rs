use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{check_components, position_product, ThresholdState};
use crate::birman_schwinger::SampledPotential;
use crate::error::{Error, Result};
use crate::fields::{fourier, inner, lq_norm, Direction, Field, Grid3, Representation};
use crate::kinetic::{kinetic_symbol, KineticModel, Symbol};

/// Largest admissible ratio of a test function's value on the box faces
/// to its peak.
const EDGE_RATIO: f64 = 1e-10;

/// `e^{-|x - c|²/(2σ²)}` placed in spinor component `component`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianTest {
    pub center: [f64; 3],
    pub width: f64,
    #[serde(default)]
    pub component: usize,
}

impl GaussianTest {
    /// Samples the test function, rejecting it when it has not decayed at
    /// the box faces.
    pub fn sample(&self, grid: &Grid3, components: usize) -> Result<Field> {
        if self.component >= components || !(self.width > 0.0) {
            return Err(Error::InvalidTest(format!("test function {self:?} does not fit a {components}-component field")));
        }
        let n = grid.n();
        let g = |x: [f64; 3]| {
            let d2: f64 = (0..3).map(|a| (x[a] - self.center[a]).powi(2)).sum();
            (-d2 / (2.0 * self.width * self.width)).exp()
        };
        let values: Vec<f64> = (0..grid.len()).map(|i| g(grid.position(i))).collect();
        let peak = values.iter().copied().fold(0.0, f64::max);
        let edge = (0..grid.len())
            .filter(|&i| grid.unflatten(i).iter().any(|&q| q == 0 || q == n - 1))
            .map(|i| values[i])
            .fold(0.0, f64::max);
        if !(peak > 0.0) || edge > EDGE_RATIO * peak {
            return Err(Error::InvalidTest(format!(
                "test function {self:?} has edge/peak ratio {:.3e} > {EDGE_RATIO:e}",
                if peak > 0.0 { edge / peak } else { f64::INFINITY }
            )));
        }
        let n3 = grid.len();
        let mut out = vec![Complex64::default(); components * n3];
        for (i, v) in values.into_iter().enumerate() {
            out[self.component * n3 + i] = Complex64::from(v);
        }
        Field::from_values(*grid, components, Representation::Position, out)
    }
}

/// Gaussians of widths `L/32` and `L/20` centred at the origin and at two
/// off-centre points, one per spinor component for Dirac.
pub fn default_test_pack(grid: &Grid3, components: usize) -> Vec<GaussianTest> {
    let l = grid.box_length();
    let centers = [[0.0, 0.0, 0.0], [l / 16.0, 0.0, 0.0], [0.0, l / 32.0, -l / 32.0]];
    let mut pack = Vec::new();
    for component in 0..components {
        for &width in &[l / 32.0, l / 20.0] {
            for &center in &centers {
                pack.push(GaussianTest { center, width, component });
            }
        }
    }
    pack
}

fn apply_kinetic(model: &KineticModel, phi: &Field) -> Result<Field> {
    let hat = fourier(phi, Direction::Forward)?;
    let grid = *phi.grid();
    let n3 = grid.len();
    let comps = phi.components();
    let mut out = vec![Complex64::default(); comps * n3];
    for idx in 0..n3 {
        match kinetic_symbol(model, grid.momentum(idx)) {
            Symbol::Scalar(t) => out[idx] = hat.values()[idx] * t,
            Symbol::Matrix(m) => {
                for r in 0..4 {
                    out[r * n3 + idx] = (0..4).map(|c| m[(r, c)] * hat.values()[c * n3 + idx]).sum();
                }
            }
        }
    }
    Field::from_values(grid, comps, Representation::Momentum, out)
}

/// `max_ψ |⟨Tφ - λVφ, ψ⟩| / (λ ‖Vφ‖₂ ‖ψ‖₂)` over the test pack, with the
/// kinetic term paired in momentum space.
pub fn weak_residual_of(
    model: &KineticModel,
    potential: &SampledPotential,
    lambda: f64,
    phi: &Field,
    tests: &[GaussianTest],
) -> Result<f64> {
    check_components(model, phi)?;
    if tests.is_empty() {
        return Err(Error::InvalidTest("the test pack is empty".into()));
    }
    let t_phi = apply_kinetic(model, phi)?;
    let v_phi = position_product(potential, phi, false)?;
    let scale = lambda * lq_norm(&v_phi, 2.0)?;
    if scale == 0.0 {
        return Err(Error::Degenerate("Vφ vanishes".into()));
    }
    let mut worst: f64 = 0.0;
    for test in tests {
        let psi = test.sample(phi.grid(), phi.components())?;
        let psi_hat = fourier(&psi, Direction::Forward)?;
        let kinetic = inner(&t_phi, &psi_hat)?;
        let potential_term = inner(&v_phi, &psi)? * lambda;
        let r = (kinetic - potential_term).norm() / (scale * lq_norm(&psi, 2.0)?);
        worst = worst.max(r);
    }
    Ok(worst)
}

/// Weak residual of `Hφ₀ = 0` for a built threshold state.
pub fn weak_residual(state: &ThresholdState, potential: &SampledPotential, tests: &[GaussianTest]) -> Result<f64> {
    weak_residual_of(&state.model, potential, state.lambda_c, &state.phi_position, tests)
}

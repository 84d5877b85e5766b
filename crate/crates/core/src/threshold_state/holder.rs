use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fields::{lq_norm, Field, Grid3, Representation};
use crate::kinetic::{operator_norm, Matrix4};

/// `(q, r, s)` with `1/q = 1/r + 1/s`.
pub const HOLDER_TRIPLES: [(f64, f64, f64); 3] = [(1.0, 2.0, 2.0), (2.0, f64::INFINITY, 2.0), (1.0, f64::INFINITY, 1.0)];

/// Outcome of the matrix Hölder inequality `‖Ag‖_q ≤ ‖|A|‖_r ‖g‖_s`
/// on random matrix fields `A` and spinors `g`, `|A|` the pointwise
/// operator norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HolderReport {
    pub triples: Vec<(f64, f64, f64)>,
    pub samples: usize,
    pub violations: Vec<usize>,
    /// Largest `‖Ag‖_q / (‖|A|‖_r ‖g‖_s)` seen per triple.
    pub worst_ratio: Vec<f64>,
}

impl HolderReport {
    pub fn passed(&self) -> bool {
        self.violations.iter().all(|&v| v == 0)
    }
}

fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Checks every triple in [`HOLDER_TRIPLES`] on `samples` seeded pairs.
/// Amplitudes vary over several decades across nodes so that the norms
/// are not dominated by a flat profile.
pub fn holder_check(grid: &Grid3, samples: usize, seed: u64) -> Result<HolderReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n3 = grid.len();
    let mut violations = vec![0; HOLDER_TRIPLES.len()];
    let mut worst = vec![0.0f64; HOLDER_TRIPLES.len()];
    for _ in 0..samples {
        let mut ag = vec![Complex64::default(); 4 * n3];
        let mut g = vec![Complex64::default(); 4 * n3];
        let mut a_norm = vec![Complex64::default(); n3];
        for idx in 0..n3 {
            let a_scale = 10f64.powf(rng.gen_range(-3.0..1.0));
            let g_scale = 10f64.powf(rng.gen_range(-3.0..1.0));
            let a = Matrix4::from_fn(|_, _| random_complex(&mut rng) * a_scale);
            let v: Vec<Complex64> = (0..4).map(|_| random_complex(&mut rng) * g_scale).collect();
            for r in 0..4 {
                ag[r * n3 + idx] = (0..4).map(|c| a[(r, c)] * v[c]).sum();
                g[r * n3 + idx] = v[r];
            }
            a_norm[idx] = Complex64::from(operator_norm(&a));
        }
        let ag = Field::from_values(*grid, 4, Representation::Position, ag)?;
        let g = Field::from_values(*grid, 4, Representation::Position, g)?;
        let a_norm = Field::from_values(*grid, 1, Representation::Position, a_norm)?;
        for (t, &(q, r, s)) in HOLDER_TRIPLES.iter().enumerate() {
            let lhs = lq_norm(&ag, q)?;
            let rhs = lq_norm(&a_norm, r)? * lq_norm(&g, s)?;
            let ratio = lhs / rhs;
            worst[t] = worst[t].max(ratio);
            if lhs > rhs * (1.0 + 1e-12) {
                violations[t] += 1;
            }
        }
    }
    Ok(HolderReport { triples: HOLDER_TRIPLES.to_vec(), samples, violations, worst_ratio: worst })
}

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::birman_schwinger::SampledPotential;
use crate::error::Result;
use crate::fields::Field;
use crate::kinetic::{dirac, Branch, KineticKind, KineticModel, Matrix4, SpectralPoint};
use crate::specfun::{resolvent_kernel, KernelValue};

/// `∫_{[-1/2,1/2]³} |r|⁻¹ d³r`.
const CUBE_INV_R: f64 = 2.380_077_363_979_553;
/// `∫_{[-1/2,1/2]³} |r|⁻² d³r`.
const CUBE_INV_R2: f64 = 7.674_124_222_443_732;
/// Sources below this fraction of the peak are ignored.
const SOURCE_CUTOFF: f64 = 1e-10;

/// Direct kernel quadrature of `φ₀` on a seeded node subsample, compared
/// with the FFT construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelCrossCheck {
    pub nodes: Vec<usize>,
    /// FFT-route values, `components` per node.
    pub fft_values: Vec<Vec<Complex64>>,
    /// Kernel-route values.
    pub kernel_values: Vec<Vec<Complex64>>,
    /// `(Σ|a - b|² / Σ|b|²)^{1/2}` over the subsample; `None` when no node
    /// lies far enough from the box edge.
    pub discrepancy: Option<f64>,
}

/// Self-cell contribution of the threshold kernel: the integral of its
/// singular part over the cell centred at the target node.
fn self_cell(model: &KineticModel, branch: Branch, h: f64) -> Matrix4 {
    let m = model.mass;
    let coulomb = h * h * CUBE_INV_R / (4.0 * PI);
    let id = Matrix4::identity();
    match model.kind {
        KineticKind::Schrodinger => id * Complex64::from(coulomb),
        KineticKind::Pseudorelativistic => id * Complex64::from(m * coulomb + h * CUBE_INV_R2 / (2.0 * PI * PI)),
        KineticKind::Dirac => {
            let z = if branch == Branch::Upper { m } else { -m };
            (dirac::beta() * Complex64::from(m) + id * Complex64::from(z)) * Complex64::from(coulomb)
        }
    }
}

/// Evaluates `λ_c Σ_y T⁻¹(x - y) f₀(y) h³` at up to `count` seeded nodes
/// with `h/2 < |x|` and `|x| + R_f < L/2`, where `R_f` bounds the
/// numerical support of `f₀`. A quarter of the nodes are drawn from
/// inside that support, where the self cell is integrated analytically.
#[allow(clippy::too_many_arguments)]
pub fn kernel_cross_check(
    model: &KineticModel,
    branch: Branch,
    potential: &SampledPotential,
    f0: &Field,
    phi: &Field,
    lambda_c: f64,
    count: usize,
    seed: u64,
) -> Result<KernelCrossCheck> {
    let grid = *potential.grid();
    let n3 = grid.len();
    let comps = f0.components();
    let h = grid.spacing();
    let radius = |i: usize| {
        let x = grid.position(i);
        (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()
    };
    let peak = (0..n3).map(|i| f0.pointwise_norm(i)).fold(0.0, f64::max);
    let sources: Vec<usize> = (0..n3).filter(|&i| peak > 0.0 && f0.pointwise_norm(i) > SOURCE_CUTOFF * peak).collect();
    let extent = sources.iter().map(|&i| radius(i)).fold(0.0, f64::max);
    let limit = 0.5 * grid.box_length() - extent - h;
    let (inside, outside): (Vec<usize>, Vec<usize>) = (0..n3)
        .filter(|&i| radius(i) > 0.5 * h && radius(i) < limit)
        .partition(|&i| radius(i) <= extent);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let want_inside = (count / 4).min(inside.len());
    let want_outside = (count - want_inside).min(outside.len());
    let mut nodes: Vec<usize> = sample(&mut rng, inside.len(), want_inside).iter().map(|k| inside[k]).collect();
    nodes.extend(sample(&mut rng, outside.len(), want_outside).iter().map(|k| outside[k]));
    nodes.sort_unstable();

    let point = SpectralPoint::Threshold(branch);
    let h3 = grid.cell_volume();
    let correction = self_cell(model, branch, h) / Complex64::from(h3);
    let mut radial_cache: HashMap<i64, f64> = HashMap::new();
    let mut fft_values = Vec::with_capacity(nodes.len());
    let mut kernel_values = Vec::with_capacity(nodes.len());
    for &x in &nodes {
        let qx = grid.unflatten(x);
        let mut acc = vec![Complex64::default(); comps];
        for &y in &sources {
            let fy: Vec<Complex64> = (0..comps).map(|c| f0.values()[c * n3 + y]).collect();
            if y == x {
                for r in 0..comps {
                    acc[r] += (0..comps).map(|c| correction[(r, c)] * fy[c]).sum::<Complex64>();
                }
                continue;
            }
            let qy = grid.unflatten(y);
            let d = [0, 1, 2].map(|a| qx[a] as i64 - qy[a] as i64);
            let sep = d.map(|v| v as f64 * h);
            if model.is_dirac() {
                let k = resolvent_kernel(model, sep, &point)?.as_matrix();
                for r in 0..4 {
                    acc[r] += (0..4).map(|c| k[(r, c)] * fy[c]).sum::<Complex64>();
                }
            } else {
                let key = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
                let k = match radial_cache.get(&key) {
                    Some(&k) => k,
                    None => {
                        let k = match resolvent_kernel(model, sep, &point)? {
                            KernelValue::Scalar(s) => s,
                            KernelValue::Matrix(_) => unreachable!("scalar model"),
                        };
                        radial_cache.insert(key, k);
                        k
                    }
                };
                acc[0] += fy[0] * k;
            }
        }
        kernel_values.push(acc.iter().map(|v| v * (lambda_c * h3)).collect::<Vec<_>>());
        fft_values.push((0..comps).map(|c| phi.values()[c * n3 + x]).collect::<Vec<_>>());
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for (a, b) in fft_values.iter().zip(&kernel_values) {
        for (u, v) in a.iter().zip(b) {
            num += (u - v).norm_sqr();
            den += v.norm_sqr();
        }
    }
    let discrepancy = if nodes.is_empty() || den == 0.0 { None } else { Some((num / den).sqrt()) };
    Ok(KernelCrossCheck { nodes, fft_values, kernel_values, discrepancy })
}

//! Lowest eigenpair of `H = T - λV` on the periodic lattice.

use num_complex::Complex64;
use rustfft::FftDirection;

use super::eigen::{dot, norm};
use super::potential::SampledPotential;
use crate::error::{Error, Result};
use crate::fields::{fft, Field, Representation};
use crate::kinetic::{kinetic_symbol, KineticModel};

#[derive(Debug, Clone)]
pub struct HamiltonianEigenpair {
    pub energy: f64,
    pub vector: Field,
    pub residual: f64,
    pub iterations: usize,
}

struct Hamiltonian<'a> {
    symbol: Vec<f64>,
    potential: &'a SampledPotential,
    coupling: f64,
    shift: f64,
}

impl Hamiltonian<'_> {
    fn fourier_multiply(&self, x: &[Complex64], f: impl Fn(f64) -> f64) -> Vec<Complex64> {
        let n = self.potential.grid().n();
        let mut y = x.to_vec();
        fft::dft3(n, &mut y, FftDirection::Forward);
        y.iter_mut().zip(&self.symbol).for_each(|(v, t)| *v *= f(*t));
        fft::dft3(n, &mut y, FftDirection::Inverse);
        let s = 1.0 / self.symbol.len() as f64;
        y.iter_mut().for_each(|v| *v *= s);
        y
    }

    fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = self.fourier_multiply(x, |t| t);
        for ((v, u), pot) in y.iter_mut().zip(x).zip(self.potential.values()) {
            *v -= self.coupling * pot * u;
        }
        y
    }

    fn precondition(&self, r: &[Complex64]) -> Vec<Complex64> {
        self.fourier_multiply(r, |t| 1.0 / (t + self.shift))
    }
}

fn orthonormalize(basis: &mut Vec<Vec<Complex64>>) {
    let mut out: Vec<Vec<Complex64>> = Vec::with_capacity(basis.len());
    for mut v in basis.drain(..) {
        let original = norm(&v);
        for _ in 0..2 {
            for u in &out {
                let c = dot(u, &v);
                v.iter_mut().zip(u).for_each(|(a, b)| *a -= c * b);
            }
        }
        let nv = norm(&v);
        if nv > 1e-10 * original && nv > 0.0 {
            v.iter_mut().for_each(|a| *a /= nv);
            out.push(v);
        }
    }
    *basis = out;
}

/// Lowest eigenvalue of `T - λV` for a scalar kinetic energy on the
/// periodic lattice, by locally optimal block preconditioned inverse
/// iteration (LOBPCG, one vector) with preconditioner `(T + c)⁻¹`.
///
/// Converged when `‖Hx - Ex‖ ≤ tol · λ‖V‖_∞`.
pub fn lowest_eigenpair(
    model: &KineticModel,
    potential: &SampledPotential,
    coupling: f64,
    tol: f64,
    max_iter: usize,
) -> Result<HamiltonianEigenpair> {
    if model.is_dirac() {
        return Err(Error::Contract("the Dirac Hamiltonian is not bounded below".into()));
    }
    let grid = *potential.grid();
    let symbol = (0..grid.len())
        .map(|i| kinetic_symbol(model, grid.momentum(i)).scalar().unwrap())
        .collect();
    let scale = (coupling * potential.sup_norm()).max(1e-3);
    let h = Hamiltonian { symbol, potential, coupling, shift: scale };

    let mut x: Vec<Complex64> = potential.sqrt_values().iter().map(|s| Complex64::from(s + 1e-3)).collect();
    let nx = norm(&x);
    x.iter_mut().for_each(|v| *v /= nx);
    let mut hx = h.apply(&x);
    let mut p: Option<(Vec<Complex64>, Vec<Complex64>)> = None;
    let mut theta = dot(&x, &hx).re;
    let mut residual = f64::INFINITY;
    for it in 1..=max_iter {
        let r: Vec<Complex64> = hx.iter().zip(&x).map(|(a, b)| a - theta * b).collect();
        residual = norm(&r);
        if residual <= tol * scale {
            let s = 1.0 / grid.cell_volume().sqrt();
            let values = x.iter().map(|v| v * s).collect();
            return Ok(HamiltonianEigenpair {
                energy: theta,
                vector: Field::from_values(grid, 1, Representation::Position, values)?,
                residual: residual / scale,
                iterations: it,
            });
        }
        let w = h.precondition(&r);
        let mut basis = vec![x.clone(), w];
        if let Some((pv, _)) = &p {
            basis.push(pv.clone());
        }
        orthonormalize(&mut basis);
        let hb: Vec<Vec<Complex64>> = basis
            .iter()
            .enumerate()
            .map(|(i, b)| if i == 0 { hx.clone() } else { h.apply(b) })
            .collect();
        let k = basis.len();
        let g = nalgebra::DMatrix::from_fn(k, k, |i, j| dot(&basis[i], &hb[j]));
        let g = (&g + g.adjoint()) * Complex64::from(0.5);
        let eig = g.symmetric_eigen();
        let low = (0..k).min_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b])).unwrap();
        let c = eig.eigenvectors.column(low);
        let combine = |vs: &[Vec<Complex64>], from: usize| {
            let mut out = vec![Complex64::default(); x.len()];
            for i in from..k {
                out.iter_mut().zip(&vs[i]).for_each(|(o, v)| *o += c[i] * v);
            }
            out
        };
        let new_x = combine(&basis, 0);
        let new_hx = combine(&hb, 0);
        p = Some((combine(&basis, 1), combine(&hb, 1)));
        let nn = norm(&new_x);
        x = new_x.into_iter().map(|v| v / nn).collect();
        hx = new_hx.into_iter().map(|v| v / nn).collect();
        theta = dot(&x, &hx).re;
    }
    Err(Error::IterationLimit { iterations: max_iter, residual: residual / scale })
}

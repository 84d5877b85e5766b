use num_complex::Complex64;
use rustfft::FftDirection;
use serde::{Deserialize, Serialize};

use super::{decay_rate, dirac, Branch, EnergyWindow, KineticKind, KineticModel, Matrix4, Symbol};
use crate::error::{Error, Result};
use crate::fields::{fft, Field, Grid3, Representation};

/// How `(T - E)⁻¹` is realized on the periodic grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    /// Plain symbol on the momentum lattice: the operator of the periodic
    /// box. Its zero mode carries `1/(|E| L³)`, which swamps the operator
    /// as `E → 0`.
    Periodic,
    /// Free-space operator for sources supported in a ball of diameter
    /// `L/2`: the long-range Yukawa part of the kernel is truncated at
    /// radius `L/2` before sampling its transform, which removes all
    /// periodic images.
    #[default]
    Isolated,
}

/// Energy at which the resolvent is taken: inside the gap or at a
/// threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectralPoint {
    Energy(EnergyWindow),
    Threshold(Branch),
}

impl SpectralPoint {
    pub fn energy(&self, model: &KineticModel) -> f64 {
        match self {
            SpectralPoint::Energy(w) => w.energy,
            SpectralPoint::Threshold(b) => model.threshold(*b),
        }
    }

    pub fn branch(&self) -> Branch {
        match self {
            SpectralPoint::Energy(w) => w.branch,
            SpectralPoint::Threshold(b) => *b,
        }
    }
}

/// Fourier transform (unitary normalization times `(2π)^{3/2}`) of
/// `e^{-κr}/(4πr)` restricted to `r < rc`:
/// `[1 - e^{-κ rc}(cos p rc + (κ/p) sin p rc)] / (p² + κ²)`.
pub fn truncated_yukawa(p: f64, kappa: f64, rc: f64) -> f64 {
    let a = kappa * rc;
    let b = p * rc;
    let sinc = if b.abs() < 1e-8 { 1.0 - b * b / 6.0 } else { b.sin() / b };
    // 1 - cos b computed without cancellation
    let one_minus_cos = 2.0 * (0.5 * b).sin().powi(2);
    if p * p + kappa * kappa < 1e-300 {
        return 0.5 * rc * rc;
    }
    let decay = (-a).exp();
    let num = -(-a).exp_m1() + decay * one_minus_cos - decay * a * sinc;
    num / (p * p + kappa * kappa)
}

/// Lattice realization of `(T - E)⁻¹` (or its threshold limit) acting on
/// momentum samples in FFT order.
///
/// Every model is written as `P(p) Ŷ(p) + Q(p)` where `Ŷ` is the
/// transform of a Yukawa or Coulomb potential and `P`, `Q` are smooth:
/// Schrödinger `P = 1`; pseudorelativistic `P = 2(m + E)`,
/// `Q = 1/(√(p²+m²) + m + E)`; Dirac `P = α·p + mβ + m + E`. With
/// [`Boundary::Isolated`], `Ŷ` is replaced by its truncated transform.
#[derive(Debug, Clone)]
pub struct LatticeResolvent {
    model: KineticModel,
    grid: Grid3,
    point: SpectralPoint,
    boundary: Boundary,
    /// Full multiplier for scalar models, `Ŷ` for Dirac.
    factor: Vec<f64>,
    z: f64,
}

impl LatticeResolvent {
    pub fn new(model: KineticModel, grid: Grid3, point: SpectralPoint, boundary: Boundary) -> Result<Self> {
        let m = model.mass;
        let energy = match point {
            SpectralPoint::Energy(w) => EnergyWindow::new(&model, w.branch, w.energy)?.energy,
            SpectralPoint::Threshold(b) => {
                if b == Branch::Lower && !model.is_dirac() {
                    return Err(Error::Domain("the lower branch exists only for the Dirac model".into()));
                }
                model.threshold(b)
            }
        };
        let at_threshold = matches!(point, SpectralPoint::Threshold(_));
        let rc = 0.5 * grid.box_length();
        let kappa = match model.kind {
            KineticKind::Schrodinger => (-energy).max(0.0).sqrt(),
            _ => decay_rate(m, energy),
        };
        let kappa = if at_threshold { 0.0 } else { kappa };
        let yukawa = |p2: f64| -> f64 {
            match boundary {
                Boundary::Isolated => truncated_yukawa(p2.sqrt(), kappa, rc),
                Boundary::Periodic if p2 + kappa * kappa == 0.0 => 0.0,
                Boundary::Periodic => 1.0 / (p2 + kappa * kappa),
            }
        };
        let z = m + energy;
        let factor = (0..grid.len())
            .map(|idx| {
                let p = grid.momentum(idx);
                let p2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
                match model.kind {
                    KineticKind::Schrodinger | KineticKind::Dirac => yukawa(p2),
                    KineticKind::Pseudorelativistic => {
                        let s = (p2 + m * m).sqrt();
                        let t = p2 / (s + m);
                        let plain = boundary == Boundary::Periodic || energy <= -2.0 * m;
                        if plain {
                            if at_threshold {
                                if p2 == 0.0 { 0.0 } else { 1.0 / t }
                            } else {
                                1.0 / (t - energy)
                            }
                        } else {
                            2.0 * z * yukawa(p2) + 1.0 / (s + z)
                        }
                    }
                }
            })
            .collect();
        Ok(Self { model, grid, point, boundary, factor, z })
    }

    pub fn model(&self) -> &KineticModel {
        &self.model
    }

    pub fn grid(&self) -> &Grid3 {
        &self.grid
    }

    pub fn point(&self) -> SpectralPoint {
        self.point
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    /// Momentum with Nyquist components zeroed, used for the odd `α·p`
    /// part so that it stays odd under `p → -p` on the lattice.
    fn odd_momentum(&self, idx: usize) -> [f64; 3] {
        let n = self.grid.n();
        let q = self.grid.unflatten(idx);
        let p = self.grid.momentum(idx);
        [0, 1, 2].map(|a| if q[a] == n / 2 { 0.0 } else { p[a] })
    }

    /// Lattice multiplier at momentum node `idx`.
    pub fn multiplier_at(&self, idx: usize) -> Symbol {
        match self.model.kind {
            KineticKind::Dirac => {
                let m = self.model.mass;
                let y = Complex64::from(self.factor[idx]);
                let p = self.odd_momentum(idx);
                let mat = dirac::alpha_dot(p)
                    + dirac::beta() * Complex64::from(m)
                    + Matrix4::identity() * Complex64::from(self.z);
                Symbol::Matrix(mat * y)
            }
            _ => Symbol::Scalar(self.factor[idx]),
        }
    }

    /// Multiplies component-major momentum data in place.
    pub fn apply_momentum(&self, data: &mut [Complex64]) {
        let n3 = self.grid.len();
        match self.model.kind {
            KineticKind::Dirac => {
                assert_eq!(data.len(), 4 * n3);
                let m = self.model.mass;
                let (a, rest) = data.split_at_mut(n3);
                let (b, rest) = rest.split_at_mut(n3);
                let (c, d) = rest.split_at_mut(n3);
                for idx in 0..n3 {
                    let y = self.factor[idx];
                    if y == 0.0 {
                        a[idx] = Complex64::default();
                        b[idx] = Complex64::default();
                        c[idx] = Complex64::default();
                        d[idx] = Complex64::default();
                        continue;
                    }
                    let v = [a[idx], b[idx], c[idx], d[idx]];
                    let ap = dirac::apply_alpha_dot(self.odd_momentum(idx), v);
                    let up = m + self.z;
                    let down = -m + self.z;
                    a[idx] = (ap[0] + up * v[0]) * y;
                    b[idx] = (ap[1] + up * v[1]) * y;
                    c[idx] = (ap[2] + down * v[2]) * y;
                    d[idx] = (ap[3] + down * v[3]) * y;
                }
            }
            _ => {
                assert_eq!(data.len() % n3, 0);
                for chunk in data.chunks_mut(n3) {
                    for (v, f) in chunk.iter_mut().zip(&self.factor) {
                        *v *= f;
                    }
                }
            }
        }
    }

    /// Applies the operator to component-major position samples in place.
    pub fn apply_position(&self, data: &mut [Complex64]) {
        let n = self.grid.n();
        fft::dft3(n, data, FftDirection::Forward);
        self.apply_momentum(data);
        fft::dft3(n, data, FftDirection::Inverse);
        let scale = 1.0 / self.grid.len() as f64;
        data.iter_mut().for_each(|v| *v *= scale);
    }

    /// Applies the operator to a position-space field.
    pub fn apply(&self, field: &Field) -> Result<Field> {
        if field.representation() != Representation::Position || field.grid() != &self.grid {
            return Err(Error::Contract("resolvent expects a position field on its own grid".into()));
        }
        if field.components() != self.model.components() {
            return Err(Error::Contract("component count does not match the kinetic model".into()));
        }
        let mut data = field.values().to_vec();
        self.apply_position(&mut data);
        Field::from_values(self.grid, field.components(), Representation::Position, data)
    }
}

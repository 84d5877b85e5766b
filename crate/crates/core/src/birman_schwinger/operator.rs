use std::sync::Arc;

use num_complex::Complex64;

use super::potential::SampledPotential;
use crate::error::{Error, Result};
use crate::fields::{Field, Grid3, Representation};
use crate::kinetic::{Boundary, KineticModel, LatticeResolvent, SpectralPoint};

/// A linear map on component-major lattice vectors.
pub trait LinearOperator {
    /// Length of the vectors the operator acts on.
    fn len(&self) -> usize;

    fn apply(&self, x: &[Complex64]) -> Vec<Complex64>;
}

/// Birman–Schwinger operator `K_E = V^{1/2} (T - E)⁻¹ V^{1/2}`, or its
/// threshold limit `K₀`.
#[derive(Debug, Clone)]
pub struct BSOperator {
    model: KineticModel,
    potential: Arc<SampledPotential>,
    resolvent: LatticeResolvent,
}

impl BSOperator {
    pub fn new(
        model: KineticModel,
        potential: Arc<SampledPotential>,
        point: SpectralPoint,
        boundary: Boundary,
    ) -> Result<Self> {
        let resolvent = LatticeResolvent::new(model, *potential.grid(), point, boundary)?;
        Ok(Self { model, potential, resolvent })
    }

    pub fn model(&self) -> &KineticModel {
        &self.model
    }

    pub fn grid(&self) -> &Grid3 {
        self.potential.grid()
    }

    pub fn potential(&self) -> &Arc<SampledPotential> {
        &self.potential
    }

    pub fn point(&self) -> SpectralPoint {
        self.resolvent.point()
    }

    pub fn boundary(&self) -> Boundary {
        self.resolvent.boundary()
    }

    pub fn resolvent(&self) -> &LatticeResolvent {
        &self.resolvent
    }

    fn multiply_sqrt(&self, data: &mut [Complex64]) {
        let sqrt = self.potential.sqrt_values();
        for chunk in data.chunks_mut(sqrt.len()) {
            chunk.iter_mut().zip(sqrt).for_each(|(v, s)| *v *= s);
        }
    }
}

impl LinearOperator for BSOperator {
    fn len(&self) -> usize {
        self.model.components() * self.grid().len()
    }

    fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut data = x.to_vec();
        self.multiply_sqrt(&mut data);
        self.resolvent.apply_position(&mut data);
        self.multiply_sqrt(&mut data);
        data
    }
}

/// `K_E μ` for a position-space field.
pub fn apply_bs(op: &BSOperator, mu: &Field) -> Result<Field> {
    if mu.grid() != op.grid() || mu.representation() != Representation::Position {
        return Err(Error::Contract("apply_bs expects a position field on the operator grid".into()));
    }
    if mu.components() != op.model.components() {
        return Err(Error::Contract("component count does not match the kinetic model".into()));
    }
    Field::from_values(*op.grid(), mu.components(), Representation::Position, op.apply(mu.values()))
}

/// `Γ x` with `Γ = γ⁵ ∘ parity`: swaps the upper and lower spinor pairs
/// and reflects `x → -x`.
pub fn gamma5_parity(grid: &Grid3, x: &[Complex64]) -> Vec<Complex64> {
    let n3 = grid.len();
    assert_eq!(x.len(), 4 * n3);
    let mut out = vec![Complex64::default(); 4 * n3];
    for c in 0..4 {
        let src = (c + 2) % 4;
        for i in 0..n3 {
            out[c * n3 + i] = x[src * n3 + grid.reflect(i)];
        }
    }
    out
}

/// Time-reversal partner `Θ x = (iσ_y ⊕ iσ_y) x̄` of a four-spinor field.
/// It commutes with every Dirac Birman–Schwinger operator with a real
/// potential and satisfies `Θ² = -1`, so `x ⊥ Θ x`.
pub fn kramers_partner(x: &[Complex64]) -> Vec<Complex64> {
    assert_eq!(x.len() % 4, 0);
    let n3 = x.len() / 4;
    let mut out = vec![Complex64::default(); x.len()];
    for pair in [0, 2] {
        for i in 0..n3 {
            out[pair * n3 + i] = x[(pair + 1) * n3 + i].conj();
            out[(pair + 1) * n3 + i] = -x[pair * n3 + i].conj();
        }
    }
    out
}

/// `-Γ K Γ` for a Dirac operator `K`; for `K` taken at energy `E` with
/// the reflected potential this is the Birman–Schwinger operator at
/// `-2m - E` with the original potential.
#[derive(Debug, Clone)]
pub struct Mirrored<'a> {
    inner: &'a BSOperator,
}

impl<'a> Mirrored<'a> {
    pub fn new(inner: &'a BSOperator) -> Result<Self> {
        if !inner.model.is_dirac() {
            return Err(Error::Contract("the branch mirror needs the Dirac model".into()));
        }
        Ok(Self { inner })
    }
}

impl LinearOperator for Mirrored<'_> {
    fn len(&self) -> usize {
        self.inner.len()
    }

    fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let grid = self.inner.grid();
        let y = self.inner.apply(&gamma5_parity(grid, x));
        gamma5_parity(grid, &y).into_iter().map(|v| -v).collect()
    }
}

/// `A - B` for two operators of equal size.
pub struct Difference<'a, A: LinearOperator, B: LinearOperator> {
    pub a: &'a A,
    pub b: &'a B,
}

impl<A: LinearOperator, B: LinearOperator> LinearOperator for Difference<'_, A, B> {
    fn len(&self) -> usize {
        self.a.len()
    }

    fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = self.a.apply(x);
        y.iter_mut().zip(self.b.apply(x)).for_each(|(u, v)| *u -= v);
        y
    }
}

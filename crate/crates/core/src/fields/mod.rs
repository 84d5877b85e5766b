//! Periodic cubic grids, scalar and spinor fields, the unitary lattice
//! Fourier transform and lattice `L_q` norms.
//!
//! The continuous transform is `f̂(p) = (2π)^{-3/2} ∫ e^{-ip·x} f(x) dx`.
//! On a grid with `n` points per axis and side `L` the position nodes are
//! `x_j = -L/2 + j h` and the momentum nodes `p_k = 2πk/L` with
//! `k ∈ [-n/2, n/2)`. Momentum arrays are stored in FFT order: index `q`
//! carries wavenumber `q` for `q < n/2` and `q - n` otherwise.

pub(crate) mod fft;

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftDirection;

use crate::error::{Error, Result};

/// Cubic grid of `n³` nodes on the box `[-L/2, L/2)³`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid3 {
    n: usize,
    box_length: f64,
}

impl Grid3 {
    pub fn new(n: usize, box_length: f64) -> Result<Self> {
        if n < 8 || n % 2 != 0 {
            return Err(Error::Domain(format!("grid size must be even and at least 8, got {n}")));
        }
        if !(box_length > 0.0 && box_length.is_finite()) {
            return Err(Error::Domain(format!("box length must be positive, got {box_length}")));
        }
        Ok(Self { n, box_length })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    /// Number of nodes, `n³`.
    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Position spacing `h = L/n`.
    pub fn spacing(&self) -> f64 {
        self.box_length / self.n as f64
    }

    /// Momentum spacing `Δp = 2π/L`.
    pub fn momentum_spacing(&self) -> f64 {
        2.0 * PI / self.box_length
    }

    /// Position quadrature weight `h³`.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(3)
    }

    /// Momentum quadrature weight `Δp³`.
    pub fn momentum_cell_volume(&self) -> f64 {
        self.momentum_spacing().powi(3)
    }

    /// Splits a flat node index into `(i, j, k)`.
    pub fn unflatten(&self, idx: usize) -> [usize; 3] {
        let n = self.n;
        [idx / (n * n), (idx / n) % n, idx % n]
    }

    pub fn flatten(&self, [i, j, k]: [usize; 3]) -> usize {
        (i * self.n + j) * self.n + k
    }

    pub fn position(&self, idx: usize) -> [f64; 3] {
        let h = self.spacing();
        let half = 0.5 * self.box_length;
        self.unflatten(idx).map(|j| -half + j as f64 * h)
    }

    /// Signed wavenumber of FFT index `q`.
    pub fn wavenumber(&self, q: usize) -> i64 {
        if q < self.n / 2 {
            q as i64
        } else {
            q as i64 - self.n as i64
        }
    }

    pub fn momentum(&self, idx: usize) -> [f64; 3] {
        let dp = self.momentum_spacing();
        self.unflatten(idx).map(|q| self.wavenumber(q) as f64 * dp)
    }

    /// Whether the node sits on a Nyquist plane (`k = -n/2` on some axis).
    pub fn is_nyquist(&self, idx: usize) -> bool {
        self.unflatten(idx).contains(&(self.n / 2))
    }

    /// Index of the node at `-x` (position) or `-p` (momentum), taken
    /// modulo the period. Both layouts reflect as `j -> (n - j) mod n`.
    pub fn reflect(&self, idx: usize) -> usize {
        let n = self.n;
        self.flatten(self.unflatten(idx).map(|j| (n - j) % n))
    }

    /// Largest momentum magnitude on the lattice, `√3·πn/L`.
    pub fn max_momentum(&self) -> f64 {
        3f64.sqrt() * PI * self.n as f64 / self.box_length
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    Position,
    Momentum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Complex samples of a scalar (1 component) or spinor (4 components)
/// field. Values are stored component-major: component `c` occupies
/// `values[c * n³ .. (c + 1) * n³]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid3,
    components: usize,
    repr: Representation,
    values: Vec<Complex64>,
}

impl Field {
    pub fn from_values(
        grid: Grid3,
        components: usize,
        repr: Representation,
        values: Vec<Complex64>,
    ) -> Result<Self> {
        if components != 1 && components != 4 {
            return Err(Error::Contract(format!("fields have 1 or 4 components, got {components}")));
        }
        if values.len() != components * grid.len() {
            return Err(Error::Contract(format!(
                "expected {} values, got {}",
                components * grid.len(),
                values.len()
            )));
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::Domain("field values must be finite".into()));
        }
        Ok(Self { grid, components, repr, values })
    }

    pub fn zeros(grid: Grid3, components: usize, repr: Representation) -> Self {
        Self::from_values(grid, components, repr, vec![Complex64::default(); components * grid.len()])
            .expect("zero field is valid")
    }

    /// Scalar field from a function of the node coordinate (position or
    /// momentum, following `repr`).
    pub fn scalar_fn(grid: Grid3, repr: Representation, f: impl Fn([f64; 3]) -> Complex64) -> Result<Self> {
        let values = (0..grid.len())
            .map(|i| f(node(&grid, repr, i)))
            .collect();
        Self::from_values(grid, 1, repr, values)
    }

    /// Spinor field from a function returning all four components.
    pub fn spinor_fn(
        grid: Grid3,
        repr: Representation,
        f: impl Fn([f64; 3]) -> [Complex64; 4],
    ) -> Result<Self> {
        let n3 = grid.len();
        let mut values = vec![Complex64::default(); 4 * n3];
        for i in 0..n3 {
            let v = f(node(&grid, repr, i));
            for c in 0..4 {
                values[c * n3 + i] = v[c];
            }
        }
        Self::from_values(grid, 4, repr, values)
    }

    pub fn grid(&self) -> &Grid3 {
        &self.grid
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn representation(&self) -> Representation {
        self.repr
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn component(&self, c: usize) -> &[Complex64] {
        let n3 = self.grid.len();
        &self.values[c * n3..(c + 1) * n3]
    }

    /// Value of every component at node `idx`.
    pub fn at(&self, idx: usize) -> Vec<Complex64> {
        let n3 = self.grid.len();
        (0..self.components).map(|c| self.values[c * n3 + idx]).collect()
    }

    /// Pointwise Euclidean norm of the component vector at node `idx`.
    pub fn pointwise_norm(&self, idx: usize) -> f64 {
        let n3 = self.grid.len();
        (0..self.components)
            .map(|c| self.values[c * n3 + idx].norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Quadrature weight of one node in this field's representation.
    pub fn measure(&self) -> f64 {
        match self.repr {
            Representation::Position => self.grid.cell_volume(),
            Representation::Momentum => self.grid.momentum_cell_volume(),
        }
    }

    pub fn scale(&self, a: Complex64) -> Self {
        self.map(|_, v| a * v)
    }

    /// Applies `f(node, value)` to every sample.
    pub fn map(&self, f: impl Fn(usize, Complex64) -> Complex64) -> Self {
        let n3 = self.grid.len();
        let values = self.values.iter().enumerate().map(|(i, &v)| f(i % n3, v)).collect();
        Self { values, ..self.clone() }
    }

    /// `self - other`, with matching layout checked.
    pub fn sub(&self, other: &Field) -> Result<Self> {
        self.check_compatible(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Ok(Self { values, ..self.clone() })
    }

    pub fn add(&self, other: &Field) -> Result<Self> {
        self.check_compatible(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(Self { values, ..self.clone() })
    }

    pub(crate) fn check_compatible(&self, other: &Field) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::Contract("fields live on different grids".into()));
        }
        if self.repr != other.repr {
            return Err(Error::Contract("fields are in different representations".into()));
        }
        if self.components != other.components {
            return Err(Error::Contract("fields have different component counts".into()));
        }
        Ok(())
    }
}

fn node(grid: &Grid3, repr: Representation, idx: usize) -> [f64; 3] {
    match repr {
        Representation::Position => grid.position(idx),
        Representation::Momentum => grid.momentum(idx),
    }
}

/// `(-1)^{q1+q2+q3}`, the phase that moves the DFT origin to the box
/// corner `-L/2`.
fn corner_phase(grid: &Grid3, idx: usize) -> f64 {
    let [a, b, c] = grid.unflatten(idx);
    if (a + b + c) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Unitary lattice Fourier transform, componentwise for spinors.
pub fn fourier(field: &Field, direction: Direction) -> Result<Field> {
    let grid = field.grid;
    let n3 = grid.len();
    let norm = (2.0 * PI).powf(-1.5);
    let (expected, target, dir, scale) = match direction {
        Direction::Forward => (
            Representation::Position,
            Representation::Momentum,
            FftDirection::Forward,
            norm * grid.cell_volume(),
        ),
        Direction::Inverse => (
            Representation::Momentum,
            Representation::Position,
            FftDirection::Inverse,
            norm * grid.momentum_cell_volume(),
        ),
    };
    if field.repr != expected {
        return Err(Error::Contract(format!(
            "{direction:?} transform expects a {expected:?} field"
        )));
    }
    let mut values = field.values.clone();
    if direction == Direction::Inverse {
        for (i, v) in values.iter_mut().enumerate() {
            *v *= corner_phase(&grid, i % n3);
        }
    }
    fft::dft3(grid.n, &mut values, dir);
    for (i, v) in values.iter_mut().enumerate() {
        let phase = if direction == Direction::Forward { corner_phase(&grid, i % n3) } else { 1.0 };
        *v *= scale * phase;
    }
    Field::from_values(grid, field.components, target, values)
}

/// Lattice `L_q` norm using the pointwise Euclidean norm of the component
/// vector. `q = f64::INFINITY` gives the maximum.
pub fn lq_norm(field: &Field, q: f64) -> Result<f64> {
    if q.is_nan() || q < 1.0 {
        return Err(Error::Domain(format!("L_q norm needs q >= 1, got {q}")));
    }
    let pointwise = (0..field.grid.len()).map(|i| field.pointwise_norm(i));
    if q.is_infinite() {
        return Ok(pointwise.fold(0.0, f64::max));
    }
    let sum: f64 = pointwise.map(|v| v.powf(q)).sum();
    Ok((field.measure() * sum).powf(1.0 / q))
}

/// Lattice inner product, conjugate-linear in the first argument.
pub fn inner(a: &Field, b: &Field) -> Result<Complex64> {
    a.check_compatible(b)?;
    let sum: Complex64 = a.values.iter().zip(&b.values).map(|(x, y)| x.conj() * y).sum();
    Ok(sum * a.measure())
}

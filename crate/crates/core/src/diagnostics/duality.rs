use std::f64::consts::PI;

use num_complex::Complex64;
use serde_json::json;

use super::{CheckReport, Provenance, Relation, Suite, SuiteConfig};
use crate::error::{Error, Result};
use crate::fields::{Field, Grid3, Representation};
use crate::kinetic::{
    decay_rate, dirac, Boundary, Branch, EnergyWindow, KineticKind, KineticModel, LatticeResolvent, Matrix4,
    SpectralPoint,
};
use crate::specfun::{radial_convolution, BesselK1, FnProfile, Gaussian, RadialProfile};

fn rate(model: &KineticModel, energy: f64) -> Result<f64> {
    EnergyWindow::new(model, Branch::Upper, energy)?;
    Ok(match model.kind {
        KineticKind::Schrodinger => (-energy).sqrt(),
        _ => decay_rate(model.mass, energy),
    })
}

/// `e^{-ν|·|}/(4π|·|) ∗ g` in closed form,
/// `e^{ν²σ²/2}/(8πr) [e^{-νr} erfc((νσ² - r)/√2σ) - e^{νr} erfc((νσ² + r)/√2σ)]`.
pub fn smoothed_yukawa(nu: f64, sigma: f64, r: f64) -> Result<f64> {
    if !(r > 0.0 && sigma > 0.0) {
        return Err(Error::Domain(format!("smoothed Yukawa needs r, sigma > 0, got {r}, {sigma}")));
    }
    let s2 = std::f64::consts::SQRT_2 * sigma;
    let a = nu * sigma * sigma;
    let lead = (0.5 * nu * nu * sigma * sigma).exp() / (8.0 * PI * r);
    Ok(lead * ((-nu * r).exp() * libm::erfc((a - r) / s2) - (nu * r).exp() * libm::erfc((a + r) / s2)))
}

/// `(K ∗ g)(r)` for a scalar model, `K` the closed-form kernel of
/// `(T - E)⁻¹` and `g` the normalized Gaussian of width `sigma`.
pub fn mollified_scalar_kernel(model: &KineticModel, energy: f64, sigma: f64, r: f64) -> Result<f64> {
    let nu = rate(model, energy)?;
    let yukawa = smoothed_yukawa(nu, sigma, r)?;
    match model.kind {
        KineticKind::Schrodinger => Ok(yukawa),
        KineticKind::Pseudorelativistic => {
            let m = model.mass;
            let bessel = radial_convolution(&BesselK1 { mass: m }, &Gaussian { sigma }, r)?;
            let inner = FnProfile { f: |s: f64| smoothed_yukawa(nu, sigma, s).unwrap_or(f64::NAN), scale: sigma };
            let nested = radial_convolution(&inner, &BesselK1 { mass: m }, r)?;
            Ok((m + energy) * yukawa + bessel + (m * m - nu * nu) * nested)
        }
        KineticKind::Dirac => Err(Error::Contract("the Dirac kernel is matrix valued".into())),
    }
}

/// `(K ∗ g)(r)` for the Dirac kernel, written as
/// `(mβ + m + E) F(|r|) - i α·r̂ F'(|r|)` with `F` the mollified Yukawa
/// function of rate `ν`.
pub fn mollified_dirac_kernel(model: &KineticModel, energy: f64, sigma: f64, r: [f64; 3]) -> Result<Matrix4> {
    if !model.is_dirac() {
        return Err(Error::Contract("expected the Dirac model".into()));
    }
    let nu = rate(model, energy)?;
    let dist = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    let f = smoothed_yukawa(nu, sigma, dist)?;
    let step = 1e-4 * dist.max(sigma);
    let df = (smoothed_yukawa(nu, sigma, dist + step)? - smoothed_yukawa(nu, sigma, dist - step)?) / (2.0 * step);
    let m = model.mass;
    let scalar = dirac::beta() * Complex64::from(m) + Matrix4::identity() * Complex64::from(m + energy);
    let dir = r.map(|c| c / dist);
    Ok(scalar * Complex64::from(f) - dirac::alpha_dot(dir) * Complex64::new(0.0, df))
}

/// Nodes on the rays `(a,0,0)`, `(a,a,0)`, `(a,a,a)`, `a > 0`, with
/// `r_min < |x| < L/4`.
fn sample_nodes(grid: &Grid3, r_min: f64) -> Vec<usize> {
    let r_max = grid.box_length() / 4.0;
    (0..grid.len())
        .filter(|&idx| {
            let x = grid.position(idx);
            let on_ray = x[0] > 0.0
                && ((x[1] == 0.0 && x[2] == 0.0) || (x[1] == x[0] && x[2] == 0.0) || (x[1] == x[0] && x[2] == x[0]));
            let d = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
            on_ray && d > r_min && d < r_max
        })
        .collect()
}

fn gaussian_source(grid: &Grid3, sigma: f64, comps: usize, component: usize) -> Result<Field> {
    let n3 = grid.len();
    let g = Gaussian { sigma };
    let mut values = vec![Complex64::default(); comps * n3];
    for idx in 0..n3 {
        let x = grid.position(idx);
        values[component * n3 + idx] = Complex64::from(g.value((x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()));
    }
    Field::from_values(*grid, comps, Representation::Position, values)
}

/// Largest relative deviation between the lattice resolvent applied to a
/// Gaussian and the mollified closed-form kernel at the sample nodes.
fn duality_error(model: &KineticModel, grid: &Grid3, energy: f64, sigma: f64, r_min: f64) -> Result<(f64, usize)> {
    let window = EnergyWindow::new(model, Branch::Upper, energy)?;
    let resolvent = LatticeResolvent::new(*model, *grid, SpectralPoint::Energy(window), Boundary::Periodic)?;
    let nodes = sample_nodes(grid, r_min);
    let n3 = grid.len();
    let comps = model.components();
    let columns: Vec<Field> =
        (0..comps).map(|c| resolvent.apply(&gaussian_source(grid, sigma, comps, c)?)).collect::<Result<_>>()?;
    let mut worst: f64 = 0.0;
    for &idx in &nodes {
        let x = grid.position(idx);
        let err = if model.is_dirac() {
            let exact = mollified_dirac_kernel(model, energy, sigma, x)?;
            let lattice = Matrix4::from_fn(|r, c| columns[c].values()[r * n3 + idx]);
            (lattice - exact).norm() / exact.norm()
        } else {
            let d = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
            let exact = mollified_scalar_kernel(model, energy, sigma, d)?;
            (columns[0].values()[idx] - exact).norm() / exact.abs()
        };
        worst = worst.max(err);
    }
    Ok((worst, nodes.len()))
}

pub(super) fn duality_suite(config: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let c = &config.duality;
    let grid = Grid3::new(c.n, c.box_length)?;
    let sigma = c.width_cells * grid.spacing();
    let models = [
        ("schrodinger", KineticModel::schrodinger()),
        ("pseudorelativistic", KineticModel::pseudorelativistic(config.mass)?),
        ("dirac", KineticModel::dirac(config.mass)?),
    ];
    let mut out = Vec::new();
    for (name, model) in models {
        for &energy in &c.energies {
            let (err, nodes) = duality_error(&model, &grid, energy, sigma, c.r_min)?;
            let inputs = json!({
                "model": name, "mass": model.mass, "energy": energy, "n": c.n, "box_length": c.box_length,
                "sigma": sigma, "r_min": c.r_min, "r_max": c.box_length / 4.0, "boundary": "periodic",
            });
            out.push(
                CheckReport::new(
                    Suite::Duality,
                    format!("kernel_duality_{name}_E{energy}"),
                    inputs,
                    err,
                    Relation::Below,
                    c.tolerance,
                    Provenance::SelfConvergence,
                )
                .with("nodes", nodes as f64),
            );
        }
    }
    Ok(out)
}

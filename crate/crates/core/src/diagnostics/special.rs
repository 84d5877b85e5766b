use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{CheckReport, Provenance, Relation, Suite, SuiteConfig};
use crate::error::Result;
use crate::fields::{fourier, Direction, Field, Grid3, Representation};
use crate::kinetic::{fw_inverse, fw_matrix, kinetic_symbol, KineticModel, Matrix4};
use crate::specfun::{k1, quadrature::integrate_to_infinity};

const X_MIN: f64 = 1e-4;
const X_MAX: f64 = 30.0;
/// Left end of the range on which the exponential bound is fitted.
const RHO: f64 = 1.0;

pub(super) fn bessel_suite(config: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let count = config.bessel_samples.max(2);
    let xs: Vec<f64> = (0..count)
        .map(|i| X_MIN * (X_MAX / X_MIN).powf(i as f64 / (count - 1) as f64))
        .collect();
    let range = json!({ "x_min": X_MIN, "x_max": X_MAX, "samples": count, "spacing": "log" });

    let worst = xs.iter().map(|&x| x * k1(x)).fold(0.0, f64::max);
    let inverse = CheckReport::new(Suite::Bessel, "k1_below_inverse", range.clone(), worst, Relation::AtMost, 1.0, Provenance::Analytic);

    // K₁(x)√x eˣ decreases to √(π/2) on x > ρ, so its value at the first
    // sample beyond ρ is the smallest admissible constant.
    let ratios: Vec<f64> = xs.iter().filter(|&&x| x > RHO).map(|&x| k1(x) * x.sqrt() * x.exp()).collect();
    let c = ratios.iter().copied().fold(0.0, f64::max);
    let violations = ratios.windows(2).filter(|w| w[1] > w[0]).count()
        + ratios.iter().filter(|&&g| g < (PI / 2.0).sqrt() * (1.0 - 1e-12)).count();
    let exponential = CheckReport::new(
        Suite::Bessel,
        "k1_exponential_bound",
        json!({ "x_min": X_MIN, "x_max": X_MAX, "samples": count, "rho": RHO }),
        violations as f64,
        Relation::Below,
        1.0,
        Provenance::Analytic,
    )
    .with("fitted_c", c)
    .with("limit_c", (PI / 2.0).sqrt())
    .with("ratio_at_x_max", *ratios.last().unwrap_or(&f64::NAN));

    // K₁(x) = ∫₀^∞ e^{-x cosh t} cosh t dt
    let oracle = integrate_to_infinity(|t| (-t.cosh()).exp() * t.cosh(), 0.0, 0.5, 1e-16, 1e-16)?.value;
    let k1_one = k1(1.0);
    let at_one = CheckReport::new(
        Suite::Bessel,
        "k1_integral_oracle",
        json!({ "x": 1.0 }),
        (k1_one - oracle).abs(),
        Relation::Below,
        1e-9,
        Provenance::Analytic,
    )
    .with("k1", k1_one)
    .with("oracle", oracle);
    Ok(vec![inverse, exponential, at_one])
}

fn random_momentum(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let d: [f64; 3] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let n = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
        if n > 1e-3 && n <= 1.0 {
            let r = 10f64.powf(rng.gen_range(-3.0..3.0));
            return d.map(|c| c * r / n);
        }
    }
}

pub(super) fn fw_suite(config: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let m = config.mass;
    let model = KineticModel::dirac(m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut isometry: f64 = 0.0;
    let mut inverse: f64 = 0.0;
    let mut diagonal: f64 = 0.0;
    for _ in 0..config.fw_samples {
        let p = random_momentum(&mut rng);
        let u = fw_matrix(p, m);
        let ui = fw_inverse(p, m);
        let id = Matrix4::identity();
        isometry = isometry.max((u.adjoint() * u - id).norm()).max((u * u.adjoint() - id).norm());
        inverse = inverse.max((ui - u.adjoint()).norm());
        let s = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + m * m).sqrt();
        let expected = Matrix4::from_diagonal(&nalgebra::Vector4::new(s - m, s - m, -s - m, -s - m).map(Complex64::from));
        let rotated = u * kinetic_symbol(&model, p).as_matrix() * ui;
        diagonal = diagonal.max((rotated - expected).norm() / (s + m));
    }
    let inputs = json!({ "mass": m, "samples": config.fw_samples, "seed": config.seed, "log10_p": [-3.0, 3.0] });
    let iso = CheckReport::new(Suite::Fw, "fw_isometry", inputs.clone(), isometry, Relation::Below, 1e-12, Provenance::Analytic)
        .with("inverse_vs_adjoint", inverse);
    let diag = CheckReport::new(Suite::Fw, "fw_diagonalization", inputs, diagonal, Relation::Below, 1e-12, Provenance::Analytic);

    let grid = Grid3::new(16, 8.0)?;
    let values: Vec<Complex64> =
        (0..4 * grid.len()).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let f = Field::from_values(grid, 4, Representation::Position, values)?;
    let back = fourier(&fourier(&f, Direction::Forward)?, Direction::Inverse)?;
    let norm = |v: &[Complex64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let rel = norm(back.sub(&f)?.values()) / norm(f.values());
    let trip = CheckReport::new(
        Suite::Fw,
        "fourier_round_trip",
        json!({ "n": 16, "box_length": 8.0, "components": 4, "seed": config.seed }),
        rel,
        Relation::Below,
        1e-12,
        Provenance::Analytic,
    );
    Ok(vec![iso, diag, trip])
}

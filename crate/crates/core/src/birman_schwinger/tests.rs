use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::fields::{inner, lq_norm, Grid3};
use crate::kinetic::{Boundary, Branch, EnergyWindow, KineticModel, SpectralPoint};
use crate::Error;

fn random(len: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

fn models() -> [KineticModel; 3] {
    [
        KineticModel::schrodinger(),
        KineticModel::pseudorelativistic(1.0).unwrap(),
        KineticModel::dirac(1.0).unwrap(),
    ]
}

fn well(grid: Grid3) -> Arc<SampledPotential> {
    Arc::new(PotentialSpec::square_well(1.0).sample(&grid).unwrap())
}

#[test]
fn operator_is_self_adjoint() {
    let g = Grid3::new(16, 6.0).unwrap();
    let v = well(g);
    for model in models() {
        for boundary in [Boundary::Periodic, Boundary::Isolated] {
            let points = [
                SpectralPoint::Energy(EnergyWindow::new(&model, Branch::Upper, -0.3).unwrap()),
                SpectralPoint::Threshold(Branch::Upper),
            ];
            for point in points {
                let op = BSOperator::new(model, v.clone(), point, boundary).unwrap();
                let len = op.len();
                let f = Field::from_values(g, model.components(), Representation::Position, random(len, 1)).unwrap();
                let h = Field::from_values(g, model.components(), Representation::Position, random(len, 2)).unwrap();
                let kf = apply_bs(&op, &f).unwrap();
                let kh = apply_bs(&op, &h).unwrap();
                let lhs = inner(&kf, &h).unwrap();
                let rhs = inner(&f, &kh).unwrap();
                let scale = lq_norm(&f, 2.0).unwrap() * lq_norm(&h, 2.0).unwrap();
                assert!((lhs - rhs).norm() < 1e-10 * scale, "{model} {boundary:?} {point:?}");
            }
        }
    }
}

#[test]
fn vanishing_potential() {
    let g = Grid3::new(8, 4.0).unwrap();
    let zero = Arc::new(SampledPotential::new(g, vec![0.0; g.len()]).unwrap());
    let model = KineticModel::schrodinger();
    let w = EnergyWindow::new(&model, Branch::Upper, -1.0).unwrap();
    let op = BSOperator::new(model, zero.clone(), SpectralPoint::Energy(w), Boundary::Isolated).unwrap();
    let f = Field::from_values(g, 1, Representation::Position, random(g.len(), 3)).unwrap();
    assert!(apply_bs(&op, &f).unwrap().values().iter().all(|v| v.norm() == 0.0));
    assert!(matches!(leading_eigenpair(&op, 1e-8, 100), Err(Error::Degenerate(_))));
    let ladder = geometric_ladder(&model, Branch::Upper, 1.0, 0.5, 4);
    let report = norm_convergence_check(&model, &zero, &ladder, Branch::Upper, &CurveOptions::default(), 1).unwrap();
    assert!(report.gaps.iter().all(|&g| g == 0.0));
}

#[test]
fn linear_in_the_argument() {
    let g = Grid3::new(8, 4.0).unwrap();
    let model = KineticModel::dirac(1.0).unwrap();
    let w = EnergyWindow::new(&model, Branch::Upper, -0.5).unwrap();
    let op = BSOperator::new(model, well(g), SpectralPoint::Energy(w), Boundary::Isolated).unwrap();
    let f = Field::from_values(g, 4, Representation::Position, random(op.len(), 4)).unwrap();
    let c = Complex64::new(0.3, -2.0);
    let a = apply_bs(&op, &f.scale(c)).unwrap();
    let b = apply_bs(&op, &f).unwrap().scale(c);
    assert!(lq_norm(&a.sub(&b).unwrap(), 2.0).unwrap() < 1e-13 * lq_norm(&a, 2.0).unwrap());
    let scalar = Field::zeros(g, 1, Representation::Position);
    assert!(matches!(apply_bs(&op, &scalar), Err(Error::Contract(_))));
}

#[test]
fn eigenpair_is_a_fixed_point() {
    let g = Grid3::new(16, 8.0).unwrap();
    let model = KineticModel::schrodinger();
    let w = EnergyWindow::new(&model, Branch::Upper, -0.25).unwrap();
    let op = BSOperator::new(model, well(g), SpectralPoint::Energy(w), Boundary::Isolated).unwrap();
    let (alpha, mu) = leading_eigenpair(&op, 1e-10, 500).unwrap();
    assert!((lq_norm(&mu, 2.0).unwrap() - 1.0).abs() < 1e-12);
    let kmu = apply_bs(&op, &mu).unwrap();
    let again = inner(&mu, &kmu).unwrap().re;
    assert!((again - alpha).abs() < 1e-9 * alpha);
    let big = mu.values().iter().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap();
    assert!(big.im.abs() < 1e-14 && big.re > 0.0);
}

#[test]
fn power_and_lanczos_agree_for_positive_operators() {
    let g = Grid3::new(16, 8.0).unwrap();
    let model = KineticModel::pseudorelativistic(1.0).unwrap();
    let v = well(g);
    let w = EnergyWindow::new(&model, Branch::Upper, -0.3).unwrap();
    let op = BSOperator::new(model, v.clone(), SpectralPoint::Energy(w), Boundary::Isolated).unwrap();
    let start = default_start(&model, &v);
    let l = largest_eigenpair(&op, &start, &SolverOptions::default()).unwrap();
    let p = largest_eigenpair(&op, &start, &SolverOptions { solver: Solver::Power, tol: 1e-7, ..Default::default() })
        .unwrap();
    assert!((l.value - p.value).abs() < 1e-8 * l.value);
}

#[test]
fn alpha_grows_toward_threshold_and_extrapolates() {
    let g = Grid3::new(24, 8.0).unwrap();
    let model = KineticModel::schrodinger();
    let v = well(g);
    let ladder = geometric_ladder(&model, Branch::Upper, 0.25, 0.5, 6);
    let curve = lambda_curve(&model, &v, &ladder, Branch::Upper, &CurveOptions::default()).unwrap();
    assert!(curve.alphas.windows(2).all(|w| w[1] > w[0]));
    assert!(curve.overlaps.iter().all(|&o| o > 0.9));
    let result = extrapolate_threshold(curve, &v).unwrap();
    // the direct threshold operator agrees with the extrapolated limit
    assert!((result.threshold_rayleigh * result.lambda_c - 1.0).abs() < 2e-3);
    assert!(result.threshold_residual < 5e-3);
}

#[test]
fn ladder_validation() {
    let model = KineticModel::schrodinger();
    assert!(validate_ladder(&model, Branch::Upper, &[-1.0, -0.5, -0.7]).is_err());
    assert!(validate_ladder(&model, Branch::Upper, &[-1.0, -0.5, 0.1]).is_err());
    assert!(validate_ladder(&model, Branch::Upper, &[-1.0, -0.5, -0.25]).is_ok());
    let d = KineticModel::dirac(1.0).unwrap();
    assert_eq!(geometric_ladder(&d, Branch::Lower, 0.5, 0.5, 2), vec![-1.5, -1.75]);
}

#[test]
fn too_short_ladder_cannot_extrapolate() {
    let g = Grid3::new(8, 4.0).unwrap();
    let model = KineticModel::schrodinger();
    let v = well(g);
    let curve = lambda_curve(&model, &v, &[-1.0, -0.5, -0.25], Branch::Upper, &CurveOptions::default()).unwrap();
    assert!(matches!(extrapolate_threshold(curve, &v), Err(Error::Domain(_))));
}

#[test]
fn branch_mirror_is_exact_on_the_lattice() {
    let g = Grid3::new(12, 6.0).unwrap();
    let model = KineticModel::dirac(1.0).unwrap();
    // an asymmetric potential exercises the parity part of the mirror
    let values = (0..g.len())
        .map(|i| {
            let x = g.position(i);
            (-(x[0] - 0.3).powi(2) - x[1] * x[1] - (x[2] + 0.2).powi(2)).exp()
        })
        .collect();
    let v = Arc::new(SampledPotential::new(g, values).unwrap());
    let lower = geometric_ladder(&model, Branch::Lower, 0.5, 0.5, 3);
    let opts = CurveOptions::default();
    let direct = lambda_curve(&model, &v, &lower, Branch::Lower, &opts).unwrap();
    let mirrored = mirrored_lambda_curve(&model, &v, &lower, &opts).unwrap();
    for (a, b) in direct.lambdas.iter().zip(&mirrored.lambdas) {
        assert!((a - b).abs() < 1e-8 * a, "{a} {b}");
    }
}

#[test]
fn hamiltonian_duality_on_the_periodic_lattice() {
    let g = Grid3::new(16, 8.0).unwrap();
    let model = KineticModel::schrodinger();
    let v = well(g);
    let lambda = 4.0;
    let ground = hamiltonian::lowest_eigenpair(&model, &v, lambda, 1e-10, 500).unwrap();
    assert!(ground.energy < 0.0);
    let w = EnergyWindow::new(&model, Branch::Upper, ground.energy).unwrap();
    let op = BSOperator::new(model, v, SpectralPoint::Energy(w), Boundary::Periodic).unwrap();
    let (alpha, _) = leading_eigenpair(&op, 1e-11, 500).unwrap();
    assert!((alpha * lambda - 1.0).abs() < 1e-8, "{}", alpha * lambda);
}

#[test]
fn time_reversal_commutes_with_the_dirac_operator() {
    let g = Grid3::new(16, 6.0).unwrap();
    let model = KineticModel::dirac(1.0).unwrap();
    let x = random(4 * g.len(), 3);
    let partner = kramers_partner(&x);
    assert!(kramers_partner(&partner).iter().zip(&x).all(|(a, b)| (a + b).norm() < 1e-15));
    for boundary in [Boundary::Periodic, Boundary::Isolated] {
        for branch in [Branch::Upper, Branch::Lower] {
            let e = if branch == Branch::Upper { -0.4 } else { -1.6 };
            let point = SpectralPoint::Energy(EnergyWindow::new(&model, branch, e).unwrap());
            let op = BSOperator::new(model, well(g), point, boundary).unwrap();
            let lhs = op.apply(&partner);
            let rhs = kramers_partner(&op.apply(&x));
            let err = lhs.iter().zip(&rhs).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
            let scale = rhs.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            assert!(err < 1e-10 * scale, "{boundary:?} {branch:?}: {err}");
        }
    }
}

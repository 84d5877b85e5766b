use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::birman_schwinger::{
    extrapolate_threshold, geometric_ladder, lambda_curve, leading_eigenpair, BSOperator, CurveOptions, PotentialSpec,
    ThresholdResult,
};
use crate::fields::Grid3;
use crate::kinetic::{kinetic_symbol, truncated_yukawa};

fn well(n: usize, l: f64) -> Arc<SampledPotential> {
    let grid = Grid3::new(n, l).unwrap();
    Arc::new(PotentialSpec::square_well(1.0).sample(&grid).unwrap())
}

fn threshold(model: &KineticModel, branch: Branch, v: &Arc<SampledPotential>, offset0: f64, count: usize) -> ThresholdResult {
    let energies = geometric_ladder(model, branch, offset0, 0.5, count);
    let curve = lambda_curve(model, v, &energies, branch, &CurveOptions::default()).unwrap();
    extrapolate_threshold(curve, v).unwrap()
}

fn schrodinger_state(n: usize, l: f64) -> (Arc<SampledPotential>, ThresholdState) {
    let model = KineticModel::schrodinger();
    let v = well(n, l);
    let res = threshold(&model, Branch::Upper, &v, 1.0, 8);
    let state = build_threshold_state(&model, Branch::Upper, &v, &res.mu_0, res.lambda_c, &StateOptions::default()).unwrap();
    (v, state)
}

#[test]
fn zero_source_gives_zero_state() {
    let model = KineticModel::schrodinger();
    let v = well(16, 8.0);
    let w = EnergyWindow::new(&model, Branch::Upper, -0.25).unwrap();
    let mu = Field::zeros(*v.grid(), 1, Representation::Position);
    let phi = reconstruct_phi(&model, &v, &w, &mu, 2.0, Boundary::Isolated).unwrap();
    assert!(phi.values().iter().all(|z| z.norm() == 0.0));
}

#[test]
fn reconstruction_solves_lippmann_schwinger() {
    let model = KineticModel::schrodinger();
    let v = well(32, 8.0);
    let w = EnergyWindow::new(&model, Branch::Upper, -0.25).unwrap();
    let op = BSOperator::new(model, v.clone(), SpectralPoint::Energy(w), Boundary::Isolated).unwrap();
    let (alpha, mu) = leading_eigenpair(&op, 1e-10, 2000).unwrap();
    let phi = reconstruct_phi(&model, &v, &w, &mu, 1.0 / alpha, Boundary::Isolated).unwrap();
    let r = lippmann_schwinger_residual(&v, &phi, &mu).unwrap();
    assert!(r < 1e-3, "{r}");
}

#[test]
fn periodic_reconstruction_satisfies_momentum_equation_nodewise() {
    let model = KineticModel::schrodinger();
    let v = well(16, 8.0);
    let w = EnergyWindow::new(&model, Branch::Upper, -0.25).unwrap();
    let op = BSOperator::new(model, v.clone(), SpectralPoint::Energy(w), Boundary::Periodic).unwrap();
    let (alpha, mu) = leading_eigenpair(&op, 1e-10, 2000).unwrap();
    let lambda = 1.0 / alpha;
    let phi = reconstruct_phi(&model, &v, &w, &mu, lambda, Boundary::Periodic).unwrap();
    let phi_hat = fourier(&phi, Direction::Forward).unwrap();
    let f_hat = fourier(&position_product(&v, &mu, true).unwrap(), Direction::Forward).unwrap();
    let grid = *v.grid();
    let scale = f_hat.values().iter().map(|z| z.norm()).fold(0.0, f64::max) * lambda;
    for idx in 0..grid.len() {
        let t = kinetic_symbol(&model, grid.momentum(idx)).scalar().unwrap();
        let lhs = phi_hat.values()[idx] * (t + 0.25);
        let rhs = f_hat.values()[idx] * lambda;
        assert!((lhs - rhs).norm() < 1e-8 * scale);
    }
}

#[test]
fn schrodinger_state_is_a_resonance_with_consistent_routes() {
    let (_, state) = schrodinger_state(32, 8.0);
    assert_eq!(state.phi_momentum.values()[0], Complex64::default());
    assert_eq!(state.classification(), Classification::Resonance);
    assert!(state.resonance.criterion[0].re > 0.0);
    assert!(state.resonance.margin() > 10.0);
    let d = state.cross_check.discrepancy.unwrap();
    assert!(d < 0.05, "route discrepancy {d}");
    assert_eq!(state.cross_check.nodes.len(), 64);
}

#[test]
fn position_route_differs_from_the_momentum_samples_by_the_truncation_term() {
    let (_, state) = schrodinger_state(24, 8.0);
    let grid = *state.f0.grid();
    let rc = 0.5 * grid.box_length();
    let f_hat = fourier(&state.f0, Direction::Forward).unwrap();
    let from_position = fourier(&state.phi_position, Direction::Forward).unwrap();
    let scale = state.phi_momentum.values().iter().map(|z| z.norm()).fold(0.0, f64::max);
    for idx in 1..grid.len() {
        let p = grid.momentum(idx);
        let pn = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        let expected = state.phi_momentum.values()[idx]
            - f_hat.values()[idx] * (state.lambda_c * (pn * rc).cos() / (pn * pn));
        assert!((from_position.values()[idx] - expected).norm() < 1e-10 * scale);
        assert!((truncated_yukawa(pn, 0.0, rc) - (1.0 - (pn * rc).cos()) / (pn * pn)).abs() < 1e-12);
    }
}

#[test]
fn odd_state_is_classified_as_eigenvalue() {
    let v = well(24, 8.0);
    let odd = Field::scalar_fn(*v.grid(), Representation::Position, |x| Complex64::from(x[0] * (-x[0] * x[0]).exp())).unwrap();
    let report = resonance_criterion(&odd, Branch::Upper, &v, 1e-2).unwrap();
    assert!(report.magnitude < 1e-12);
    assert_eq!(report.classification, Classification::Eigenvalue);
}

#[test]
fn doubling_the_potential_scales_the_criterion() {
    let (v, state) = schrodinger_state(24, 8.0);
    let doubled = SampledPotential::new(*v.grid(), v.values().iter().map(|x| 2.0 * x).collect()).unwrap();
    let a = resonance_criterion(&state.phi_position, Branch::Upper, &v, 1e-2).unwrap();
    let b = resonance_criterion(&state.phi_position, Branch::Upper, &doubled, 1e-2).unwrap();
    assert!((b.criterion[0] - a.criterion[0] * 2.0).norm() < 1e-12 * a.magnitude);
    assert_eq!(a.classification, b.classification);
    assert!(resonance_criterion(&state.phi_position, Branch::Upper, &v, 0.0).is_err());
}

#[test]
fn weak_residual_is_small_for_the_state_and_large_for_noise() {
    let (v, state) = schrodinger_state(32, 8.0);
    let pack = default_test_pack(v.grid(), 1);
    let r = weak_residual(&state, &v, &pack).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let values = (0..v.grid().len()).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let noise = Field::from_values(*v.grid(), 1, Representation::Position, values).unwrap();
    let r_noise = weak_residual_of(&state.model, &v, state.lambda_c, &noise, &pack).unwrap();
    assert!(r < 1e-2, "{r}");
    assert!(r_noise > 10.0 * r, "{r_noise} vs {r}");
}

#[test]
fn undecayed_test_functions_are_rejected() {
    let (v, state) = schrodinger_state(24, 8.0);
    let wide = [GaussianTest { center: [0.0; 3], width: 2.0, component: 0 }];
    assert!(matches!(weak_residual(&state, &v, &wide), Err(Error::InvalidTest(_))));
    assert!(matches!(weak_residual(&state, &v, &[]), Err(Error::InvalidTest(_))));
}

#[test]
fn holder_inequality_has_no_violations() {
    let grid = Grid3::new(8, 2.0).unwrap();
    let report = holder_check(&grid, 40, 11).unwrap();
    assert!(report.passed(), "{report:?}");
    assert!(report.worst_ratio.iter().all(|&r| r > 0.0 && r <= 1.0));
}

#[test]
fn source_differences_shrink_along_the_ladder() {
    let model = KineticModel::schrodinger();
    let v = well(24, 8.0);
    let energies = geometric_ladder(&model, Branch::Upper, 1.0, 0.5, 6);
    let curve = lambda_curve(&model, &v, &energies, Branch::Upper, &CurveOptions::default()).unwrap();
    let report = source_convergence(&curve, &v).unwrap();
    assert!(report.monotone, "{report:?}");
}

#[test]
fn dirac_state_projects_onto_the_branch_pair() {
    let model = KineticModel::dirac(1.0).unwrap();
    let v = well(16, 8.0);
    let res = threshold(&model, Branch::Upper, &v, 0.5, 6);
    let state = build_threshold_state(&model, Branch::Upper, &v, &res.mu_0, res.lambda_c, &StateOptions::default()).unwrap();
    let c = &state.resonance.criterion;
    assert_eq!(c.len(), 4);
    assert!(c[2].norm() == 0.0 && c[3].norm() == 0.0);
    assert_eq!(state.classification(), Classification::Resonance);
    let lower = [GaussianTest { center: [0.0; 3], width: 0.5, component: 2 }];
    assert!(weak_residual(&state, &v, &lower).unwrap().is_finite());
}

#[test]
fn far_field_fit_recovers_a_power_law() {
    let grid = Grid3::new(32, 16.0).unwrap();
    let f = Field::scalar_fn(grid, Representation::Position, |x| {
        Complex64::from((x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt().max(0.1).powf(-2.0))
    })
    .unwrap();
    let k = far_field_exponent(&f, &[0], 2.0, 6.0).unwrap();
    assert!((k + 2.0).abs() < 1e-2, "{k}");
    let _ = PI;
}

mod common;

use std::f64::consts::PI;
use std::sync::Arc;

use threshold_spectra::birman_schwinger::{
    extrapolate_threshold, geometric_ladder, lambda_curve, leading_eigenpair, BSOperator, CurveOptions, PotentialSpec,
};
use threshold_spectra::fields::Grid3;
use threshold_spectra::kinetic::{Boundary, Branch, EnergyWindow, KineticModel, SpectralPoint};

fn well(n: usize, l: f64) -> Arc<threshold_spectra::birman_schwinger::SampledPotential> {
    let grid = Grid3::new(n, l).unwrap();
    Arc::new(PotentialSpec::square_well(1.0).sample(&grid).unwrap())
}

fn alpha_at(n: usize, l: f64, e: f64) -> f64 {
    let model = KineticModel::schrodinger();
    let w = EnergyWindow::new(&model, Branch::Upper, e).unwrap();
    let op = BSOperator::new(model, well(n, l), SpectralPoint::Energy(w), Boundary::Isolated).unwrap();
    leading_eigenpair(&op, 1e-10, 2000).unwrap().0
}

#[test]
fn rayleigh_quotient_matches_radial_nystrom_at_unit_energy() {
    let oracle = common::radial_nystrom_alpha(1.0, 400);
    let alpha = alpha_at(64, 8.0, -1.0);
    let rel = (alpha - oracle).abs() / oracle;
    assert!(rel < 5e-3, "alpha {alpha} vs oracle {oracle}: {rel:.3e}");
}

#[test]
fn lattice_error_shrinks_with_refinement() {
    let oracle = common::radial_nystrom_alpha(1.0, 400);
    let coarse = (alpha_at(32, 8.0, -1.0) - oracle).abs();
    let fine = (alpha_at(48, 8.0, -1.0) - oracle).abs();
    assert!(fine < 0.6 * coarse, "{coarse:.3e} -> {fine:.3e}");
}

#[test]
fn square_well_threshold_from_the_energy_ladder() {
    let model = KineticModel::schrodinger();
    let v = well(64, 16.0);
    let energies = geometric_ladder(&model, Branch::Upper, 1.0, 0.5, 11);
    let curve = lambda_curve(&model, &v, &energies, Branch::Upper, &CurveOptions::default()).unwrap();
    let exact = common::shooting_threshold();
    assert!((exact - PI * PI / 4.0).abs() < 1e-9);

    assert!(curve.lambdas.windows(2).all(|w| w[1] < w[0]), "{:?}", curve.lambdas);
    let last = *curve.lambdas.last().unwrap();
    let continuum = 1.0 / common::radial_nystrom_alpha((-energies[10]).sqrt(), 400);
    assert!((last - continuum).abs() / continuum < 1e-2, "lambda_10 = {last} vs {continuum}");
    assert!(curve.overlaps.iter().all(|&o| o > 0.9));
    let tail = &curve.cauchy_residuals[curve.cauchy_residuals.len() - 4..];
    assert!(tail.windows(2).all(|w| w[1] < w[0]), "{tail:?}");

    let result = extrapolate_threshold(curve, &v).unwrap();
    let rel = (result.lambda_c - exact).abs() / exact;
    assert!(rel < 1e-2, "lambda_c = {} ({rel:.3e})", result.lambda_c);
    assert!(result.threshold_residual < 5e-3, "{}", result.threshold_residual);
}

#[test]
fn coarse_and_fine_grids_agree_within_one_percent() {
    for e in [-1.0, -1.0 / 64.0] {
        let coarse = 1.0 / alpha_at(64, 16.0, e);
        let fine = 1.0 / alpha_at(96, 16.0, e);
        assert!((coarse - fine).abs() / fine < 1e-2, "E = {e}: {coarse} vs {fine}");
    }
}

use super::*;
use crate::kinetic::{Branch, EnergyWindow, KineticModel, SpectralPoint};
use crate::specfun::resolvent_kernel;

fn quick() -> SuiteConfig {
    SuiteConfig {
        fw_samples: 200,
        bessel_samples: 2000,
        holder_samples: 50,
        duality: DualityConfig { n: 32, box_length: 8.0, energies: vec![-1.0], tolerance: 5e-2, ..Default::default() },
        dirac_symmetry: SymmetryConfig { n: 16, box_length: 8.0, rungs: 4, ..Default::default() },
        selfconv: SelfconvConfig { sizes: vec![16, 24], box_length: 8.0, rungs: 6, tolerance: 0.5 },
        ..Default::default()
    }
}

#[test]
fn suite_names_round_trip() {
    for s in Suite::ALL {
        assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        assert_eq!(serde_json::to_string(&s).unwrap(), format!("\"{}\"", s.name()));
    }
    assert!(matches!("nope".parse::<Suite>(), Err(Error::Usage(_))));
}

#[test]
fn report_relation_and_digest() {
    let a = CheckReport::new(Suite::Fw, "x", serde_json::json!({"a": 1}), 1.0, Relation::AtMost, 1.0, Provenance::Analytic);
    let b = CheckReport::new(Suite::Fw, "x", serde_json::json!({"a": 1}), 1.0, Relation::Below, 1.0, Provenance::Analytic);
    let c = CheckReport::new(Suite::Fw, "x", serde_json::json!({"a": 2}), 1.0, Relation::Below, 1.0, Provenance::Analytic);
    assert!(a.passed && !b.passed);
    assert_eq!(a.digest, b.digest);
    assert_ne!(a.digest, c.digest);
    assert_eq!(a.digest.len(), 16);
}

#[test]
fn cheap_suites_pass_and_are_reproducible() {
    let config = quick();
    let suites = [Suite::Bessel, Suite::Fw, Suite::Holder];
    let first = run_suites(&suites, &config).unwrap();
    let second = run_suites(&suites, &config).unwrap();
    assert_eq!(serde_json::to_string(&first).unwrap(), serde_json::to_string(&second).unwrap());
    for r in &first {
        assert!(r.passed, "{r:?}");
    }
    assert_eq!(first.len(), 7);
}

#[test]
fn exponential_bound_constant_approaches_the_asymptotic_value() {
    let reports = run_suite(Suite::Bessel, &quick()).unwrap();
    let r = reports.iter().find(|r| r.check == "k1_exponential_bound").unwrap();
    let (c, limit) = (r.values["fitted_c"], r.values["limit_c"]);
    assert!(c > limit && c < 2.0 * limit, "{c}");
    assert!((r.values["ratio_at_x_max"] / limit - 1.0) < 0.02);
}

#[test]
fn mollified_dirac_kernel_tends_to_closed_form() {
    let model = KineticModel::dirac(1.0).unwrap();
    let r = [0.6, -0.3, 0.9];
    let exact = resolvent_kernel(&model, r, &SpectralPoint::Energy(EnergyWindow::new(&model, Branch::Upper, -0.5).unwrap()))
        .unwrap()
        .as_matrix();
    let smooth = mollified_dirac_kernel(&model, -0.5, 1e-3, r).unwrap();
    assert!((smooth - exact).norm() < 1e-5 * exact.norm(), "{}", (smooth - exact).norm());
}

#[test]
fn mollified_pseudorelativistic_kernel_tends_to_closed_form() {
    let model = KineticModel::pseudorelativistic(1.0).unwrap();
    let point = SpectralPoint::Energy(EnergyWindow::new(&model, Branch::Upper, -0.5).unwrap());
    let exact = resolvent_kernel(&model, [0.0, 1.2, 0.0], &point).unwrap().scalar().unwrap();
    let smooth = mollified_scalar_kernel(&model, -0.5, 1e-3, 1.2).unwrap();
    assert!((smooth - exact).abs() < 1e-5 * exact.abs(), "{smooth} {exact}");
}

#[test]
fn coarse_duality_holds_for_every_model() {
    let reports = run_suite(Suite::Duality, &quick()).unwrap();
    assert_eq!(reports.len(), 3);
    for r in &reports {
        assert!(r.passed, "{} {}", r.check, r.measured);
    }
}

#[test]
fn symmetry_and_selfconv_run_on_small_grids() {
    let config = quick();
    let sym = run_suite(Suite::DiracSymmetry, &config).unwrap();
    assert!(sym.iter().all(|r| r.passed), "{sym:?}");
    let conv = run_suite(Suite::Selfconv, &config).unwrap();
    assert_eq!(conv.len(), 2);
    assert!(conv[0].values.contains_key("lambda_c_n24"));
}

#[test]
fn richardson_removes_a_quadratic_error() {
    let f = |n: usize| 2.0 + 3.0 / (n * n) as f64;
    assert!((richardson((32, f(32)), (48, f(48)), 2.0) - 2.0).abs() < 1e-14);
}

#[test]
fn invalid_mass_is_rejected() {
    let config = SuiteConfig { mass: -1.0, ..quick() };
    assert!(run_suite(Suite::Fw, &config).is_err());
}

#[test]
fn smoothed_yukawa_matches_radial_convolution() {
    use crate::specfun::{radial_convolution, Gaussian, Yukawa};
    for (nu, sigma, r) in [(1.0, 0.5, 0.3), (0.7, 0.5, 2.0), (0.0, 0.4, 1.0), (2.0, 0.2, 3.5)] {
        let q = radial_convolution(&Gaussian { sigma }, &Yukawa { nu }, r).unwrap();
        let c = smoothed_yukawa(nu, sigma, r).unwrap();
        assert!((q - c).abs() < 1e-9 * c.abs(), "{nu} {sigma} {r}: {q} {c}");
    }
}

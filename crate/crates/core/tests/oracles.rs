mod common;

use std::f64::consts::PI;

#[test]
fn shooting_reproduces_the_analytic_threshold() {
    let lc = common::shooting_threshold();
    assert!((lc - PI * PI / 4.0).abs() < 1e-9, "{lc}");
}

#[test]
fn nystrom_at_zero_energy_matches_shooting() {
    let alpha = common::radial_nystrom_alpha(0.0, 400);
    assert!((1.0 / alpha - common::shooting_threshold()).abs() < 1e-4);
}

#[test]
fn resonance_integral_closed_form() {
    let c = common::resonance_integral();
    assert!((c - 16.0 / (PI * (2.0 * PI).sqrt())).abs() < 1e-8, "{c}");
}

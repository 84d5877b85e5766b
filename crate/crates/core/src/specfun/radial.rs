//! Convolution of radial functions on ℝ³.

use std::f64::consts::PI;

use super::bessel;
use super::quadrature::{integrate, integrate_to_infinity};
use crate::error::{Error, Result};

/// A radial function `f(|x|)` on ℝ³.
pub trait RadialProfile {
    fn value(&self, r: f64) -> f64;

    /// Any antiderivative of `t ↦ t·f(t)`. Only differences are used, so
    /// the constant is arbitrary and may be chosen to keep values finite.
    fn moment(&self, t: f64) -> f64 {
        integrate(|u| u * self.value(u), 0.0, t, 1e-13, 1e-12)
            .map(|e| e.value)
            .unwrap_or(f64::NAN)
    }

    /// Length scale on which the profile varies.
    fn scale(&self) -> f64 {
        1.0
    }
}

/// `e^{-νr}/(4πr)`, the kernel of `(p² + ν²)⁻¹`.
#[derive(Debug, Clone, Copy)]
pub struct Yukawa {
    pub nu: f64,
}

impl RadialProfile for Yukawa {
    fn value(&self, r: f64) -> f64 {
        (-self.nu * r).exp() / (4.0 * PI * r)
    }

    fn moment(&self, t: f64) -> f64 {
        if self.nu == 0.0 {
            t / (4.0 * PI)
        } else {
            -(-self.nu * t).exp_m1() / (4.0 * PI * self.nu)
        }
    }

    fn scale(&self) -> f64 {
        if self.nu > 0.0 {
            1.0 / self.nu
        } else {
            1.0
        }
    }
}

/// `(m/2π²) K₁(mr)/r`, the kernel of `(p² + m²)^{-1/2}`.
#[derive(Debug, Clone, Copy)]
pub struct BesselK1 {
    pub mass: f64,
}

impl RadialProfile for BesselK1 {
    fn value(&self, r: f64) -> f64 {
        self.mass / (2.0 * PI * PI) * bessel::k1(self.mass * r) / r
    }

    fn moment(&self, t: f64) -> f64 {
        // d/dt K₀(mt) = -m K₁(mt)
        if t == 0.0 {
            return f64::NEG_INFINITY;
        }
        -bessel::k0(self.mass * t) / (2.0 * PI * PI)
    }

    fn scale(&self) -> f64 {
        1.0 / self.mass
    }
}

/// Normalized Gaussian `(2πσ²)^{-3/2} e^{-r²/2σ²}`.
#[derive(Debug, Clone, Copy)]
pub struct Gaussian {
    pub sigma: f64,
}

impl Gaussian {
    fn norm(&self) -> f64 {
        (2.0 * PI * self.sigma * self.sigma).powf(-1.5)
    }
}

impl RadialProfile for Gaussian {
    fn value(&self, r: f64) -> f64 {
        self.norm() * (-0.5 * r * r / (self.sigma * self.sigma)).exp()
    }

    fn moment(&self, t: f64) -> f64 {
        let s2 = self.sigma * self.sigma;
        -self.norm() * s2 * (-0.5 * t * t / s2).exp_m1()
    }

    fn scale(&self) -> f64 {
        self.sigma
    }
}

/// A profile given by a closure.
pub struct FnProfile<F: Fn(f64) -> f64> {
    pub f: F,
    pub scale: f64,
}

impl<F: Fn(f64) -> f64> RadialProfile for FnProfile<F> {
    fn value(&self, r: f64) -> f64 {
        (self.f)(r)
    }

    fn scale(&self) -> f64 {
        self.scale
    }
}

/// `(f ∗ g)(r)` for radial `f`, `g`, via
/// `(2π/r) ∫₀^∞ s f(s) [G(r+s) - G(|r-s|)] ds` with `G` the moment of `g`.
///
/// `f` must decay so that `∫ s f(s) ds` converges against the bounded
/// bracket; the outer integral is split at the kink `s = r`.
pub fn radial_convolution(f: &dyn RadialProfile, g: &dyn RadialProfile, r: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("radial convolution needs r > 0, got {r}")));
    }
    let integrand = |s: f64| {
        if s == 0.0 {
            return 0.0;
        }
        let bracket = g.moment(r + s) - g.moment((r - s).abs());
        s * f.value(s) * bracket
    };
    let inner = integrate(integrand, 0.0, r, 1e-14, 1e-11)?;
    let scale = f.scale().min(g.scale()).max(1e-3 * r).min(r.max(1e-3));
    let outer = integrate_to_infinity(integrand, r, scale, 1e-15, 1e-14)?;
    let value = 2.0 * PI / r * (inner.value + outer.value);
    if !value.is_finite() {
        return Err(Error::Domain("convolution integral diverges".into()));
    }
    Ok(value)
}

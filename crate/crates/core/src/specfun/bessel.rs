//! Modified Bessel functions of the second kind, `K₀`, `K₁`, `K₂`.
//!
//! Power series for `x ≤ 2`, Steed's continued fraction (Temme's method)
//! above.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const CROSSOVER: f64 = 2.0;

/// `K_order(x)` for `order ∈ {0, 1, 2}` and `x > 0`.
pub fn bessel_k(order: u32, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("K_ν(x) needs finite x > 0, got {x}")));
    }
    let (k0, k1) = k01(x);
    match order {
        0 => Ok(k0),
        1 => Ok(k1),
        2 => Ok(k0 + 2.0 / x * k1),
        _ => Err(Error::Domain(format!("only orders 0, 1, 2 are provided, got {order}"))),
    }
}

/// `K₁(x)` for `x > 0`; panics otherwise.
pub fn k1(x: f64) -> f64 {
    assert!(x > 0.0, "K₁ needs x > 0");
    k01(x).1
}

/// `K₀(x)` for `x > 0`; panics otherwise.
pub fn k0(x: f64) -> f64 {
    assert!(x > 0.0, "K₀ needs x > 0");
    k01(x).0
}

fn k01(x: f64) -> (f64, f64) {
    if x <= CROSSOVER {
        series(x)
    } else {
        steed(x)
    }
}

fn series(x: f64) -> (f64, f64) {
    let y = 0.25 * x * x;
    let log = (0.5 * x).ln();
    // term_k = y^k / (k!)², harmonic H_k
    let mut term = 1.0;
    let mut harmonic = 0.0;
    let mut i0 = 0.0;
    let mut i1 = 0.0;
    let mut k0_tail = 0.0;
    let mut k1_tail = 0.0;
    let mut k = 0u32;
    loop {
        let kf = k as f64;
        i0 += term;
        // y^k / (k! (k+1)!)
        let t1 = term / (kf + 1.0);
        i1 += t1;
        k0_tail += term * harmonic;
        // ψ(k+1) + ψ(k+2) = 2H_k + 1/(k+1) - 2γ
        k1_tail += t1 * (2.0 * harmonic + 1.0 / (kf + 1.0) - 2.0 * EULER_GAMMA);
        k += 1;
        let next = term * y / (k as f64 * k as f64);
        harmonic += 1.0 / k as f64;
        if next < 1e-17 * i0 {
            break;
        }
        term = next;
    }
    let i1 = 0.5 * x * i1;
    let k0 = -(log + EULER_GAMMA) * i0 + k0_tail;
    let k1 = 1.0 / x + i1 * log - 0.25 * x * k1_tail;
    (k0, k1)
}

fn steed(x: f64) -> (f64, f64) {
    let a1 = 0.25;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 1..10_000 {
        let fi = i as f64;
        a -= 2.0 * fi;
        c = -a * c / (fi + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            break;
        }
    }
    let h = a1 * h;
    let k0 = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// `K_ν(x) = ∫₀^∞ e^{-x cosh t} cosh(νt) dt` by composite Simpson on a
    /// truncated range, written independently of the implementation.
    fn oracle(nu: f64, x: f64) -> f64 {
        let upper = (2.0 * (60.0 / x + 1.0)).ln() + 2.0;
        let n = 200_000;
        let h = upper / n as f64;
        let f = |t: f64| (-x * t.cosh()).exp() * (nu * t).cosh();
        let mut sum = f(0.0) + f(upper);
        for i in 1..n {
            sum += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        sum * h / 3.0
    }

    #[test]
    fn k1_at_one() {
        assert_relative_eq!(k1(1.0), 0.601_907_230_197_234_6, epsilon = 1e-13);
        assert!((k1(1.0) - oracle(1.0, 1.0)).abs() < 1e-9);
    }

    #[test]
    fn matches_integral_representation() {
        for &x in &[0.01, 0.1, 0.5, 1.0, 1.9, 2.0, 2.1, 3.0, 5.0, 10.0, 20.0] {
            for nu in [0u32, 1, 2] {
                let v = bessel_k(nu, x).unwrap();
                assert_relative_eq!(v, oracle(nu as f64, x), max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn small_and_large_arguments() {
        assert!((1e-4 * k1(1e-4) - 1.0).abs() < 1e-3);
        assert!(k1(10.0) < (-10.0f64).exp());
        let c = k1(10.0) * 10f64.sqrt() * 10f64.exp();
        assert!(c > 1.1 && c < 1.3, "{c}");
    }

    #[test]
    fn crossover_is_continuous() {
        let (a0, a1) = series(2.0);
        let (b0, b1) = steed(2.0);
        assert_relative_eq!(a0, b0, max_relative = 1e-14);
        assert_relative_eq!(a1, b1, max_relative = 1e-14);
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(bessel_k(1, 0.0).is_err());
        assert!(bessel_k(1, -1.0).is_err());
        assert!(bessel_k(3, 1.0).is_err());
    }
}

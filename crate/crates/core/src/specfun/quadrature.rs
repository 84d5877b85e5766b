//! Adaptive Gauss–Kronrod (7/15) quadrature.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Estimate of an integral with its error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

fn kronrod(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> Estimate {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut gauss = fc * WG[3];
    let mut kron = fc * WGK[7];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    Estimate { value: kron * h, error: ((kron - gauss) * h).abs() }
}

/// Integrates `f` over `[a, b]`, bisecting the worst interval until the
/// summed error is below `max(abs_tol, rel_tol·|I|)`.
pub fn integrate(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<Estimate> {
    const MAX_INTERVALS: usize = 4000;
    if a == b {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    let mut parts = vec![(a, b, kronrod(&mut f, a, b))];
    loop {
        let value: f64 = parts.iter().map(|p| p.2.value).sum();
        let error: f64 = parts.iter().map(|p| p.2.error).sum();
        if !value.is_finite() {
            return Err(Error::Domain("integrand is not finite".into()));
        }
        if error <= abs_tol.max(rel_tol * value.abs()) {
            return Ok(Estimate { value, error });
        }
        if parts.len() >= MAX_INTERVALS {
            return Err(Error::IterationLimit { iterations: parts.len(), residual: error });
        }
        let worst = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .2.error.total_cmp(&y.1 .2.error))
            .map(|(i, _)| i)
            .unwrap();
        let (lo, hi, _) = parts.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // interval exhausted at machine resolution
            return Ok(Estimate { value, error });
        }
        parts.push((lo, mid, kronrod(&mut f, lo, mid)));
        parts.push((mid, hi, kronrod(&mut f, mid, hi)));
    }
}

/// Integrates `f` over `[a, ∞)` on intervals of doubling width starting at
/// `scale`, stopping once an interval contributes less than `cutoff`
/// relative to the running total twice in a row.
pub fn integrate_to_infinity(
    mut f: impl FnMut(f64) -> f64,
    a: f64,
    scale: f64,
    abs_tol: f64,
    cutoff: f64,
) -> Result<Estimate> {
    const MAX_PIECES: usize = 200;
    let mut total = Estimate { value: 0.0, error: 0.0 };
    let mut lo = a;
    let mut width = scale;
    let mut quiet = 0;
    for _ in 0..MAX_PIECES {
        let hi = lo + width;
        let part = integrate(&mut f, lo, hi, abs_tol, 1e-12)?;
        total.value += part.value;
        total.error += part.error;
        if part.value.abs() <= cutoff * total.value.abs() || (part.value == 0.0 && total.value == 0.0) {
            quiet += 1;
            if quiet == 2 {
                return Ok(total);
            }
        } else {
            quiet = 0;
        }
        lo = hi;
        width *= 2.0;
    }
    Err(Error::Domain(format!(
        "integral over [{a}, ∞) does not settle; the integrand decays too slowly"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_is_exact() {
        let e = integrate(|x| x.powi(5) - 3.0 * x * x, -1.0, 2.0, 1e-14, 1e-14).unwrap();
        assert_relative_eq!(e.value, 64.0 / 6.0 - 1.0 / 6.0 - 9.0, epsilon = 1e-13);
    }

    #[test]
    fn endpoint_singularity() {
        let e = integrate(|x| 1.0 / x.sqrt(), 0.0, 1.0, 1e-10, 1e-10).unwrap();
        assert_relative_eq!(e.value, 2.0, epsilon = 1e-8);
    }

    #[test]
    fn semi_infinite() {
        let e = integrate_to_infinity(|x| (-x).exp(), 0.0, 1.0, 1e-14, 1e-15).unwrap();
        assert_relative_eq!(e.value, 1.0, epsilon = 1e-12);
        let g = integrate_to_infinity(|x| 1.0 / (1.0 + x), 0.0, 1.0, 1e-12, 1e-14).unwrap_err();
        assert!(matches!(g, Error::Domain(_)));
    }
}

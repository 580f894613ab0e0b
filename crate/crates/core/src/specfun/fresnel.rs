//! Fresnel integrals `C(x) = int_0^x cos(pi u^2 / 2) du` and
//! `S(x) = int_0^x sin(pi u^2 / 2) du`.

use std::f64::consts::{FRAC_PI_2, PI};

use super::dd::Dd;
use crate::error::{ensure_finite, Result};

/// Boundary between the power series and the auxiliary-function expansion.
pub const SERIES_SWITCH: f64 = 4.5;

const HALF_PI: Dd = Dd::new(FRAC_PI_2, 6.123233995736766e-17);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FresnelPair {
    pub c: f64,
    pub s: f64,
}

/// Evaluates `C(x)` and `S(x)`; both are odd in `x`.
pub fn fresnel(x: f64) -> Result<FresnelPair> {
    ensure_finite("fresnel argument", x)?;
    Ok(fresnel_unchecked(x))
}

pub fn fresnel_unchecked(x: f64) -> FresnelPair {
    let ax = x.abs();
    let (c, s) = if ax <= SERIES_SWITCH {
        series(ax)
    } else {
        asymptotic(ax)
    };
    if x < 0.0 {
        FresnelPair { c: -c, s: -s }
    } else {
        FresnelPair { c, s }
    }
}

/// `x * sum_j (+-) w^j / (j! (2j + 1))` with `w = pi x^2 / 2`; even `j` feed
/// `C`, odd `j` feed `S`.
fn series(x: f64) -> (f64, f64) {
    let w = HALF_PI * Dd::product(x, x);
    let mut term = Dd::from_f64(x);
    let mut c = term;
    let mut s = Dd::ZERO;
    let mut peak = x.max(f64::MIN_POSITIVE);
    for j in 1..400u32 {
        term = (term * w).div_f64(j as f64);
        peak = peak.max(term.abs_hi());
        let contrib = term.div_f64((2 * j + 1) as f64);
        match j % 4 {
            0 => c = c + contrib,
            1 => s = s + contrib,
            2 => c = c - contrib,
            _ => s = s - contrib,
        }
        if term.abs_hi() <= 1e-34 * peak {
            break;
        }
    }
    (c.to_f64(), s.to_f64())
}

/// `sin` and `cos` of `pi x^2 / 2` with the argument reduced modulo 4 in
/// `x^2` before multiplying by `pi / 2`.
pub(crate) fn quadratic_phase_sin_cos(x: f64) -> (f64, f64) {
    let sq = Dd::product(x, x);
    let reduced = sq.hi % 4.0 + sq.lo;
    (FRAC_PI_2 * reduced).sin_cos()
}

fn asymptotic(x: f64) -> (f64, f64) {
    let px2 = PI * x * x;
    let r = 1.0 / (px2 * px2);
    // f = 1/(pi x) sum (-1)^k (4k-1)!! r^k ; g = 1/(pi^2 x^3) sum (-1)^k (4k+1)!! r^k
    let sum = |first_odd: f64| {
        let mut term = 1.0;
        let mut total = 1.0f64;
        let mut last = 1.0f64;
        for k in 1..200 {
            let kf = k as f64;
            let a = 4.0 * kf - 3.0 + first_odd;
            term *= -a * (a + 2.0) * r;
            if term.abs() >= last || term.abs() <= 1e-17 * total.abs() {
                if term.abs() < last {
                    total += term;
                }
                break;
            }
            total += term;
            last = term.abs();
        }
        total
    };
    let f = sum(0.0) / (PI * x);
    let g = sum(2.0) / (PI * PI * x * x * x);
    let (sn, cs) = quadratic_phase_sin_cos(x);
    (0.5 + f * sn - g * cs, 0.5 - f * cs - g * sn)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_and_infinity() {
        assert_eq!(fresnel(0.0).unwrap(), FresnelPair { c: 0.0, s: 0.0 });
        let far = fresnel(1e12).unwrap();
        assert!((far.c - 0.5).abs() < 1e-12 && (far.s - 0.5).abs() < 1e-12);
    }

    #[test]
    fn branches_agree_at_switch() {
        let (cs, ss) = series(SERIES_SWITCH);
        let (ca, sa) = asymptotic(SERIES_SWITCH);
        assert!((cs - ca).abs() < 1e-13, "{cs} {ca}");
        assert!((ss - sa).abs() < 1e-13, "{ss} {sa}");
    }

    #[test]
    fn reference_values() {
        // C(1), S(1) and C(10), S(10) to 16 digits.
        let p = fresnel(1.0).unwrap();
        assert!((p.c - 0.779_893_400_376_822_8).abs() < 1e-15);
        assert!((p.s - 0.438_259_147_390_354_8).abs() < 1e-15);
        let q = fresnel(10.0).unwrap();
        assert!((q.c - 0.499_898_694_205_515_7).abs() < 1e-14);
        assert!((q.s - 0.468_169_978_584_882).abs() < 1e-14);
    }

    #[test]
    fn rejects_nan() {
        assert!(fresnel(f64::NAN).is_err());
    }
}

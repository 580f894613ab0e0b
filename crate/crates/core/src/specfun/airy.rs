//! Airy function of the first kind and its derivative for real argument,
//! plus the negative zeros of Ai.
//!
//! For `|x| <= SERIES_SWITCH` the Maclaurin series is summed in
//! double-double arithmetic; the series terms grow like `exp(2|x|^{3/2}/3)`
//! before cancelling, so plain f64 summation loses up to 14 digits at the
//! switch point. Beyond the switch the standard Poincaré expansions in
//! `zeta = 2|x|^{3/2}/3` are used, truncated at their smallest term
//! (relative size ~ `exp(-2 zeta)`, about 1e-13 at the switch).

use std::f64::consts::{FRAC_PI_4, PI};
use std::sync::OnceLock;

use super::dd::Dd;
use crate::error::{ensure_finite, Error, Result};
use crate::roots;

/// Boundary between the Maclaurin and asymptotic branches.
pub const SERIES_SWITCH: f64 = 8.0;

/// Largest zero index served by [`airy_zero`].
pub const MAX_ZERO_INDEX: u32 = 100;

/// Residual bound met by every polished zero: `|Ai(a_n)| < ZERO_RESIDUAL`.
pub const ZERO_RESIDUAL: f64 = 1e-12;

// Ai(0) = 3^{-2/3} / Gamma(2/3) and -Ai'(0) = 3^{-1/3} / Gamma(1/3),
// split into double-double pairs.
const AI0: Dd = Dd::new(0.3550280538878172, 2.05233632436212e-17);
const MINUS_AIP0: Dd = Dd::new(0.2588194037928068, -2.522243111610832e-17);

/// `Ai(x)` together with `Ai'(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryPair {
    pub ai: f64,
    pub ai_prime: f64,
    /// Set when the true value is below the normal f64 range and was
    /// flushed to exactly zero.
    pub underflow: bool,
}

/// The `n`-th (negative) zero of Ai.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryZero {
    pub n: u32,
    pub a_n: f64,
}

/// Evaluates `Ai(x)` and `Ai'(x)`.
pub fn airy(x: f64) -> Result<AiryPair> {
    ensure_finite("airy argument", x)?;
    Ok(airy_unchecked(x))
}

/// [`airy`] without the finiteness check, for hot loops over known-good grids.
pub fn airy_unchecked(x: f64) -> AiryPair {
    if x.abs() <= SERIES_SWITCH {
        let (ai, ai_prime) = maclaurin(x);
        AiryPair {
            ai,
            ai_prime,
            underflow: false,
        }
    } else if x > 0.0 {
        asymptotic_positive(x)
    } else {
        let (ai, ai_prime) = asymptotic_negative(-x);
        AiryPair {
            ai,
            ai_prime,
            underflow: false,
        }
    }
}

/// `Ai(x)` alone; zero on underflow.
#[inline]
pub fn airy_ai(x: f64) -> f64 {
    airy_unchecked(x).ai
}

/// Sums the four Maclaurin series `f, f', g, g'` in double-double and
/// combines them as `Ai = Ai(0) f + Ai'(0) g`.
pub(crate) fn maclaurin(x: f64) -> (f64, f64) {
    let y = Dd::product(x, x).mul_f64(x);

    // f = sum a_k x^{3k}, g = sum b_k x^{3k+1} and their derivatives,
    // each advanced by its own ratio so that x never appears in a divisor.
    let mut tf = Dd::from_f64(1.0);
    let mut tg = Dd::from_f64(x);
    let mut tfp = Dd::product(x, x).mul_f64(0.5);
    let mut tgp = Dd::from_f64(1.0);
    let (mut f, mut g, mut fp, mut gp) = (tf, tg, tfp, tgp);

    let mut peak = 1.0f64.max(x.abs());
    for k in 1..400u32 {
        let k3 = 3.0 * k as f64;
        tf = (tf * y).div_f64((k3 - 1.0) * k3);
        tg = (tg * y).div_f64(k3 * (k3 + 1.0));
        if k >= 2 {
            tfp = (tfp * y).div_f64((k3 - 1.0) * (k3 - 3.0));
        }
        tgp = (tgp * y).div_f64(k3 * (k3 - 2.0));
        f = f + tf;
        g = g + tg;
        if k >= 2 {
            fp = fp + tfp;
        }
        gp = gp + tgp;

        let biggest = tf
            .abs_hi()
            .max(tg.abs_hi())
            .max(tfp.abs_hi())
            .max(tgp.abs_hi());
        peak = peak.max(biggest);
        if biggest <= 1e-34 * peak {
            break;
        }
    }

    let ai = AI0 * f - MINUS_AIP0 * g;
    let ai_prime = AI0 * fp - MINUS_AIP0 * gp;
    (ai.to_f64(), ai_prime.to_f64())
}

const N_COEF: usize = 60;

/// `u_k` and `v_k` of the Airy asymptotic expansions.
fn coefficients() -> &'static ([f64; N_COEF], [f64; N_COEF]) {
    static COEF: OnceLock<([f64; N_COEF], [f64; N_COEF])> = OnceLock::new();
    COEF.get_or_init(|| {
        let mut u = [0.0; N_COEF];
        let mut v = [0.0; N_COEF];
        u[0] = 1.0;
        v[0] = 1.0;
        for k in 1..N_COEF {
            let kf = k as f64;
            u[k] = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
                / ((2.0 * kf - 1.0) * 216.0 * kf);
            v[k] = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u[k];
        }
        (u, v)
    })
}

/// `sum_k (-1)^k c_{start + stride k} zeta^{-(start + stride k)}`, truncated
/// at the smallest term.
fn truncated_sum(c: &[f64], zeta: f64, start: usize, stride: usize) -> f64 {
    let inv = 1.0 / zeta;
    let mut sum = 0.0;
    let mut last = f64::INFINITY;
    let mut sign = 1.0;
    let mut k = start;
    while k < c.len() {
        let term = sign * c[k] * inv.powi(k as i32);
        if term.abs() > last {
            break;
        }
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
        last = term.abs();
        sign = -sign;
        k += stride;
    }
    sum
}

fn asymptotic_positive(x: f64) -> AiryPair {
    let (u, v) = coefficients();
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let alt = |c: &[f64]| {
        // sum (-1)^k c_k zeta^{-k}
        let mut sum = 0.0;
        let mut last = f64::INFINITY;
        let mut zk = 1.0;
        for (k, ck) in c.iter().enumerate() {
            let term = if k % 2 == 0 { ck * zk } else { -ck * zk };
            if term.abs() > last {
                break;
            }
            sum += term;
            if term.abs() <= 1e-17 * sum.abs() {
                break;
            }
            last = term.abs();
            zk /= zeta;
        }
        sum
    };
    let decay = (-zeta).exp();
    let quarter = x.sqrt().sqrt();
    let norm = 0.5 / PI.sqrt();
    let ai = norm * decay / quarter * alt(u);
    let ai_prime = -norm * decay * quarter * alt(v);
    let flush = |val: f64| if val.is_normal() { (val, false) } else { (0.0, true) };
    let (ai, u1) = flush(ai);
    let (ai_prime, u2) = flush(ai_prime);
    AiryPair {
        ai,
        ai_prime,
        underflow: u1 || u2,
    }
}

/// Returns `(Ai(-y), Ai'(-y))` for large positive `y`.
fn asymptotic_negative(y: f64) -> (f64, f64) {
    let (u, v) = coefficients();
    let zeta = 2.0 / 3.0 * y * y.sqrt();
    let p_u = truncated_sum(u, zeta, 0, 2);
    let q_u = truncated_sum(u, zeta, 1, 2);
    let p_v = truncated_sum(v, zeta, 0, 2);
    let q_v = truncated_sum(v, zeta, 1, 2);
    let (s, c) = (zeta - FRAC_PI_4).sin_cos();
    let quarter = y.sqrt().sqrt();
    let rpi = 1.0 / PI.sqrt();
    let ai = rpi / quarter * (c * p_u + s * q_u);
    let ai_prime = rpi * quarter * (s * p_v - c * q_v);
    (ai, ai_prime)
}

/// Asymptotic location of the `n`-th zero,
/// `-T(3 pi (4n - 1) / 8)` with `T(t) ~ t^{2/3} (1 + 5/48 t^-2 - ...)`.
pub fn airy_zero_estimate(n: u32) -> f64 {
    let t = 3.0 * PI * (4.0 * n as f64 - 1.0) / 8.0;
    let t2 = 1.0 / (t * t);
    let series = 1.0
        + t2 * (5.0 / 48.0
            + t2 * (-5.0 / 36.0
                + t2 * (77125.0 / 82944.0 + t2 * (-108056875.0 / 6967296.0))));
    -t.powf(2.0 / 3.0) * series
}

/// The `n`-th zero of Ai, `1 <= n <= MAX_ZERO_INDEX`.
pub fn airy_zero(n: u32) -> Result<AiryZero> {
    if !(1..=MAX_ZERO_INDEX).contains(&n) {
        return Err(Error::Range {
            what: "Airy zero index n",
            value: n as i64,
            min: 1,
            max: MAX_ZERO_INDEX as i64,
        });
    }
    let seed = airy_zero_estimate(n);
    // Local zero spacing is about pi / sqrt(|a|); a quarter spacing either
    // side of the seed brackets exactly one zero.
    let half = 0.25 * PI / seed.abs().sqrt();
    let mut lo = seed - half;
    let mut hi = seed + half;
    if airy_ai(lo).signum() == airy_ai(hi).signum() {
        lo = seed - 2.0 * half;
        hi = seed + 2.0 * half;
    }
    let mut a_n = roots::brent(airy_ai, lo, hi, 1e-16)?;

    // One Newton step; Ai'' = x Ai vanishes at the root.
    let p = airy_unchecked(a_n);
    if p.ai_prime != 0.0 {
        let next = a_n - p.ai / p.ai_prime;
        if airy_ai(next).abs() <= p.ai.abs() {
            a_n = next;
        }
    }
    let residual = airy_ai(a_n).abs();
    if residual >= ZERO_RESIDUAL {
        return Err(Error::Numerical {
            routine: "airy_zero",
            detail: format!("|Ai(a_{n})| = {residual:e} at a_{n} = {a_n}"),
        });
    }
    Ok(AiryZero { n, a_n })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_origin() {
        let p = airy(0.0).unwrap();
        assert!((p.ai - 0.355_028_053_887_817_2).abs() < 1e-16);
        assert!((p.ai_prime + 0.258_819_403_792_806_8).abs() < 1e-16);
    }

    #[test]
    fn branches_agree_at_switch() {
        for &x in &[SERIES_SWITCH, -SERIES_SWITCH] {
            let (s_ai, s_aip) = maclaurin(x);
            let (a_ai, a_aip) = if x > 0.0 {
                let p = asymptotic_positive(x);
                (p.ai, p.ai_prime)
            } else {
                asymptotic_negative(-x)
            };
            assert!((s_ai - a_ai).abs() <= 1e-12 * s_ai.abs().max(1e-3 * (x.abs()).powf(-0.25)),
                "Ai at {x}: {s_ai} vs {a_ai}");
            assert!((s_aip - a_aip).abs() <= 1e-12 * s_aip.abs().max(1e-3),
                "Ai' at {x}: {s_aip} vs {a_aip}");
        }
    }

    #[test]
    fn non_finite_is_domain_error() {
        assert!(matches!(airy(f64::NAN), Err(Error::Domain(_))));
        assert!(matches!(airy(f64::INFINITY), Err(Error::Domain(_))));
    }

    #[test]
    fn underflow_is_flagged() {
        let p = airy(120.0).unwrap();
        assert!(p.underflow);
        assert_eq!(p.ai, 0.0);
        let q = airy(50.0).unwrap();
        assert!(!q.underflow && q.ai > 0.0);
    }

    #[test]
    fn zero_index_range() {
        assert!(matches!(airy_zero(0), Err(Error::Range { .. })));
        assert!(matches!(airy_zero(101), Err(Error::Range { .. })));
        assert!(airy_zero(100).is_ok());
    }

    #[test]
    fn zero_seed_is_close() {
        assert!((airy_zero_estimate(1) + 2.338107410459767).abs() < 1e-3);
    }
}

//! Bracketing root finders.
//!
//! [`brent`] is the classic Brent-Dekker scheme (inverse quadratic
//! interpolation safeguarded by bisection). [`first_sign_changes`] walks a
//! grid to produce brackets for it.

use crate::error::{Error, Result};

/// Default iteration budget for [`brent`].
pub const MAX_ITER: usize = 200;

/// Finds a root of `f` in `[a, b]`, which must bracket a sign change.
///
/// Stops when the bracket is narrower than `xtol` (plus a few ulps of the
/// iterate) or `f` evaluates to exactly zero.
pub fn brent<F>(mut f: F, a: f64, b: f64, xtol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(Error::Numerical {
            routine: "brent",
            detail: format!("[{a}, {b}] does not bracket a root: f(a) = {fa}, f(b) = {fb}"),
        });
    }

    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;

    for _ in 0..MAX_ITER {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }

        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }

        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let q0 = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * q0 * (q0 - r) - (b - a) * (r - 1.0));
                q = (q0 - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }

        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
        if !fb.is_finite() {
            return Err(Error::Numerical {
                routine: "brent",
                detail: format!("non-finite function value at x = {b}"),
            });
        }
    }

    Err(Error::Numerical {
        routine: "brent",
        detail: format!("no convergence after {MAX_ITER} iterations; last iterate {b}"),
    })
}

/// Scans `x0, x0 + step, ...` up to `x_end` and returns the first `count`
/// sub-intervals on which `f` changes sign.
pub fn first_sign_changes<F>(
    mut f: F,
    x0: f64,
    step: f64,
    x_end: f64,
    count: usize,
) -> Result<Vec<(f64, f64)>>
where
    F: FnMut(f64) -> f64,
{
    if !(step > 0.0) || !(x_end > x0) {
        return Err(Error::Numerical {
            routine: "first_sign_changes",
            detail: format!("bad scan: x0 = {x0}, step = {step}, x_end = {x_end}"),
        });
    }
    let mut out = Vec::with_capacity(count);
    let mut xa = x0;
    let mut fa = f(xa);
    let mut k = 1u64;
    while out.len() < count {
        let xb = (x0 + k as f64 * step).min(x_end);
        let fb = f(xb);
        if fa.signum() != fb.signum() || fb == 0.0 {
            out.push((xa, xb));
        }
        if xb >= x_end {
            break;
        }
        xa = xb;
        fa = fb;
        k += 1;
    }
    if out.len() < count {
        return Err(Error::Numerical {
            routine: "first_sign_changes",
            detail: format!(
                "found {} of {count} sign changes on [{x0}, {x_end}] with step {step}",
                out.len()
            ),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brent_finds_sqrt2() {
        let r = brent(|x| x * x - 2.0, 0.0, 2.0, 1e-15).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn brent_handles_flat_then_steep() {
        let r = brent(|x: f64| x.powi(9) - 1e-9, -1.0, 2.0, 1e-14).unwrap();
        assert!((r - 0.1).abs() < 1e-12);
    }

    #[test]
    fn brent_rejects_non_bracket() {
        assert!(matches!(
            brent(|x| x * x + 1.0, -1.0, 1.0, 1e-12),
            Err(Error::Numerical { .. })
        ));
    }

    #[test]
    fn scan_finds_sine_zeros_in_order() {
        let br = first_sign_changes(f64::sin, 0.5, 0.1, 20.0, 3).unwrap();
        let roots: Vec<f64> = br
            .iter()
            .map(|&(a, b)| brent(f64::sin, a, b, 1e-14).unwrap())
            .collect();
        for (k, r) in roots.iter().enumerate() {
            assert!((r - (k + 1) as f64 * std::f64::consts::PI).abs() < 1e-12);
        }
    }

    #[test]
    fn scan_reports_shortfall() {
        assert!(first_sign_changes(f64::sin, 0.5, 0.1, 4.0, 2).is_err());
    }
}

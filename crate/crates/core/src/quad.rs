//! Gauss-Kronrod (7, 15) panel rule and a globally adaptive integrator.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Kronrod abscissae on [-1, 1], descending; the last entry is the centre.
pub const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
/// Kronrod weights matching [`XGK`].
pub const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
/// Gauss weights for the odd-indexed Kronrod nodes and the centre.
pub const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Values a panel rule can accumulate.
pub trait QuadValue: Copy + Add<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

/// Abscissae of the 15-point rule mapped onto `[a, b]`, in the order used by
/// [`gk15_from_values`].
pub fn gk15_nodes(a: f64, b: f64) -> [f64; 15] {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut x = [0.0; 15];
    for j in 0..7 {
        x[2 * j] = c - h * XGK[j];
        x[2 * j + 1] = c + h * XGK[j];
    }
    x[14] = c;
    x
}

/// Combines integrand values at [`gk15_nodes`] into `(kronrod, |kronrod - gauss|)`.
#[inline]
pub fn gk15_from_values<T: QuadValue>(f: &[T; 15], half_width: f64) -> (T, f64) {
    let mut k = f[14] * WGK[7];
    let mut g = f[14] * WG[3];
    for j in 0..7 {
        let pair = f[2 * j] + f[2 * j + 1];
        k = k + pair * WGK[j];
        if j % 2 == 1 {
            g = g + pair * WG[j / 2];
        }
    }
    let k = k * half_width;
    let g = g * half_width;
    let err = (k + g * -1.0).magnitude();
    (k, err)
}

/// One Gauss-Kronrod panel.
pub fn gk15<T: QuadValue, F: FnMut(f64) -> T>(mut f: F, a: f64, b: f64) -> (T, f64) {
    let nodes = gk15_nodes(a, b);
    let mut vals = [T::zero(); 15];
    for (v, x) in vals.iter_mut().zip(nodes.iter()) {
        *v = f(*x);
    }
    gk15_from_values(&vals, 0.5 * (b - a))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<T> {
    pub value: T,
    pub error: f64,
    pub panels: usize,
}

struct Panel<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

impl<T> PartialEq for Panel<T> {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl<T> Eq for Panel<T> {}
impl<T> PartialOrd for Panel<T> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl<T> Ord for Panel<T> {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error.total_cmp(&o.error)
    }
}

/// Globally adaptive integration: repeatedly bisects the panel with the
/// largest error estimate until the total estimate is below
/// `max(abs_tol, rel_tol * |I|)`.
pub fn integrate<T, F>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
) -> Result<QuadResult<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    let (value, error) = gk15(&mut f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a, b, value, error });
    let mut total = value;
    let mut total_err = error;
    loop {
        let target = abs_tol.max(rel_tol * total.magnitude());
        if total_err <= target {
            return Ok(QuadResult {
                value: total,
                error: total_err,
                panels: heap.len(),
            });
        }
        if heap.len() >= max_panels {
            return Err(Error::Numerical {
                routine: "quad::integrate",
                detail: format!(
                    "panel budget {max_panels} exhausted on [{a}, {b}]; error estimate {total_err:e} > target {target:e}"
                ),
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let m = 0.5 * (worst.a + worst.b);
        if !(m > worst.a && m < worst.b) {
            return Err(Error::Numerical {
                routine: "quad::integrate",
                detail: format!("panel [{}, {}] cannot be bisected further", worst.a, worst.b),
            });
        }
        let (lv, le) = gk15(&mut f, worst.a, m);
        let (rv, re) = gk15(&mut f, m, worst.b);
        total = total + worst.value * -1.0 + lv + rv;
        total_err += le + re - worst.error;
        heap.push(Panel { a: worst.a, b: m, value: lv, error: le });
        heap.push(Panel { a: m, b: worst.b, value: rv, error: re });
        if total_err < 0.0 {
            total_err = heap.iter().map(|p| p.error).sum();
        }
    }
}

/// Real-valued convenience wrapper around [`integrate`].
pub fn integrate_real<F: FnMut(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<QuadResult<f64>> {
    integrate(f, a, b, abs_tol, rel_tol, 10_000)
}

/// Composite trapezoid rule over equally spaced samples.
pub fn trapezoid(values: &[f64], step: f64) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        n => step * (0.5 * (values[0] + values[n - 1]) + values[1..n - 1].iter().sum::<f64>()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_panel_is_exact_for_high_degree_polynomials() {
        let (v, e) = gk15(|x: f64| x.powi(20), 0.0, 1.0);
        assert!((v - 1.0 / 21.0).abs() < 1e-15);
        assert!(e < 1e-3);
    }

    #[test]
    fn adaptive_handles_endpoint_singularity() {
        let r = integrate_real(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, 0.0, 1e-10).unwrap();
        assert!((r.value - 2.0).abs() < 1e-9);
    }

    #[test]
    fn complex_oscillatory() {
        let r = integrate(
            |x: f64| Complex64::new(0.0, 50.0 * x).exp(),
            0.0,
            1.0,
            0.0,
            1e-12,
            1000,
        )
        .unwrap();
        let exact = (Complex64::new(0.0, 50.0).exp() - 1.0) / Complex64::new(0.0, 50.0);
        assert!((r.value - exact).norm() < 1e-12);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let r = integrate_real(|x: f64| (1.0 / x).sin(), 1e-8, 1.0, 0.0, 1e-14);
        assert!(matches!(r, Err(Error::Numerical { .. })));
    }

    #[test]
    fn trapezoid_linear_exact() {
        let v: Vec<f64> = (0..11).map(|i| i as f64 * 0.1).collect();
        assert!((trapezoid(&v, 0.1) - 0.5).abs() < 1e-15);
    }
}

//! Free fall of a released gravitational bound state.
//!
//! Propagating `psi_n` with the uniform-gravity kernel gives, up to a global
//! phase,
//!
//! ```text
//! psi(z, t) = sqrt(beta / (pi l_g)) / Ai'(a_n)
//!             * int_{a_n}^{chi_max} Ai(chi) exp(i beta (chi - chi0)^2) dchi
//! ```
//!
//! with `beta = m l_g^2 / (2 hbar t)` and `chi0 = (z - h_n + g t^2 / 2) / l_g`.
//! [`Evolver`] evaluates the integral on uniform panels sized so that the
//! quadratic phase moves by at most `phase_per_panel` across any panel. Panel
//! counts are powers of two and the Airy values on each level are cached, so
//! a profile over many `(z, t)` reuses the same node values.
//!
//! [`evolve_sd`] is the stationary-phase form: the Airy factor frozen at
//! `chi0` and the remaining Gaussian integral written with Fresnel integrals.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, ensure_finite, Error, Result};
use crate::quad::{self, gk15_from_values, gk15_nodes};
use crate::scenario_b::{eigenfunction, mean_position, GravEigenstate};
use crate::specfun::{airy_unchecked, fresnel_unchecked};

/// Wave-function value, m^{-1/2}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexAmplitude {
    pub re: f64,
    pub im: f64,
}

impl ComplexAmplitude {
    /// `|psi|^2`, 1/m.
    pub fn density(&self) -> f64 {
        self.re * self.re + self.im * self.im
    }
}

impl From<Complex64> for ComplexAmplitude {
    fn from(c: Complex64) -> Self {
        ComplexAmplitude { re: c.re, im: c.im }
    }
}

/// Controls for the oscillatory integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Upper truncation of the `chi` integral.
    pub chi_max: f64,
    /// Largest phase change allowed across one panel, rad.
    pub phase_per_panel: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            chi_max: 16.0,
            phase_per_panel: PI / 2.0,
            rel_tol: 1e-6,
            max_panels: 200_000,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if !(self.chi_max >= 10.0 && self.chi_max.is_finite()) {
            return bad(format!("chi_max must be >= 10, got {}", self.chi_max));
        }
        if !(self.phase_per_panel > 0.0 && self.phase_per_panel <= PI) {
            return bad(format!("phase_per_panel must lie in (0, pi], got {}", self.phase_per_panel));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-2) {
            return bad(format!("rel_tol must lie in (0, 1e-2], got {}", self.rel_tol));
        }
        if self.max_panels < 100 {
            return bad(format!("max_panels must be >= 100, got {}", self.max_panels));
        }
        Ok(())
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }
}

/// Stationary point of the quadratic phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StationaryPoint {
    pub chi0: f64,
}

pub fn chi0(state: &GravEigenstate, z: f64, t: f64) -> StationaryPoint {
    StationaryPoint {
        chi0: (z - state.h_n + 0.5 * state.g * t * t) / state.l_g,
    }
}

/// `beta = m l_g^2 / (2 hbar t)`: the phase is `beta (chi - chi0)^2`.
pub fn evolution_parameter(state: &GravEigenstate, t: f64) -> f64 {
    state.mass * state.l_g * state.l_g / (2.0 * state.hbar * t)
}

fn check_time(t: f64) -> Result<()> {
    ensure_finite("time", t)?;
    if t > 0.0 {
        Ok(())
    } else {
        Err(domain(format!("time must be positive, got t = {t}")))
    }
}

const ROUNDING_FLOOR: f64 = 64.0 * f64::EPSILON;

/// Exact propagation of one eigenstate with cached Airy node values.
pub struct Evolver {
    state: GravEigenstate,
    cfg: QuadratureConfig,
    levels: Mutex<HashMap<usize, Arc<[f64]>>>,
    /// `int |Ai|` over the integration range; sets the absolute error floor.
    ai_mass: f64,
}

/// Outcome of one oscillatory integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveReport {
    pub amplitude: ComplexAmplitude,
    pub error_estimate: f64,
    pub panels: usize,
}

impl Evolver {
    pub fn new(state: GravEigenstate, cfg: QuadratureConfig) -> Result<Self> {
        cfg.validate()?;
        let ai_mass = quad::integrate_real(
            |x| airy_unchecked(x).ai.abs(),
            state.a_n,
            cfg.chi_max,
            0.0,
            1e-10,
        )?
        .value;
        Ok(Evolver {
            state,
            cfg,
            levels: Mutex::new(HashMap::new()),
            ai_mass,
        })
    }

    pub fn state(&self) -> &GravEigenstate {
        &self.state
    }

    pub fn config(&self) -> &QuadratureConfig {
        &self.cfg
    }

    fn node_values(&self, panels: usize) -> Arc<[f64]> {
        if let Some(v) = self.levels.lock().expect("cache lock").get(&panels) {
            return Arc::clone(v);
        }
        let a = self.state.a_n;
        let h = (self.cfg.chi_max - a) / panels as f64;
        let mut vals = Vec::with_capacity(15 * panels);
        for p in 0..panels {
            let lo = a + p as f64 * h;
            for x in gk15_nodes(lo, lo + h) {
                vals.push(airy_unchecked(x).ai);
            }
        }
        let vals: Arc<[f64]> = vals.into();
        self.levels
            .lock()
            .expect("cache lock")
            .insert(panels, Arc::clone(&vals));
        vals
    }

    /// `int Ai(chi) exp(i beta (chi - c0)^2) dchi` on `panels` uniform panels.
    /// The phase is split as `beta chi (chi - 2 c0) + beta c0^2`.
    fn integrate_level(&self, beta: f64, c0: f64, panels: usize) -> (Complex64, f64) {
        let ai = self.node_values(panels);
        let a = self.state.a_n;
        let h = (self.cfg.chi_max - a) / panels as f64;
        let mut total = Complex64::new(0.0, 0.0);
        let mut err = 0.0;
        let mut f = [Complex64::new(0.0, 0.0); 15];
        for p in 0..panels {
            let lo = a + p as f64 * h;
            let nodes = gk15_nodes(lo, lo + h);
            let vals = &ai[15 * p..15 * p + 15];
            for j in 0..15 {
                let x = nodes[j];
                let (s, c) = (beta * x * (x - 2.0 * c0)).sin_cos();
                f[j] = Complex64::new(vals[j] * c, vals[j] * s);
            }
            let (v, e) = gk15_from_values(&f, 0.5 * h);
            total += v;
            err += e;
        }
        // The constant part of the phase is applied once: inside the loop it
        // can reach 1e5 rad and its rounding would swamp the integrand.
        let (s, c) = (beta * c0 * c0).sin_cos();
        (total * Complex64::new(c, s), err)
    }

    /// Evaluates the evolved amplitude together with diagnostics.
    pub fn evolve_report(&self, z: f64, t: f64) -> Result<EvolveReport> {
        check_time(t)?;
        ensure_finite("z", z)?;
        let s = &self.state;
        let beta = evolution_parameter(s, t);
        let c0 = chi0(s, z, t).chi0;
        let span = self.cfg.chi_max - s.a_n;
        let slope = 2.0 * beta * (s.a_n - c0).abs().max((self.cfg.chi_max - c0).abs());
        let needed = (slope * span / self.cfg.phase_per_panel).ceil();
        if !(needed <= self.cfg.max_panels as f64) {
            return Err(Error::Numerical {
                routine: "evolve_exact",
                detail: format!(
                    "phase budget needs {needed:e} panels (max {}); beta = {beta:e}, chi0 = {c0:e}",
                    self.cfg.max_panels
                ),
            });
        }
        let mut panels = (needed as usize).max(16).next_power_of_two();
        let floor = 1e-6 * self.ai_mass;
        // Rounding of the phase argument bounds what any tolerance can reach.
        let max_phase = beta
            * [s.a_n, self.cfg.chi_max, c0.clamp(s.a_n, self.cfg.chi_max)]
                .iter()
                .map(|x| (x * (x - 2.0 * c0)).abs())
                .fold(0.0, f64::max);
        let rounding = ROUNDING_FLOOR * (1.0 + max_phase) * self.ai_mass;
        loop {
            if panels > self.cfg.max_panels {
                // The power-of-two ladder overshot; the final rung is the budget itself.
                panels = self.cfg.max_panels;
            }
            let (integral, err) = self.integrate_level(beta, c0, panels);
            let target = (self.cfg.rel_tol * integral.norm().max(floor)).max(rounding);
            let scale = (beta / (PI * s.l_g)).sqrt() / s.ai_prime_at_zero;
            if err <= target {
                return Ok(EvolveReport {
                    amplitude: (integral * scale).into(),
                    error_estimate: err * scale.abs(),
                    panels,
                });
            }
            if panels >= self.cfg.max_panels {
                return Err(Error::Numerical {
                    routine: "evolve_exact",
                    detail: format!(
                        "panel budget {} exhausted at z = {z}, t = {t}: error estimate {:e} vs target {:e} (relative {:e})",
                        self.cfg.max_panels,
                        err,
                        target,
                        err / integral.norm().max(floor)
                    ),
                });
            }
            panels *= 2;
        }
    }

    pub fn amplitude(&self, z: f64, t: f64) -> Result<ComplexAmplitude> {
        Ok(self.evolve_report(z, t)?.amplitude)
    }

    pub fn density(&self, z: f64, t: f64) -> Result<f64> {
        Ok(self.amplitude(z, t)?.density())
    }

    /// Exact densities at the given positions, time `t`.
    pub fn spatial_profile(&self, t: f64, zs: &[f64]) -> Result<Vec<f64>> {
        zs.par_iter().map(|&z| self.density(z, t)).collect()
    }

    /// Exact densities at detector `z` for the given times.
    pub fn detector_profile(&self, z: f64, ts: &[f64]) -> Result<Vec<f64>> {
        ts.par_iter().map(|&t| self.density(z, t)).collect()
    }
}

/// One-shot exact evaluation.
pub fn evolve_exact(
    state: &GravEigenstate,
    z: f64,
    t: f64,
    cfg: &QuadratureConfig,
) -> Result<ComplexAmplitude> {
    Evolver::new(*state, *cfg)?.amplitude(z, t)
}

/// Stationary-phase approximation in Fresnel form.
pub fn evolve_sd(state: &GravEigenstate, z: f64, t: f64) -> Result<ComplexAmplitude> {
    check_time(t)?;
    ensure_finite("z", z)?;
    let c0 = chi0(state, z, t).chi0;
    let xi = (state.mass / (PI * state.hbar * t)).sqrt() * (z + 0.5 * state.g * t * t);
    let fr = fresnel_unchecked(xi);
    let amp = airy_unchecked(c0).ai / ((2.0 * state.l_g).sqrt() * state.ai_prime_at_zero);
    Ok(ComplexAmplitude {
        re: amp * (0.5 + fr.c),
        im: amp * (0.5 + fr.s),
    })
}

/// Evaluation grid for whole-profile integrals at time `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileWindow {
    pub z_lo: f64,
    pub z_hi: f64,
    pub points: usize,
}

/// Points used for profile integrals.
pub const PROFILE_POINTS: usize = 4096;

/// Window holding the released packet at time `t`: centred on the
/// co-falling mean position, half-width `20 h_n` plus twelve spreading
/// lengths `l_g / beta`. Beyond it the momentum tail of the packet carries
/// less than 1e-5 of the probability.
pub fn profile_window(state: &GravEigenstate, t: f64) -> ProfileWindow {
    let beta = evolution_parameter(state, t);
    let centre = mean_position(state) - 0.5 * state.g * t * t;
    let half = 20.0 * state.h_n + 12.0 * state.l_g / beta;
    ProfileWindow {
        z_lo: centre - half,
        z_hi: centre + half,
        points: PROFILE_POINTS,
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| lo + i as f64 * step).collect()
}

/// Total probability of the evolved state at time `t` (trapezoid over
/// [`profile_window`]).
pub fn total_probability(ev: &Evolver, t: f64) -> Result<f64> {
    let w = profile_window(ev.state(), t);
    let zs = linspace(w.z_lo, w.z_hi, w.points);
    let rho = ev.spatial_profile(t, &zs)?;
    Ok(quad::trapezoid(&rho, zs[1] - zs[0]))
}

/// Probability within `|z + g t^2 / 2| <= 3 l_g |a_n|` at time `t`.
///
/// The evolution is unitary, so the captured probability is the fraction.
/// At `t = 0` the initial density is used directly.
pub fn classical_limit_check(ev: &Evolver, t: f64) -> Result<f64> {
    ensure_finite("time", t)?;
    if t < 0.0 {
        return Err(domain(format!("time must be non-negative, got t = {t}")));
    }
    let s = ev.state();
    let centre = -0.5 * s.g * t * t;
    let half = 3.0 * s.l_g * s.a_n.abs();
    let zs = linspace(centre - half, centre + half, PROFILE_POINTS);
    let rho = if t == 0.0 {
        zs.iter().map(|&z| eigenfunction(s, z).powi(2)).collect()
    } else {
        ev.spatial_profile(t, &zs)?
    };
    Ok(quad::trapezoid(&rho, zs[1] - zs[0]))
}

/// Relative L2 distance between the exact density at time `t` and the
/// initial density carried rigidly along the free-fall trajectory,
/// `|psi_n(z + g t^2 / 2)|^2`.
///
/// Integrated on the union of a grid fitted to the compact initial profile
/// and the wide [`profile_window`] grid, so both the initial support and the
/// spread packet are resolved.
pub fn strong_ep_deviation(ev: &Evolver, t: f64) -> Result<f64> {
    strong_ep_deviation_with(ev, t, PROFILE_POINTS)
}

/// [`strong_ep_deviation`] with `points` samples per grid.
pub fn strong_ep_deviation_with(ev: &Evolver, t: f64, points: usize) -> Result<f64> {
    check_time(t)?;
    if points < 16 {
        return Err(domain(format!("need at least 16 grid points, got {points}")));
    }
    let s = ev.state();
    let fall = 0.5 * s.g * t * t;
    let support = (ev.config().chi_max - s.a_n) * s.l_g;
    let w = profile_window(s, t);
    let mut zs = linspace(-fall, support - fall, points);
    zs.extend(linspace(w.z_lo, w.z_hi, points));
    zs.sort_by(f64::total_cmp);
    zs.dedup();

    let rho = ev.spatial_profile(t, &zs)?;
    let rho0: Vec<f64> = zs.iter().map(|&z| eigenfunction(s, z + fall).powi(2)).collect();
    let diff: Vec<f64> = rho.iter().zip(&rho0).map(|(a, b)| (a - b) * (a - b)).collect();
    let base: Vec<f64> = rho0.iter().map(|r| r * r).collect();
    Ok((trapezoid_nonuniform(&zs, &diff) / trapezoid_nonuniform(&zs, &base)).sqrt())
}

fn trapezoid_nonuniform(xs: &[f64], ys: &[f64]) -> f64 {
    xs.windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
        .sum()
}

/// Detector time window covering the arrival transient: `chi0` runs over
/// `a_n -+ (20 |a_n| + 12 / beta)` with `beta` taken at the classical time.
pub fn detector_window(state: &GravEigenstate, z: f64) -> Result<(f64, f64)> {
    if !(z < 0.0) {
        return Err(domain(format!("detector must sit below the mirror, got z = {z}")));
    }
    let t_class = (-2.0 * z / state.g).sqrt();
    let beta = evolution_parameter(state, t_class);
    let half = (20.0 * state.a_n.abs() + 12.0 / beta) * state.l_g;
    // chi0 = a_n  <=>  z + g t^2 / 2 = 0.
    let time_at = |offset: f64| (2.0 * (offset - z) / state.g).max(0.0).sqrt();
    let lo = time_at(-half).max(1e-3 * t_class);
    Ok((lo, time_at(half)))
}

/// Time of the largest exact density at detector `z` within `[t_lo, t_hi]`:
/// a coarse scan followed by golden-section refinement.
pub fn peak_time<F>(density: F, t_lo: f64, t_hi: f64, samples: usize) -> Result<f64>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let ts = linspace(t_lo, t_hi, samples.max(3));
    let vals: Vec<f64> = ts.par_iter().map(|&t| density(t)).collect::<Result<_>>()?;
    let best = vals
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("non-empty scan");
    let mut a = ts[best.saturating_sub(1)];
    let mut b = ts[(best + 1).min(ts.len() - 1)];
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = density(c)?;
    let mut fd = density(d)?;
    for _ in 0..200 {
        if (b - a).abs() <= 1e-14 * b.abs() {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = density(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = density(d)?;
        }
    }
    Ok(0.5 * (a + b))
}

/// Relative L2 difference between the stationary-phase and exact detector
/// densities over [`detector_window`], measured in time.
///
/// The exact density is smooth on the window grid and is interpolated
/// linearly onto a denser grid on which the oscillating stationary-phase
/// density is sampled directly.
pub fn sd_relative_l2(ev: &Evolver, z: f64) -> Result<f64> {
    let s = ev.state();
    let (t_lo, t_hi) = detector_window(s, z)?;
    let ts = linspace(t_lo, t_hi, PROFILE_POINTS);
    let exact = ev.detector_profile(z, &ts)?;

    // The stationary-phase profile oscillates with Ai(chi0)^2; resolve its
    // shortest period over the window with ~20 samples.
    let c_lo = chi0(s, z, t_lo).chi0.min(s.a_n);
    let period = 2.0 * PI / c_lo.abs().max(1.0).sqrt();
    let span = chi0(s, z, t_hi).chi0 - c_lo;
    let fine_n = ((20.0 * span / period).ceil() as usize).clamp(PROFILE_POINTS, 4_000_000);
    let fine = linspace(t_lo, t_hi, fine_n);
    let dt = ts[1] - ts[0];
    let mut diff2 = Vec::with_capacity(fine_n);
    let mut exact2 = Vec::with_capacity(fine_n);
    for &t in &fine {
        let u = ((t - t_lo) / dt).clamp(0.0, (ts.len() - 1) as f64);
        let i = (u.floor() as usize).min(ts.len() - 2);
        let w = u - i as f64;
        let ex = exact[i] * (1.0 - w) + exact[i + 1] * w;
        let sd = evolve_sd(s, z, t)?.density();
        diff2.push((sd - ex) * (sd - ex));
        exact2.push(ex * ex);
    }
    let h = fine[1] - fine[0];
    Ok((quad::trapezoid(&diff2, h) / quad::trapezoid(&exact2, h)).sqrt())
}

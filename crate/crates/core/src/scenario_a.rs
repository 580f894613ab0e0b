//! Gravitational shutter: a monochromatic beam moving downward with speed
//! `v` is held at `z > 0` by a shutter that opens at `t = 0`.
//!
//! With unit incident density the density at height `z` is
//! `rho = ((1/2 + C(xi))^2 + (1/2 + S(xi))^2) / 2`, where
//! `xi = sqrt(m / (pi hbar t)) (z + v t + g t^2 / 2)`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::constants::{Catalog, ParticleSpec, PhysicalConstants};
use crate::error::{domain, ensure_finite, Error, Result};
use crate::quad;
use crate::roots;
use crate::specfun::dd::Dd;
use crate::specfun::fresnel_unchecked;

/// Spacing in `xi` between the first two unit-density crossings, as read off
/// the Cornu spiral.
pub const DELTA_XI: f64 = 0.85;

/// Default lower bound on `p |z| / hbar` for the asymptotic width formula.
pub const DEFAULT_MIN_ACTION: f64 = 1e3;

/// Half-width of the local time average in units of the diffraction width.
pub const LOCAL_AVERAGE_WIDTHS: f64 = 10.0;

/// Beam parameters. All fields strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShutterBeam {
    pub mass: f64,
    pub speed: f64,
    pub g: f64,
    pub hbar: f64,
}

impl ShutterBeam {
    pub fn new(mass: f64, speed: f64, consts: &PhysicalConstants) -> Result<Self> {
        let beam = ShutterBeam {
            mass,
            speed,
            g: consts.g,
            hbar: consts.hbar,
        };
        for (name, v) in [("mass", mass), ("speed", speed), ("g", consts.g), ("hbar", consts.hbar)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(domain(format!("beam {name} must be positive, got {v}")));
            }
        }
        Ok(beam)
    }

    /// Uses the particle's catalog speed unless `speed` is given.
    pub fn for_particle(
        particle: &ParticleSpec,
        speed: Option<f64>,
        consts: &PhysicalConstants,
    ) -> Result<Self> {
        let v = speed.or(particle.default_speed).ok_or_else(|| {
            Error::Config(format!("particle '{}' has no beam speed", particle.name))
        })?;
        ShutterBeam::new(particle.mass, v, consts)
    }

    /// `k = m v / hbar`, 1/m.
    pub fn wavenumber(&self) -> f64 {
        self.mass * self.speed / self.hbar
    }
}

/// A detector position below the shutter.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct DetectorPoint(f64);

impl DetectorPoint {
    pub fn new(z: f64) -> Result<Self> {
        if z.is_finite() && z < 0.0 {
            Ok(DetectorPoint(z))
        } else {
            Err(domain(format!("detector must sit below the shutter (z < 0), got z = {z}")))
        }
    }

    pub fn z(self) -> f64 {
        self.0
    }

    pub fn depth(self) -> f64 {
        -self.0
    }
}

/// Width of the diffraction-in-time transient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiffractionWidth {
    /// Asymptotic width, s.
    pub delta_t: f64,
    /// First unit-density crossing after the classical arrival, if computed.
    pub t1: Option<f64>,
    /// Second crossing, if computed.
    pub t2: Option<f64>,
}

fn check_time(t: f64) -> Result<()> {
    ensure_finite("time", t)?;
    if t > 0.0 {
        Ok(())
    } else {
        Err(domain(format!("time must be positive, got t = {t}")))
    }
}

/// Fresnel argument at `(z, t)`.
pub fn xi(beam: &ShutterBeam, z: f64, t: f64) -> Result<f64> {
    check_time(t)?;
    ensure_finite("z", z)?;
    Ok(xi_with(beam.mass, beam.hbar, offset(beam, z, t), t))
}

/// `z + v t + g t^2 / 2` in double-double: near the arrival the three terms
/// cancel, and at large `xi` the density is sensitive to the last bits.
fn offset(beam: &ShutterBeam, z: f64, t: f64) -> f64 {
    (fall_offset(beam.g, z, t) + Dd::product(beam.speed, t)).to_f64()
}

fn fall_offset(g: f64, z: f64, t: f64) -> Dd {
    Dd::from_f64(z) + Dd::product(0.5 * g, t).mul_f64(t)
}

fn xi_with(mass: f64, hbar: f64, offset: f64, t: f64) -> f64 {
    (mass / (PI * hbar * t)).sqrt() * offset
}

/// Shutter density as a function of the Fresnel argument alone.
pub fn density_of_xi(xi: f64) -> f64 {
    let p = fresnel_unchecked(xi);
    let a = 0.5 + p.c;
    let b = 0.5 + p.s;
    0.5 * (a * a + b * b)
}

/// Quantum density at `(z, t)` relative to the incident density.
pub fn density_a(beam: &ShutterBeam, z: f64, t: f64) -> Result<f64> {
    Ok(density_of_xi(xi(beam, z, t)?))
}

/// Classical arrival time at depth `z`; does not depend on the mass.
pub fn classical_tof(beam: &ShutterBeam, z: f64) -> Result<f64> {
    let d = DetectorPoint::new(z)?.depth();
    // -(v/g) + sqrt((v/g)^2 + 2|z|/g), rationalised against cancellation
    // when v^2 >> g |z|.
    let v = beam.speed;
    Ok(2.0 * d / (v + (v * v + 2.0 * beam.g * d).sqrt()))
}

/// Classical density: zero before the arrival time, one from it on.
pub fn classical_density_a(beam: &ShutterBeam, z: f64, t: f64) -> Result<f64> {
    let arrival = classical_tof(beam, z)?;
    if !(t >= 0.0) {
        return Err(domain(format!("time must be non-negative, got t = {t}")));
    }
    Ok(if t >= arrival { 1.0 } else { 0.0 })
}

/// Asymptotic diffraction width with the default validity guard.
pub fn diffraction_width(beam: &ShutterBeam, z: f64) -> Result<DiffractionWidth> {
    diffraction_width_with_guard(beam, z, DEFAULT_MIN_ACTION)
}

/// Asymptotic diffraction width, refusing beams with `p |z| / hbar <= min_action`.
pub fn diffraction_width_with_guard(
    beam: &ShutterBeam,
    z: f64,
    min_action: f64,
) -> Result<DiffractionWidth> {
    let d = DetectorPoint::new(z)?.depth();
    let action = beam.wavenumber() * d;
    if !(action > min_action) {
        return Err(Error::Precondition(format!(
            "p|z|/hbar = {action:.6e} must exceed {min_action:e} for the asymptotic width"
        )));
    }
    Ok(DiffractionWidth {
        delta_t: width_formula(beam, d),
        t1: None,
        t2: None,
    })
}

/// `delta_xi * sqrt(pi v T / (k (2|z| - v T)^2)) * T`.
fn width_formula(beam: &ShutterBeam, depth: f64) -> f64 {
    let v = beam.speed;
    let tof = 2.0 * depth / (v + (v * v + 2.0 * beam.g * depth).sqrt());
    let lever = 2.0 * depth - v * tof;
    DELTA_XI * (PI * v * tof / (beam.wavenumber() * lever * lever)).sqrt() * tof
}

/// Width with the two crossing times filled in.
pub fn diffraction_width_with_crossings(beam: &ShutterBeam, z: f64) -> Result<DiffractionWidth> {
    let mut w = diffraction_width(beam, z)?;
    let (t1, t2) = empirical_crossings(beam, z)?;
    w.t1 = Some(t1);
    w.t2 = Some(t2);
    Ok(w)
}

/// Step in `xi` used to scan for unit-density crossings; well below the
/// local Cornu oscillation period for the first few fringes.
const XI_SCAN_STEP: f64 = 0.05;

/// Values of `xi` where the shutter density first returns to one.
pub fn unit_density_xis(count: usize) -> Result<Vec<f64>> {
    let f = |x: f64| density_of_xi(x) - 1.0;
    let brackets = roots::first_sign_changes(f, 0.0, XI_SCAN_STEP, 50.0, count)?;
    brackets
        .into_iter()
        .map(|(a, b)| roots::brent(f, a, b, 1e-15))
        .collect()
}

/// The first two times after the classical arrival at which the quantum
/// density equals the classical value one.
pub fn empirical_crossings(beam: &ShutterBeam, z: f64) -> Result<(f64, f64)> {
    let arrival = classical_tof(beam, z)?;
    let targets = unit_density_xis(2)?;
    let mut times = Vec::with_capacity(2);
    for target in targets {
        // xi(t) is strictly increasing, zero at the arrival time; grow the
        // upper end until it passes the target.
        let g = |t: f64| xi_with(beam.mass, beam.hbar, offset(beam, z, t), t) - target;
        let mut step = arrival * 1e-6;
        let mut hi = arrival + step;
        let mut tries = 0;
        while g(hi) < 0.0 {
            step *= 2.0;
            hi = arrival + step;
            tries += 1;
            if tries > 200 {
                return Err(Error::Numerical {
                    routine: "empirical_crossings",
                    detail: format!("could not bracket xi = {target} after t = {arrival}"),
                });
            }
        }
        let lo = times.last().copied().unwrap_or(arrival);
        let t = roots::brent(g, lo, hi, 1e-15 * arrival)?;
        times.push(t);
    }
    Ok((times[0], times[1]))
}

/// Free-space (g = 0) shutter density.
pub fn free_shutter_density(mass: f64, speed: f64, hbar: f64, z: f64, t: f64) -> Result<f64> {
    check_time(t)?;
    ensure_finite("z", z)?;
    Ok(free_density(mass, speed, hbar, Dd::from_f64(z), t))
}

fn free_density(mass: f64, speed: f64, hbar: f64, z: Dd, t: f64) -> f64 {
    density_of_xi(xi_with(mass, hbar, (z + Dd::product(speed, t)).to_f64(), t))
}

/// Shutter density computed in the freely falling frame: the free-space
/// density evaluated at the co-falling coordinate `z + g t^2 / 2`.
pub fn strong_ep_map_a(beam: &ShutterBeam, z: f64, t: f64) -> Result<f64> {
    check_time(t)?;
    ensure_finite("z", z)?;
    let falling = fall_offset(beam.g, z, t);
    Ok(free_density(beam.mass, beam.speed, beam.hbar, falling, t))
}

/// Half-width of the local time average; scales as `m^{-1/2}` with the
/// diffraction width and never exceeds `t / 2`.
pub fn local_average_window(beam: &ShutterBeam, z: f64, t: f64) -> Result<f64> {
    let d = DetectorPoint::new(z)?.depth();
    check_time(t)?;
    Ok((LOCAL_AVERAGE_WIDTHS * width_formula(beam, d)).min(0.5 * t))
}

/// Time average of the quantum density over `[t - eps, t + eps]`.
pub fn local_average(beam: &ShutterBeam, z: f64, t: f64, eps: f64) -> Result<f64> {
    check_time(t)?;
    if !(eps > 0.0 && eps < t) {
        return Err(domain(format!("averaging half-width must lie in (0, t), got {eps}")));
    }
    let f = |s: f64| density_of_xi(xi_with(beam.mass, beam.hbar, offset(beam, z, s), s));
    let r = quad::integrate(f, t - eps, t + eps, 1e-12 * eps, 1e-10, 200_000)?;
    Ok(r.value / (2.0 * eps))
}

/// Widths quoted alongside the catalog species, s.
pub fn quoted_width(particle: &str) -> Option<f64> {
    match particle {
        "thermal_neutron" => Some(0.37e-8),
        "ucn" => Some(6e-5),
        "cesium" => Some(0.5e-5),
        "c60" => Some(0.4e-6),
        "c176" => Some(0.18e-6),
        _ => None,
    }
}

/// One row of the width table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WidthRow {
    pub particle: String,
    pub mass: f64,
    pub speed: f64,
    pub z: f64,
    pub classical_tof: f64,
    pub computed_width: f64,
    pub quoted_width: Option<f64>,
    pub rel_discrepancy: Option<f64>,
}

/// Diffraction widths for every catalog species at detector `z`.
pub fn width_table(catalog: &Catalog, consts: &PhysicalConstants, z: f64) -> Result<Vec<WidthRow>> {
    catalog
        .iter()
        .map(|p| {
            let beam = ShutterBeam::for_particle(p, None, consts)?;
            let w = diffraction_width(&beam, z)?.delta_t;
            let quoted = quoted_width(&p.name);
            Ok(WidthRow {
                particle: p.name.clone(),
                mass: p.mass,
                speed: beam.speed,
                z,
                classical_tof: classical_tof(&beam, z)?,
                computed_width: w,
                quoted_width: quoted,
                rel_discrepancy: quoted.map(|q| (w - q) / q),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::catalog;

    fn beam(name: &str) -> ShutterBeam {
        ShutterBeam::for_particle(catalog().lookup(name).unwrap(), None, &PhysicalConstants::default())
            .unwrap()
    }

    #[test]
    fn xi_vanishes_at_classical_arrival() {
        let b = beam("ucn");
        let t = classical_tof(&b, -1.0).unwrap();
        assert!(xi(&b, -1.0, t).unwrap().abs() < 1e-9);
        assert!((density_a(&b, -1.0, t).unwrap() - 0.25).abs() < 1e-9);
    }

    #[test]
    fn xi_diverges_negative_at_early_times() {
        let b = beam("ucn");
        assert!(xi(&b, -1.0, 1e-12).unwrap() < -1e6);
    }

    #[test]
    fn bad_inputs() {
        let b = beam("ucn");
        assert!(matches!(xi(&b, -1.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(classical_tof(&b, 0.0), Err(Error::Domain(_))));
        assert!(matches!(classical_tof(&b, 0.3), Err(Error::Domain(_))));
        assert!(ShutterBeam::new(1.0, 0.0, &PhysicalConstants::default()).is_err());
        let slow = ShutterBeam::new(1e-30, 1e-3, &PhysicalConstants::default()).unwrap();
        assert!(matches!(diffraction_width(&slow, -1.0), Err(Error::Precondition(m)) if m.contains("p|z|/hbar")));
    }

    #[test]
    fn classical_step_is_right_continuous() {
        let b = beam("ucn");
        let t = classical_tof(&b, -1.0).unwrap();
        assert_eq!(classical_density_a(&b, -1.0, 0.5 * t).unwrap(), 0.0);
        assert_eq!(classical_density_a(&b, -1.0, t).unwrap(), 1.0);
        assert_eq!(classical_density_a(&b, -1.0, 2.0 * t).unwrap(), 1.0);
    }

    #[test]
    fn unit_density_crossings_in_xi() {
        let x = unit_density_xis(2).unwrap();
        assert!((x[1] - x[0] - DELTA_XI).abs() < 0.02);
    }
}

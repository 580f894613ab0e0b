//! Gravitational bound states above a horizontal mirror at `z = 0`.
//!
//! `psi_n(z) = Ai(a_n + z / l_g) / (sqrt(l_g) Ai'(a_n))` for `z >= 0`, with
//! `l_g = (hbar^2 / (2 m^2 g))^{1/3}`, turning height `h_n = -a_n l_g` and
//! energy `E_n = m g h_n`.

use rayon::prelude::*;
use serde::Serialize;

use crate::constants::{ParticleSpec, PhysicalConstants};
use crate::error::{domain, Result};
use crate::specfun::{airy_unchecked, airy_zero};

/// Detector depth at which the tabulated delays are reproduced, m.
pub const DEFAULT_TABLE_DEPTH: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GravEigenstate {
    pub n: u32,
    pub mass: f64,
    pub g: f64,
    pub hbar: f64,
    /// Gravitational length, m.
    pub l_g: f64,
    /// `n`-th zero of Ai.
    pub a_n: f64,
    /// Energy above the mirror, J.
    pub e_n: f64,
    /// Classical turning height, m.
    pub h_n: f64,
    /// `Ai'(a_n)`, cached for the normalisation.
    pub ai_prime_at_zero: f64,
}

impl GravEigenstate {
    pub fn new(n: u32, mass: f64, consts: &PhysicalConstants) -> Result<Self> {
        if !(mass.is_finite() && mass > 0.0) {
            return Err(domain(format!("mass must be positive, got {mass}")));
        }
        consts.validate()?;
        let a_n = airy_zero(n)?.a_n;
        let l_g = (consts.hbar * consts.hbar / (2.0 * mass * mass * consts.g)).cbrt();
        let h_n = -a_n * l_g;
        Ok(GravEigenstate {
            n,
            mass,
            g: consts.g,
            hbar: consts.hbar,
            l_g,
            a_n,
            e_n: mass * consts.g * h_n,
            h_n,
            ai_prime_at_zero: airy_unchecked(a_n).ai_prime,
        })
    }
}

/// Eigenstate `n` of `particle`.
pub fn grav_state(n: u32, particle: &ParticleSpec, consts: &PhysicalConstants) -> Result<GravEigenstate> {
    GravEigenstate::new(n, particle.mass, consts)
}

/// Normalised eigenfunction, m^{-1/2}; identically zero below the mirror.
pub fn eigenfunction(state: &GravEigenstate, z: f64) -> f64 {
    if !(z >= 0.0) {
        return 0.0;
    }
    let ai = airy_unchecked(state.a_n + z / state.l_g).ai;
    ai / (state.l_g.sqrt() * state.ai_prime_at_zero)
}

/// `<z>` of the eigenstate, `2 h_n / 3`.
pub fn mean_position(state: &GravEigenstate) -> f64 {
    2.0 * state.h_n / 3.0
}

/// Free-fall times to a detector at depth `|z|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeScales {
    /// From the classical turning height `h_n`.
    pub tau: f64,
    /// From the mean position `2 h_n / 3`.
    pub t_mean: f64,
    /// From the mirror.
    pub t_class: f64,
}

fn check_detector(z: f64) -> Result<f64> {
    if z.is_finite() && z < 0.0 {
        Ok(-z)
    } else {
        Err(domain(format!("detector must sit below the mirror (z < 0), got z = {z}")))
    }
}

pub fn time_scales(state: &GravEigenstate, z: f64) -> Result<TimeScales> {
    let d = check_detector(z)?;
    let fall = |h: f64| (2.0 * (d + h) / state.g).sqrt();
    Ok(TimeScales {
        tau: fall(state.h_n),
        t_mean: fall(mean_position(state)),
        t_class: fall(0.0),
    })
}

/// Relative arrival delay `h_n / (3 |z|)`.
pub fn time_delay(state: &GravEigenstate, z: f64) -> Result<f64> {
    let d = check_detector(z)?;
    Ok(state.h_n / (3.0 * d))
}

/// Tabulated delays at `|z| = 1 m`, indexed by species and `n`.
pub fn quoted_delay(particle: &str, n: u32) -> Option<f64> {
    let column = match particle {
        "ucn" | "thermal_neutron" => [4.6e-6, 8e-6],
        "cesium" => [4.77e-7, 3.1e-7],
        "c60" => [5.72e-8, 1e-7],
        "c176" => [2.06e-8, 3.61e-8],
        _ => return None,
    };
    match n {
        1 | 2 => Some(column[n as usize - 1]),
        _ => None,
    }
}

/// Species shown in the default delay table, one per tabulated column.
pub const TABLE_PARTICLES: [&str; 4] = ["ucn", "cesium", "c60", "c176"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DelayRow {
    pub particle: String,
    pub n: u32,
    pub computed_delay: f64,
    pub quoted_delay: Option<f64>,
    pub rel_discrepancy: Option<f64>,
}

/// Delays for every `(particle, n)` pair, particle-major. Quoted values are
/// carried alongside and never replace computed ones.
pub fn delay_table(
    particles: &[ParticleSpec],
    ns: &[u32],
    consts: &PhysicalConstants,
    z: f64,
) -> Result<Vec<DelayRow>> {
    check_detector(z)?;
    let cells: Vec<(&ParticleSpec, u32)> = particles
        .iter()
        .flat_map(|p| ns.iter().map(move |&n| (p, n)))
        .collect();
    cells
        .par_iter()
        .map(|&(p, n)| {
            let state = grav_state(n, p, consts)?;
            let computed = time_delay(&state, z)?;
            // Quoted values only apply at the tabulated depth.
            let quoted = if (z + DEFAULT_TABLE_DEPTH).abs() < 1e-12 {
                quoted_delay(&p.name, n)
            } else {
                None
            };
            Ok(DelayRow {
                particle: p.name.clone(),
                n,
                computed_delay: computed,
                quoted_delay: quoted,
                rel_discrepancy: quoted.map(|q| (computed - q) / q),
            })
        })
        .collect()
}

//! Run configuration: a flat-key JSON file layered under command-line values
//! and built-in defaults.
//!
//! Keys mirror the command-line flags (`t_start` for `--t-start` and so on).
//! A [`ConfigLayer`] holds whatever one source supplied; [`ConfigLayer::over`]
//! stacks a higher-priority layer on a lower one and [`RunConfig::resolve`]
//! fills the gaps and validates.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::constants::{catalog, Catalog, ParticleOverride, ParticleSpec, PhysicalConstants};
use crate::error::{Error, Result};
use crate::output::Format;
use crate::propagate::QuadratureConfig;
use crate::specfun::MAX_ZERO_INDEX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    A,
    B,
}

/// One source of settings. Absent keys defer to lower layers.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigLayer {
    pub scenario: Option<Scenario>,
    pub particle: Option<String>,
    pub n: Option<u32>,
    pub z: Option<f64>,
    pub t_start: Option<f64>,
    pub t_end: Option<f64>,
    pub points: Option<usize>,
    pub g: Option<f64>,
    pub hbar: Option<f64>,
    pub rel_tol: Option<f64>,
    pub speed: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    /// Mass multipliers for sweeps.
    pub factors: Option<Vec<f64>>,
    /// Per-species catalog overrides.
    pub particles: Option<BTreeMap<String, ParticleOverride>>,
}

macro_rules! pick {
    ($hi:ident, $lo:ident, $($f:ident),*) => {
        ConfigLayer { $($f: $hi.$f.or($lo.$f)),* }
    };
}

impl ConfigLayer {
    /// `self` wins wherever it has a value.
    pub fn over(self, lower: ConfigLayer) -> ConfigLayer {
        let hi = self;
        let lo = lower;
        pick!(
            hi, lo, scenario, particle, n, z, t_start, t_end, points, g, hbar, rel_tol, speed, out,
            format, factors, particles
        )
    }
}

/// Parses a configuration file body.
pub fn parse_config(text: &str) -> Result<ConfigLayer> {
    serde_json::from_str(text).map_err(|e| Error::Config(format!("config file: {e}")))
}

/// Parses a JSON object of per-species overrides and checks it against the
/// built-in catalog.
pub fn parse_particle_overrides(text: &str) -> Result<BTreeMap<String, ParticleOverride>> {
    let map: BTreeMap<String, ParticleOverride> =
        serde_json::from_str(text).map_err(|e| Error::Config(format!("particle overrides: {e}")))?;
    catalog().apply_overrides(&map)?;
    Ok(map)
}

/// Explicit detector time window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeWindow {
    pub t_start: f64,
    pub t_end: f64,
}

/// Default detector depth, m.
pub const DEFAULT_Z: f64 = -1.0;
pub const DEFAULT_POINTS: usize = 2001;
pub const DEFAULT_PARTICLE: &str = "ucn";
/// Default sweep multipliers.
pub const DEFAULT_FACTORS: [f64; 4] = [1.0, 10.0, 100.0, 1000.0];

/// Fully resolved and validated settings.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub particle: ParticleSpec,
    pub n: Option<u32>,
    pub z: f64,
    /// `None` lets the command choose a window suited to the physics.
    pub window: Option<TimeWindow>,
    pub points: usize,
    pub constants: PhysicalConstants,
    pub quadrature: QuadratureConfig,
    pub speed: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub factors: Vec<f64>,
    pub catalog: Catalog,
}

fn bad<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}

impl RunConfig {
    /// Resolves `layer` against built-in defaults for `scenario`.
    pub fn resolve(scenario: Scenario, layer: ConfigLayer) -> Result<RunConfig> {
        let mut cat = catalog();
        if let Some(ov) = &layer.particles {
            cat.apply_overrides(ov)?;
        }
        let name = layer.particle.as_deref().unwrap_or(DEFAULT_PARTICLE);
        let particle = cat.lookup(name)?.clone();

        let n = layer.n;
        if let Some(n) = n {
            if n == 0 || n > MAX_ZERO_INDEX {
                return bad(format!("n must lie in 1..={MAX_ZERO_INDEX}, got {n}"));
            }
        }
        if scenario == Scenario::B && n.is_none() {
            return bad("scenario b needs a state index n");
        }

        let z = layer.z.unwrap_or(DEFAULT_Z);
        if !(z.is_finite() && z < 0.0) {
            return bad(format!("z must be finite and negative, got {z}"));
        }

        let window = match (layer.t_start, layer.t_end) {
            (None, None) => None,
            (Some(t_start), Some(t_end)) => {
                if !(t_start.is_finite() && t_start >= 0.0) {
                    return bad(format!("t_start must be finite and >= 0, got {t_start}"));
                }
                if !(t_end.is_finite() && t_end > t_start) {
                    return bad(format!("t_end must exceed t_start, got [{t_start}, {t_end}]"));
                }
                Some(TimeWindow { t_start, t_end })
            }
            _ => return bad("t_start and t_end must be given together"),
        };

        let points = layer.points.unwrap_or(DEFAULT_POINTS);
        if !(2..=10_000_000).contains(&points) {
            return bad(format!("points must lie in 2..=10000000, got {points}"));
        }

        let defaults = PhysicalConstants::default();
        let constants = PhysicalConstants::new(
            layer.hbar.unwrap_or(defaults.hbar),
            layer.g.unwrap_or(defaults.g),
        )?;

        let mut quadrature = QuadratureConfig::default();
        if let Some(r) = layer.rel_tol {
            quadrature.rel_tol = r;
        }
        quadrature.validate()?;

        if let Some(v) = layer.speed {
            if !(v.is_finite() && v >= 0.0) {
                return bad(format!("speed must be finite and >= 0, got {v}"));
            }
        }

        let factors = layer.factors.unwrap_or_else(|| DEFAULT_FACTORS.to_vec());
        if factors.is_empty() || factors.iter().any(|f| !(f.is_finite() && *f > 0.0)) {
            return bad("factors must be a non-empty list of positive numbers");
        }

        Ok(RunConfig {
            scenario,
            particle,
            n,
            z,
            window,
            points,
            constants,
            quadrature,
            speed: layer.speed,
            out: layer.out,
            format: layer.format.unwrap_or_default(),
            factors,
            catalog: cat,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_keys_parse() {
        let layer = parse_config(
            r#"{"scenario": "b", "particle": "c60", "n": 2, "z": -0.5,
                "t_start": 0.1, "t_end": 0.5, "points": 11, "g": 9.8,
                "hbar": 1e-34, "rel_tol": 1e-8, "format": "json", "out": "x.json",
                "particles": {"c60": {"mass": 1.2e-24}}}"#,
        )
        .unwrap();
        let cfg = RunConfig::resolve(Scenario::B, layer).unwrap();
        assert_eq!(cfg.particle.mass, 1.2e-24);
        assert_eq!(cfg.n, Some(2));
        assert_eq!(cfg.window, Some(TimeWindow { t_start: 0.1, t_end: 0.5 }));
        assert_eq!(cfg.constants.g, 9.8);
        assert_eq!(cfg.quadrature.rel_tol, 1e-8);
        assert_eq!(cfg.format, Format::Json);
    }

    #[test]
    fn unknown_key_rejected() {
        assert!(matches!(parse_config(r#"{"zz": 1}"#), Err(Error::Config(_))));
    }

    #[test]
    fn upper_layer_wins() {
        let file = ConfigLayer {
            particle: Some("cesium".into()),
            z: Some(-2.0),
            ..Default::default()
        };
        let cli = ConfigLayer {
            z: Some(-3.0),
            ..Default::default()
        };
        let cfg = RunConfig::resolve(Scenario::A, cli.over(file)).unwrap();
        assert_eq!(cfg.z, -3.0);
        assert_eq!(cfg.particle.name, "cesium");
    }

    #[test]
    fn defaults_fill_gaps() {
        let cfg = RunConfig::resolve(Scenario::A, ConfigLayer::default()).unwrap();
        assert_eq!(cfg.particle.name, DEFAULT_PARTICLE);
        assert_eq!(cfg.z, DEFAULT_Z);
        assert_eq!(cfg.window, None);
        assert_eq!(cfg.format, Format::Csv);
    }

    #[test]
    fn invalid_settings() {
        let r = |l: ConfigLayer, s| RunConfig::resolve(s, l);
        assert!(r(ConfigLayer::default(), Scenario::B).is_err());
        let l = ConfigLayer {
            t_start: Some(2.0),
            t_end: Some(1.0),
            ..Default::default()
        };
        assert!(r(l, Scenario::A).is_err());
        let l = ConfigLayer {
            z: Some(0.5),
            ..Default::default()
        };
        assert!(r(l, Scenario::A).is_err());
        let l = ConfigLayer {
            points: Some(1),
            ..Default::default()
        };
        assert!(r(l, Scenario::A).is_err());
        let l = ConfigLayer {
            particle: Some("proton".into()),
            ..Default::default()
        };
        assert!(matches!(r(l, Scenario::A), Err(Error::UnknownParticle(_))));
    }

    #[test]
    fn overrides_checked_against_catalog() {
        assert!(parse_particle_overrides(r#"{"ucn": {"speed": 0.05}}"#).is_ok());
        assert!(parse_particle_overrides(r#"{"muon": {"mass": 1e-28}}"#).is_err());
        assert!(parse_particle_overrides(r#"{"ucn": {"mass": -1}}"#).is_err());
        assert!(parse_particle_overrides(r#"{"ucn": {"charge": 1}}"#).is_err());
    }
}

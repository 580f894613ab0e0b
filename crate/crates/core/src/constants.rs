//! Physical constants and the particle catalog.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduced Planck constant (CODATA 2018), J s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Standard surface gravity used by default, m/s^2.
pub const G_EARTH: f64 = 9.81;
/// Neutron mass as used throughout the catalog, kg.
pub const NEUTRON_MASS: f64 = 1.675e-27;

/// `hbar` and `g`, both strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub g: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        PhysicalConstants {
            hbar: HBAR,
            g: G_EARTH,
        }
    }
}

impl PhysicalConstants {
    pub fn new(hbar: f64, g: f64) -> Result<Self> {
        let c = PhysicalConstants { hbar, g };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.hbar.is_finite() && self.hbar > 0.0) {
            return Err(Error::Config(format!("hbar must be positive, got {}", self.hbar)));
        }
        if !(self.g.is_finite() && self.g > 0.0) {
            return Err(Error::Config(format!("g must be positive, got {}", self.g)));
        }
        Ok(())
    }
}

/// A named particle species.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParticleSpec {
    pub name: String,
    /// kg
    pub mass: f64,
    /// Beam speed for the shutter configuration, m/s.
    pub default_speed: Option<f64>,
}

impl ParticleSpec {
    pub fn new(name: impl Into<String>, mass: f64, default_speed: Option<f64>) -> Result<Self> {
        let p = ParticleSpec {
            name: name.into(),
            mass,
            default_speed,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mass.is_finite() && self.mass > 0.0) {
            return Err(Error::Config(format!(
                "mass of '{}' must be positive, got {}",
                self.name, self.mass
            )));
        }
        if let Some(v) = self.default_speed {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Config(format!(
                    "speed of '{}' must be non-negative, got {v}",
                    self.name
                )));
            }
        }
        Ok(())
    }

    /// Same species with its mass multiplied by `factor` (for mass sweeps).
    pub fn scaled_mass(&self, factor: f64) -> Result<Self> {
        ParticleSpec::new(
            format!("{}*{factor}", self.name),
            self.mass * factor,
            self.default_speed,
        )
    }
}

/// Partial replacement of a catalog entry.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParticleOverride {
    pub mass: Option<f64>,
    pub speed: Option<f64>,
}

/// The five built-in species, possibly with overridden parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Catalog {
    entries: Vec<ParticleSpec>,
}

/// Names of the built-in species in catalog order.
pub const PARTICLE_NAMES: [&str; 5] = ["thermal_neutron", "ucn", "cesium", "c60", "c176"];

/// The built-in particle catalog.
pub fn catalog() -> Catalog {
    let e = |name: &str, mass: f64, v: f64| ParticleSpec {
        name: name.to_string(),
        mass,
        default_speed: Some(v),
    };
    Catalog {
        entries: vec![
            e("thermal_neutron", NEUTRON_MASS, 2200.0),
            e("ucn", NEUTRON_MASS, 0.02),
            e("cesium", 2.2e-25, 0.02),
            e("c60", 1.19668e-24, 0.02),
            e("c176", 3.50706e-24, 0.02),
        ],
    }
}

impl Default for Catalog {
    fn default() -> Self {
        catalog()
    }
}

impl Catalog {
    pub fn entries(&self) -> &[ParticleSpec] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = &ParticleSpec> {
        self.entries.iter()
    }

    /// Looks up a species by name; unknown names are an error.
    pub fn lookup(&self, name: &str) -> Result<&ParticleSpec> {
        self.entries
            .iter()
            .find(|p| p.name == name)
            .ok_or_else(|| Error::UnknownParticle(name.to_string()))
    }

    /// Applies per-species overrides. Every key must name a catalog entry.
    pub fn apply_overrides(&mut self, overrides: &BTreeMap<String, ParticleOverride>) -> Result<()> {
        for (name, ov) in overrides {
            let idx = self
                .entries
                .iter()
                .position(|p| &p.name == name)
                .ok_or_else(|| Error::UnknownParticle(name.clone()))?;
            let mut updated = self.entries[idx].clone();
            if let Some(m) = ov.mass {
                updated.mass = m;
            }
            if let Some(v) = ov.speed {
                updated.default_speed = Some(v);
            }
            updated.validate()?;
            self.entries[idx] = updated;
        }
        Ok(())
    }
}

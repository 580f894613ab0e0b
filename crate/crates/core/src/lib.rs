//! Diffraction in time of free-falling quantum particles.
//!
//! Two configurations are modelled:
//!
//! * [`scenario_a`]: a monochromatic beam held by a shutter that opens at
//!   `t = 0` and falls in uniform gravity. The density at a detector is a
//!   closed form in the Fresnel integrals.
//! * [`scenario_b`] and [`propagate`]: a particle prepared in a gravitational
//!   bound state above a mirror, released at `t = 0`. The evolved state is
//!   an oscillatory integral over the Airy eigenfunction.
//!
//! All quantities are SI unless a function says otherwise.

pub mod constants;
pub mod error;
pub mod output;
pub mod propagate;
pub mod quad;
pub mod roots;
pub mod run_config;
pub mod scenario_a;
pub mod scenario_b;
pub mod specfun;

pub use constants::{catalog, Catalog, ParticleSpec, PhysicalConstants};
pub use error::{Error, Result};

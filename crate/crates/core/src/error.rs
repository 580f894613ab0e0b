use thiserror::Error;

/// Errors raised by the physics and numerics layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An integer index is outside its supported range.
    #[error("{what} = {value} is out of range [{min}, {max}]")]
    Range {
        what: &'static str,
        value: i64,
        min: i64,
        max: i64,
    },

    /// A validity condition of an approximation is not met.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A numerical procedure failed to reach its target.
    #[error("numerical failure in {routine}: {detail}")]
    Numerical {
        routine: &'static str,
        detail: String,
    },

    /// Unknown particle name.
    #[error("unknown particle '{0}' (known: thermal_neutron, ucn, cesium, c60, c176)")]
    UnknownParticle(String),

    /// Malformed or inconsistent configuration.
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn ensure_finite(what: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("{what} must be finite, got {x}")))
    }
}

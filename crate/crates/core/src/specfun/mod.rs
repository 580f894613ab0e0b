//! Real-argument special functions: Airy `Ai`, `Ai'`, zeros of `Ai`, and
//! the Fresnel integrals. Everything here is pure and dependency-free.

mod airy;
pub(crate) mod dd;
mod fresnel;

pub use airy::{
    airy, airy_ai, airy_unchecked, airy_zero, airy_zero_estimate, AiryPair, AiryZero,
    MAX_ZERO_INDEX, SERIES_SWITCH as AIRY_SERIES_SWITCH, ZERO_RESIDUAL,
};
pub use fresnel::{fresnel, fresnel_unchecked, FresnelPair, SERIES_SWITCH as FRESNEL_SERIES_SWITCH};

//! Reconstruction of the width of a slowly varying 2D acoustic waveguide from
//! multi-frequency measurements of one locally resonant mode at a single
//! section.
//!
//! The pipeline is split into:
//! * [`profile`]: width profiles, local wavenumbers, mode classification;
//! * [`specfun`]: Airy functions and the model function `Phi`;
//! * [`forward`]: synthetic measurements (Airy kernel, simplified model,
//!   finite-difference oracle) and noise;
//! * [`invert`]: the layer-stripping inversion;
//! * [`bounds`]: estimation of `h_min`/`h_max` from a broadband sweep.

pub mod bounds;
pub mod error;
pub mod forward;
pub mod invert;
pub mod profile;
pub mod quad;
pub mod specfun;

pub use error::{Error, Result};

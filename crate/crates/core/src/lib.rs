//! Exact energy-domain Green's functions for piecewise-constant
//! one-dimensional potentials.

pub mod amplitudes;
pub mod error;
pub mod greens;
pub mod oracle;
pub mod potential;
pub mod presets;
pub mod resonance;
pub mod spectra;

pub use error::{Error, Result};

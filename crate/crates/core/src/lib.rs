//! Pseudo-spectral Galerkin simulation of the 2D stochastic Navier-Stokes
//! equations with gradient-dependent multiplicative noise, and Monte-Carlo
//! checks of the energy estimates and invariant-measure machinery built on
//! them.

pub mod cli;
pub mod diagnostics;
pub mod ergodics;
pub mod error;
pub mod integrator;
pub mod noise;
pub mod spectral;

pub use error::{Error, Result};

//! Divergence-free Fourier fields on a mean-zero periodic box.

mod domain;
mod field;
mod grid;
pub mod io;
mod operators;

pub use domain::Domain;
pub use field::{DualField, SpectralField, VectorModes};
pub use grid::{smooth_size, Fft2, Space};

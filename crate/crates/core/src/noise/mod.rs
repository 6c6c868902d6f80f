//! The noise class `G(u)h = sum_i [(b_i . grad) u + c_i u] h_i` and its
//! numerical certification.

pub mod certify;
mod columns;
mod model;

pub use certify::{certified, certify, CertificationReport};
pub use columns::{direct_column, NoiseColumns, NoiseOperator};
pub use model::{Budget, Certificate, CoefField, CoefMode, NoiseChannel, NoiseModel};

use thiserror::Error;

use crate::integrator::LedgerRow;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("field cutoff {found} does not match space cutoff {expected}")]
    CutoffMismatch { expected: usize, found: usize },

    #[error("unknown local region index {index} ({available} regions configured)")]
    UnknownRegion { index: usize, available: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("empty sample set")]
    EmptySamples,

    #[error("non-finite state at step {step} (t = {time})")]
    BlowUp {
        step: usize,
        time: f64,
        last_finite: Option<LedgerRow>,
    },

    #[error(
        "noise budget violated at step {step} (t = {time}): hs = {hs:.6e} > budget {budget:.6e}"
    )]
    BudgetViolation {
        step: usize,
        time: f64,
        hs: f64,
        budget: f64,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("insufficient snapshots: need {needed}, have {have}")]
    InsufficientSnapshots { needed: usize, have: usize },

    #[error("horizon too short: {0}")]
    HorizonTooShort(String),

    #[error("malformed field data: {0}")]
    Format(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

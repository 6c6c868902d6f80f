//! Markov-semigroup experiments: occupation measures, invariance testing,
//! weak (bw-)Feller continuity and continuous dependence on data.

mod feller;
mod observables;
mod occupation;
mod semigroup;

pub use feller::{
    continuous_dependence_experiment, feller_experiment, FellerRow, FellerTable, StabilityCurve,
    StabilityPoint,
};
pub use observables::{Observable, ObservableKind};
pub use occupation::{kb_occupation, kb_occupation_paths, EmpiricalMeasure};
pub use semigroup::{
    evolve_many, invariance_test, kolmogorov_q, ks_p_value, ks_statistic, semigroup_estimate,
    InvarianceResult, SemigroupEstimate, RESTART_STREAM_BASE,
};

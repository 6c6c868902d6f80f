//! Ensemble checks of the energy estimates: the p = 2 Ito balance, the
//! Poincaré energy budget, p-th moments, the Aldous increment scan and the
//! Chebyshev exceedance bound.

mod aldous;
mod energy;
mod ensemble;
mod moments;
mod report;

pub use aldous::{increment_moment_scan, AldousFit};
pub use energy::{
    chebyshev_bound, chebyshev_bound_check, ito_balance_halving, ito_balance_report,
    poincare_energy_report, poincare_left_is_monotone,
};
pub use ensemble::{Ensemble, EnsembleMeta};
pub use moments::{p_moment, p_moment_report, MomentReport};
pub use report::{mean_stderr, EstimateReport, ReportRow, REPORT_HEADER};

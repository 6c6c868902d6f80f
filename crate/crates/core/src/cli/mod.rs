//! Batch front door: TOML configs in, CSVs plus `summary.toml` and
//! `manifest.toml` out.
//!
//! | subcommand | CSV files |
//! |---|---|
//! | `certify-noise` | `certification.csv`: `probe,hs,V2,H2,budget,gap` |
//! | `simulate` | `run_index.csv`: `path,stream,status,final_time,H2,V2`; `ledger/path_NNNN.csv` (ledger columns); `final/path_NNNN.csv` (spectral rows) |
//! | `energy-report` | `ito_balance.csv`, `poincare.csv` (report columns) |
//! | `moments` | `moments.csv`: `cutoff,sup_moment,sup_stderr,integral_moment,integral_stderr` |
//! | `aldous-scan` | `aldous.csv`: `theta,mean_increment,stderr` |
//! | `chebyshev` | `chebyshev.csv` (report columns, `x` = radius) |
//! | `kb-estimate` | `kb.csv`: `observable,average,bound,first_half,first_half_stderr,second_half,second_half_stderr,consistent`; optional `snapshots/` |
//! | `invariance-test` | `invariance.csv`: `observable,statistic,p_value,adjusted_p_value,pass` |
//! | `feller` | `feller.csv`: `k1,k2,kappa,diff,paired_stderr,pooled_stderr` |
//! | `continuous-dependence` | `stability.csv`: `delta,mean_sup_distance,stderr,reduction` |
//!
//! Report columns are [`crate::diagnostics::REPORT_HEADER`]; ledger columns
//! are [`crate::integrator::LEDGER_HEADER`]; spectral rows are
//! [`crate::spectral::io::CSV_HEADER`]. Every run also writes `config.toml`
//! (the normalised config).

mod commands;
pub mod config;
pub mod output;

pub use commands::{exit_code, run, Outcome, RunOptions, Subcommand, SEED_ENV};
pub use config::{emit_config, load_config, parse_config, validate_config, RunConfig};
pub use output::{OutputDir, RunManifest, MANIFEST_FILE, SUMMARY_FILE};

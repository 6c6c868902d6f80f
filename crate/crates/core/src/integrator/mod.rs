//! Seeded integrating-factor Euler-Maruyama time stepping of the Galerkin
//! system, with per-record energy bookkeeping.

mod config;
mod simulate;
mod trajectory;
mod wiener;

pub use config::{SimConfig, Terms};
pub use simulate::{coupled_pair_simulate, simulate, single_mode_forcing, Simulator};
pub use trajectory::{EnergyLedger, LedgerRow, Trajectory, LEDGER_HEADER};
pub use wiener::{wiener_increments, WienerStream};

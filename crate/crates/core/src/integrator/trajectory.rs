use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::spectral::SpectralField;

/// Energy bookkeeping at one recorded time.
///
/// `h2`, `v2`, `fu` and `hs` are instantaneous. `mart` is the martingale
/// increment `sum_j <u_j, G(u_j) dW_j>` accumulated since the previous row.
/// The `int_*` columns are left-point Riemann sums from 0 at step resolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LedgerRow {
    pub t: f64,
    pub h2: f64,
    pub v2: f64,
    pub fu: f64,
    pub hs: f64,
    pub mart: f64,
    pub int_v2: f64,
    pub int_fu: f64,
    pub int_hs: f64,
}

impl LedgerRow {
    pub fn is_finite(&self) -> bool {
        [
            self.t, self.h2, self.v2, self.fu, self.hs, self.mart, self.int_v2, self.int_fu,
            self.int_hs,
        ]
        .iter()
        .all(|x| x.is_finite())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EnergyLedger {
    pub rows: Vec<LedgerRow>,
}

pub const LEDGER_HEADER: &str = "t,H2,V2,fu,hs,mart,int_V2,int_fu,int_hs";

impl EnergyLedger {
    pub fn last(&self) -> Option<&LedgerRow> {
        self.rows.last()
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{LEDGER_HEADER}")?;
        for r in &self.rows {
            writeln!(
                w,
                "{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
                r.t, r.h2, r.v2, r.fu, r.hs, r.mart, r.int_v2, r.int_fu, r.int_hs
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// States at `times`; empty when the run did not keep states.
    pub states: Vec<SpectralField>,
    pub last: SpectralField,
    pub ledger: EnergyLedger,
    pub seed: u64,
    pub stream: u64,
    pub config_hash: String,
}

impl Trajectory {
    pub fn final_time(&self) -> f64 {
        *self.times.last().unwrap_or(&0.0)
    }

    /// `sup_t |u_a(t) - u_b(t)|_H` over common recorded states.
    pub fn sup_distance(&self, other: &Trajectory) -> f64 {
        self.states
            .iter()
            .zip(&other.states)
            .map(|(a, b)| a.sub(b).h_norm())
            .fold(self.last.sub(&other.last).h_norm(), f64::max)
    }
}

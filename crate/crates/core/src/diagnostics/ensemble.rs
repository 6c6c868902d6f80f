use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrator::{Simulator, Trajectory};
use crate::noise::Budget;
use crate::spectral::SpectralField;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleMeta {
    pub paths: usize,
    pub excluded: usize,
    pub cutoff: usize,
    pub dt: f64,
    pub horizon: f64,
}

/// Independent paths from one deterministic initial state, plus the model
/// constants the estimates refer to.
#[derive(Debug, Clone)]
pub struct Ensemble {
    pub trajectories: Vec<Trajectory>,
    pub excluded: usize,
    pub budget: Option<Budget>,
    pub forcing_vprime_sq: f64,
    pub poincare: f64,
    pub cutoff: usize,
    pub dt: f64,
    pub horizon: f64,
}

impl Ensemble {
    /// Runs streams `0..paths`. Paths that blow up are excluded and counted;
    /// other errors abort.
    pub fn run(sim: &Simulator, u0: &SpectralField, paths: usize) -> Result<Self> {
        Self::run_coarsened(sim, u0, paths, 1)
    }

    /// As [`Ensemble::run`], with Brownian increments built from `factor`
    /// draws at `dt / factor` (see [`Simulator::run_coarsened`]).
    pub fn run_coarsened(sim: &Simulator, u0: &SpectralField, paths: usize, factor: usize) -> Result<Self> {
        let results: Vec<Result<Trajectory>> = (0..paths as u64)
            .into_par_iter()
            .map(|i| sim.run_coarsened(u0, i, factor))
            .collect();
        let mut trajectories = Vec::with_capacity(paths);
        let mut excluded = 0;
        for r in results {
            match r {
                Ok(t) => trajectories.push(t),
                Err(Error::BlowUp { .. }) => excluded += 1,
                Err(e) => return Err(e),
            }
        }
        if trajectories.is_empty() {
            return Err(Error::EmptySamples);
        }
        let cfg = sim.config();
        let f = sim.forcing();
        Ok(Self {
            trajectories,
            excluded,
            budget: cfg.model.certified.map(|c| c.budget()),
            forcing_vprime_sq: sim.space().vprime_norm(f.modes()).powi(2),
            poincare: sim.space().poincare_constant(),
            cutoff: sim.space().cutoff(),
            dt: cfg.dt,
            horizon: cfg.steps() as f64 * cfg.dt,
        })
    }

    pub fn meta(&self) -> EnsembleMeta {
        EnsembleMeta {
            paths: self.trajectories.len(),
            excluded: self.excluded,
            cutoff: self.cutoff,
            dt: self.dt,
            horizon: self.horizon,
        }
    }

    pub fn len(&self) -> usize {
        self.trajectories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trajectories.is_empty()
    }

    /// `|u0|_H^2`, read from the first ledger row.
    pub fn initial_energy(&self) -> f64 {
        self.trajectories[0].ledger.rows[0].h2
    }

    /// Budget with `lambda0 = 0`, required by the Poincaré-type estimates.
    pub(crate) fn dissipative_budget(&self) -> Result<Budget> {
        match self.budget {
            None => Err(Error::Precondition("noise model is not certified".into())),
            Some(b) if b.lambda0 != 0.0 => Err(Error::Precondition(format!(
                "estimate requires a certified budget with lambda0 = 0, got lambda0 = {}",
                b.lambda0
            ))),
            Some(b) => Ok(b),
        }
    }
}

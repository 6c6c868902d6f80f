use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::noise::NoiseModel;
use crate::spectral::{Domain, DualField};

/// Which terms of the Galerkin equation are active.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[serde(default)]
pub struct Terms {
    pub stokes: bool,
    pub advection: bool,
    pub forcing: bool,
    pub noise: bool,
    /// Evaluate the noise columns at the initial state only.
    pub frozen_noise: bool,
}

impl Default for Terms {
    fn default() -> Self {
        Self::full()
    }
}

impl Terms {
    pub fn full() -> Self {
        Self {
            stokes: true,
            advection: true,
            forcing: true,
            noise: true,
            frozen_noise: false,
        }
    }

    /// Stokes operator and forcing only.
    pub fn linear() -> Self {
        Self {
            advection: false,
            noise: false,
            ..Self::full()
        }
    }

    pub fn deterministic() -> Self {
        Self {
            noise: false,
            ..Self::full()
        }
    }

    /// `du = G(u0) dW`: a Brownian motion in a fixed direction.
    pub fn frozen_noise_only() -> Self {
        Self {
            stokes: false,
            advection: false,
            forcing: false,
            noise: true,
            frozen_noise: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub domain: Domain,
    pub model: NoiseModel,
    /// Time-constant forcing; zero when `None`.
    pub forcing: Option<DualField>,
    pub dt: f64,
    pub horizon: f64,
    pub record_stride: usize,
    pub seed: u64,
    /// Moment exponent, checked against the certified budget.
    pub p: f64,
    pub terms: Terms,
    /// Retain states at every record; otherwise only the final state.
    pub keep_states: bool,
}

impl SimConfig {
    pub fn new(domain: Domain, model: NoiseModel) -> Self {
        Self {
            domain,
            model,
            forcing: None,
            dt: 1e-3,
            horizon: 1.0,
            record_stride: 10,
            seed: 0,
            p: 2.0,
            terms: Terms::full(),
            keep_states: true,
        }
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = dt;
        self
    }

    pub fn with_horizon(mut self, horizon: f64) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.record_stride = stride;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_forcing(mut self, f: DualField) -> Self {
        self.forcing = Some(f);
        self
    }

    pub fn with_terms(mut self, terms: Terms) -> Self {
        self.terms = terms;
        self
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = p;
        self
    }

    pub fn keep_states(mut self, keep: bool) -> Self {
        self.keep_states = keep;
        self
    }

    /// Number of steps, `round(horizon / dt)`.
    pub fn steps(&self) -> usize {
        (self.horizon / self.dt).round() as usize
    }

    pub fn validate(&self) -> Result<()> {
        self.domain.validate()?;
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidParameter(format!("dt = {} must be positive", self.dt)));
        }
        if !(self.horizon >= self.dt) || !self.horizon.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "horizon = {} must be at least dt = {}",
                self.horizon, self.dt
            )));
        }
        if self.record_stride == 0 {
            return Err(Error::InvalidParameter("record_stride must be positive".into()));
        }
        if let Some(f) = &self.forcing {
            if f.cutoff() != self.domain.cutoff {
                return Err(Error::CutoffMismatch {
                    expected: self.domain.cutoff,
                    found: f.cutoff(),
                });
            }
        }
        self.model.validate_for(&self.domain)?;
        match self.model.certified {
            Some(c) => c.budget().check_p(self.p),
            None if self.p != 2.0 => Err(Error::Precondition(format!(
                "p = {} requires a certified noise model",
                self.p
            ))),
            None => Ok(()),
        }
    }

    /// Hex digest identifying every input that affects a trajectory.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!(
            "{:?}|{:?}|{:?}|{:?}|{:?}|{}|{}|{:?}|{}",
            self.domain,
            self.model,
            self.dt,
            self.horizon,
            self.p,
            self.record_stride,
            self.seed,
            self.terms,
            self.keep_states
        ));
        if let Some(f) = &self.forcing {
            for v in f.data() {
                for c in v {
                    h.update(c.re.to_le_bytes());
                    h.update(c.im.to_le_bytes());
                }
            }
        }
        h.finalize()[..16].iter().map(|b| format!("{b:02x}")).collect()
    }
}

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Mean-zero periodic box `[0, Lx) x [0, Ly)` with a square Galerkin cutoff.
///
/// Retained modes are the integer pairs `k != (0, 0)` with
/// `max(|k1|, |k2|) <= cutoff`. The physical wavevector of mode `k` is
/// `(2 pi k1 / Lx, 2 pi k2 / Ly)`.
///
/// `local_radii` describes nested sub-rectangles `O_R`: the rectangle centred
/// in the box with half-widths `R` (clipped to the box). A radius at least
/// half the box side covers that whole direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Domain {
    pub lx: f64,
    pub ly: f64,
    pub cutoff: usize,
    #[serde(default)]
    pub local_radii: Vec<f64>,
}

impl Domain {
    pub fn new(lx: f64, ly: f64, cutoff: usize, local_radii: Vec<f64>) -> Result<Self> {
        let d = Self {
            lx,
            ly,
            cutoff,
            local_radii,
        };
        d.validate()?;
        Ok(d)
    }

    /// The `2 pi`-periodic square box.
    pub fn periodic_2pi(cutoff: usize) -> Self {
        Self {
            lx: 2.0 * PI,
            ly: 2.0 * PI,
            cutoff,
            local_radii: Vec::new(),
        }
    }

    pub fn with_local_radii(mut self, radii: Vec<f64>) -> Result<Self> {
        self.local_radii = radii;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lx.is_finite() && self.lx > 0.0 && self.ly.is_finite() && self.ly > 0.0) {
            return Err(Error::InvalidDomain(format!(
                "box lengths must be positive and finite, got ({}, {})",
                self.lx, self.ly
            )));
        }
        if self.cutoff == 0 {
            return Err(Error::InvalidDomain("cutoff must be at least 1".into()));
        }
        let mut prev = 0.0;
        for &r in &self.local_radii {
            if !(r.is_finite() && r > prev) {
                return Err(Error::InvalidDomain(format!(
                    "local radii must be positive and strictly increasing, got {:?}",
                    self.local_radii
                )));
            }
            prev = r;
        }
        Ok(())
    }

    pub fn area(&self) -> f64 {
        self.lx * self.ly
    }

    pub fn wavevector(&self, k1: i64, k2: i64) -> [f64; 2] {
        [
            2.0 * PI * k1 as f64 / self.lx,
            2.0 * PI * k2 as f64 / self.ly,
        ]
    }

    /// Poincare constant `C = min |kappa|^2` over nonzero modes.
    pub fn poincare_constant(&self) -> f64 {
        let a = (2.0 * PI / self.lx).powi(2);
        let b = (2.0 * PI / self.ly).powi(2);
        a.min(b)
    }

    /// Bounds `([x0, x1], [y0, y1])` of the sub-rectangle `O_R`.
    pub fn region(&self, index: usize) -> Result<([f64; 2], [f64; 2])> {
        let r = *self
            .local_radii
            .get(index)
            .ok_or(Error::UnknownRegion {
                index,
                available: self.local_radii.len(),
            })?;
        let span = |len: f64| {
            let c = 0.5 * len;
            [(c - r).max(0.0), (c + r).min(len)]
        };
        Ok((span(self.lx), span(self.ly)))
    }

    /// Number of retained complex modes, `(2n + 1)^2 - 1`.
    pub fn mode_count(&self) -> usize {
        let side = 2 * self.cutoff + 1;
        side * side - 1
    }
}

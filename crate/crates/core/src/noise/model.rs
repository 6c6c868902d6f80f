use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::Domain;

/// One real Fourier term `cos * cos(kappa.x) + sin * sin(kappa.x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefMode {
    pub k: [i64; 2],
    #[serde(default)]
    pub cos: f64,
    #[serde(default)]
    pub sin: f64,
}

/// Smooth periodic scalar coefficient: a constant plus finitely many modes.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefField {
    #[serde(default)]
    pub constant: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub modes: Vec<CoefMode>,
}

impl CoefField {
    pub fn constant(c: f64) -> Self {
        Self {
            constant: c,
            modes: Vec::new(),
        }
    }

    pub fn with_mode(mut self, k: [i64; 2], cos: f64, sin: f64) -> Self {
        self.modes.push(CoefMode { k, cos, sin });
        self
    }

    pub fn is_constant(&self) -> bool {
        self.modes.iter().all(|m| m.cos == 0.0 && m.sin == 0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.constant == 0.0 && self.is_constant()
    }

    /// Largest `max(|k1|, |k2|)` among the active modes.
    pub fn bandwidth(&self) -> usize {
        self.modes
            .iter()
            .filter(|m| m.cos != 0.0 || m.sin != 0.0)
            .map(|m| m.k[0].unsigned_abs().max(m.k[1].unsigned_abs()) as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, d: &Domain, x: f64, y: f64) -> f64 {
        self.modes.iter().fold(self.constant, |acc, m| {
            let [kx, ky] = d.wavevector(m.k[0], m.k[1]);
            let ph = kx * x + ky * y;
            acc + m.cos * ph.cos() + m.sin * ph.sin()
        })
    }

    pub fn grad(&self, d: &Domain, x: f64, y: f64) -> [f64; 2] {
        self.modes.iter().fold([0.0, 0.0], |acc, m| {
            let [kx, ky] = d.wavevector(m.k[0], m.k[1]);
            let ph = kx * x + ky * y;
            let s = -m.cos * ph.sin() + m.sin * ph.cos();
            [acc[0] + s * kx, acc[1] + s * ky]
        })
    }
}

/// One noise channel `g_i(u) = (b_i . grad) u + c_i u`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseChannel {
    #[serde(default)]
    pub bx: CoefField,
    #[serde(default)]
    pub by: CoefField,
    #[serde(default)]
    pub c: CoefField,
}

impl NoiseChannel {
    pub fn multiplicative(c: f64) -> Self {
        Self {
            c: CoefField::constant(c),
            ..Default::default()
        }
    }

    pub fn advective(bx: f64, by: f64) -> Self {
        Self {
            bx: CoefField::constant(bx),
            by: CoefField::constant(by),
            ..Default::default()
        }
    }

    /// Constant coefficients make the channel diagonal in Fourier space.
    pub fn is_constant(&self) -> bool {
        self.bx.is_constant() && self.by.is_constant() && self.c.is_constant()
    }

    pub fn is_zero(&self) -> bool {
        self.bx.is_zero() && self.by.is_zero() && self.c.is_zero()
    }

    pub fn bandwidth(&self) -> usize {
        self.bx
            .bandwidth()
            .max(self.by.bandwidth())
            .max(self.c.bandwidth())
    }

    pub fn b_at(&self, d: &Domain, x: f64, y: f64) -> [f64; 2] {
        [self.bx.eval(d, x, y), self.by.eval(d, x, y)]
    }

    pub fn div_b_at(&self, d: &Domain, x: f64, y: f64) -> f64 {
        self.bx.grad(d, x, y)[0] + self.by.grad(d, x, y)[1]
    }
}

/// Dissipativity budget `(eta, lambda0, rho)`: `|G(u)|_HS^2 <= (2 - eta)||u||^2 + lambda0 |u|^2 + rho`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Budget {
    pub eta: f64,
    pub lambda0: f64,
    pub rho: f64,
}

impl Budget {
    pub fn validate(&self) -> Result<()> {
        if !(self.eta > 0.0 && self.eta <= 2.0) {
            return Err(Error::InvalidParameter(format!(
                "eta = {} outside (0, 2]",
                self.eta
            )));
        }
        if !(self.lambda0 >= 0.0 && self.rho >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "lambda0 = {} and rho = {} must be nonnegative",
                self.lambda0, self.rho
            )));
        }
        Ok(())
    }

    /// Right-hand side `(2 - eta) ||u||^2 + lambda0 |u|^2 + rho`.
    pub fn bound(&self, v2: f64, h2: f64) -> f64 {
        (2.0 - self.eta) * v2 + self.lambda0 * h2 + self.rho
    }

    /// Upper end (exclusive) of the admissible moment exponents `p`.
    pub fn p_upper(&self) -> f64 {
        if self.eta >= 2.0 {
            f64::INFINITY
        } else {
            2.0 + self.eta / (2.0 - self.eta)
        }
    }

    /// Checks `p in [2, 2 + eta / (2 - eta))`.
    pub fn check_p(&self, p: f64) -> Result<()> {
        if !(p >= 2.0 && p < self.p_upper()) {
            return Err(Error::InvalidParameter(format!(
                "moment exponent condition violated: p = {p} must satisfy 2 <= p < 2 + eta/(2 - eta) = {}",
                self.p_upper()
            )));
        }
        Ok(())
    }
}

/// Verified constants of a noise model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub c1: f64,
    pub a_hat: f64,
    pub eta: f64,
    pub lambda0: f64,
    pub rho: f64,
    pub l_hat: f64,
}

impl Certificate {
    pub fn budget(&self) -> Budget {
        Budget {
            eta: self.eta,
            lambda0: self.lambda0,
            rho: self.rho,
        }
    }
}

/// Truncated gradient-dependent multiplicative noise
/// `G(u) h = sum_i [(b_i . grad) u + c_i u] h_i` over `m` channels.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct NoiseModel {
    #[serde(default, rename = "channel")]
    pub channels: Vec<NoiseChannel>,
    /// Budget declared by the model author; verified, not trusted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<Budget>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certified: Option<Certificate>,
}

impl NoiseModel {
    pub fn new(channels: Vec<NoiseChannel>) -> Self {
        Self {
            channels,
            budget: None,
            certified: None,
        }
    }

    /// `m` channels that are all identically zero.
    pub fn zero(m: usize) -> Self {
        Self::new(vec![NoiseChannel::default(); m])
    }

    /// Single channel `c u`.
    pub fn multiplicative(c: f64) -> Self {
        Self::new(vec![NoiseChannel::multiplicative(c)])
    }

    /// Single channel `beta d/dx u`.
    pub fn advective_x(beta: f64) -> Self {
        Self::new(vec![NoiseChannel::advective(beta, 0.0)])
    }

    pub fn with_budget(mut self, b: Budget) -> Self {
        self.budget = Some(b);
        self
    }

    pub fn m(&self) -> usize {
        self.channels.len()
    }

    pub fn bandwidth(&self) -> usize {
        self.channels.iter().map(|c| c.bandwidth()).max().unwrap_or(0)
    }

    /// First `m` channels (zero channels appended if `m` exceeds the count).
    pub fn truncated(&self, m: usize) -> NoiseModel {
        let mut channels: Vec<_> = self.channels.iter().take(m).cloned().collect();
        channels.resize(m, NoiseChannel::default());
        NoiseModel::new(channels)
    }

    pub fn is_zero(&self) -> bool {
        self.channels.iter().all(|c| c.is_zero())
    }

    /// True when no channel depends on `grad u`.
    pub fn is_gradient_free(&self) -> bool {
        self.channels
            .iter()
            .all(|c| c.bx.is_zero() && c.by.is_zero())
    }

    /// Points per direction used for sup norms and ellipticity.
    pub fn eval_grid_size(&self) -> usize {
        (16 * (self.bandwidth() + 1)).max(64)
    }

    /// `C1 = sum_i (|b_i|_inf^2 + |div b_i|_inf^2 + |c_i|_inf^2)` with sup
    /// norms taken over a uniform evaluation grid.
    pub fn c1(&self, d: &Domain) -> f64 {
        let g = self.eval_grid_size();
        self.channels
            .iter()
            .map(|ch| {
                let (mut b2, mut db2, mut c2) = (0.0f64, 0.0f64, 0.0f64);
                for j1 in 0..g {
                    let x = j1 as f64 * d.lx / g as f64;
                    for j2 in 0..g {
                        let y = j2 as f64 * d.ly / g as f64;
                        let b = ch.b_at(d, x, y);
                        b2 = b2.max(b[0] * b[0] + b[1] * b[1]);
                        db2 = db2.max(ch.div_b_at(d, x, y).powi(2));
                        c2 = c2.max(ch.c.eval(d, x, y).powi(2));
                    }
                }
                b2 + db2 + c2
            })
            .sum()
    }

    pub fn validate_for(&self, d: &Domain) -> Result<()> {
        if self.bandwidth() > d.cutoff {
            return Err(Error::InvalidParameter(format!(
                "noise coefficient bandwidth {} exceeds the cutoff {}",
                self.bandwidth(),
                d.cutoff
            )));
        }
        if let Some(b) = &self.budget {
            b.validate()?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c1_of_constant_channels() {
        let d = Domain::periodic_2pi(4);
        let m = NoiseModel::new(vec![
            NoiseChannel::advective(0.3, 0.4),
            NoiseChannel::multiplicative(-0.5),
        ]);
        assert!((m.c1(&d) - (0.25 + 0.25)).abs() < 1e-15);
    }

    #[test]
    fn c1_includes_divergence_of_b() {
        let d = Domain::periodic_2pi(4);
        // b = (sin x, 0): |b|_inf = 1, div b = cos x with sup 1.
        let ch = NoiseChannel {
            bx: CoefField::default().with_mode([1, 0], 0.0, 1.0),
            ..Default::default()
        };
        let m = NoiseModel::new(vec![ch]);
        assert!((m.c1(&d) - 2.0).abs() < 1e-12);
        assert_eq!(m.bandwidth(), 1);
        assert!(!m.channels[0].is_constant());
    }

    #[test]
    fn p_condition() {
        let b = Budget { eta: 1.0, lambda0: 0.0, rho: 0.0 };
        assert!(b.check_p(2.0).is_ok());
        assert!(b.check_p(2.999).is_ok());
        let err = b.check_p(10.0).unwrap_err().to_string();
        assert!(err.contains("moment exponent condition") && err.contains("= 3"), "{err}");
        assert!(b.check_p(1.5).is_err());
        let b2 = Budget { eta: 2.0, lambda0: 1.0, rho: 0.0 };
        assert!(b2.check_p(50.0).is_ok());
    }

    #[test]
    fn model_file_round_trip() {
        let text = r#"
[[channel]]
c = { constant = 0.5 }

[[channel]]
bx = { constant = 0.2, modes = [{ k = [0, 1], cos = 0.1 }] }

[budget]
eta = 1.5
lambda0 = 0.0
rho = 0.0
"#;
        let m: NoiseModel = toml::from_str(text).unwrap();
        assert_eq!(m.m(), 2);
        assert_eq!(m.channels[1].bx.modes[0].k, [0, 1]);
        assert_eq!(m.budget.unwrap().eta, 1.5);
        let back: NoiseModel = toml::from_str(&toml::to_string(&m).unwrap()).unwrap();
        assert_eq!(back, m);
    }
}

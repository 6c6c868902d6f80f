use serde::{Deserialize, Serialize};

use super::ensemble::Ensemble;
use super::report::mean_stderr;
use crate::error::{Error, Result};
use crate::spectral::Space;

/// Base times per path used by the increment scan.
const MAX_BASE_TIMES: usize = 16;

/// Log-linear fit `E|u(tau + theta) - u(tau)|_{V'} ~ C theta^sigma`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AldousFit {
    pub thetas: Vec<f64>,
    pub means: Vec<f64>,
    pub stderrs: Vec<f64>,
    pub c: f64,
    pub sigma: f64,
    pub base_times: usize,
    pub pass: bool,
}

/// Increment moments over a deterministic grid of base times `tau`.
///
/// Every `theta` must be a positive multiple of the record spacing and at
/// most `T/2`. Passes when the fitted exponent is at least 0.45.
pub fn increment_moment_scan(space: &Space, ens: &Ensemble, thetas: &[f64]) -> Result<AldousFit> {
    let tr0 = &ens.trajectories[0];
    if tr0.states.len() != tr0.times.len() || tr0.times.len() < 3 {
        return Err(Error::InsufficientSnapshots {
            needed: 3,
            have: tr0.states.len(),
        });
    }
    if thetas.len() < 2 {
        return Err(Error::InvalidParameter("need at least two theta values".into()));
    }
    let h = tr0.times[1] - tr0.times[0];
    let horizon = *tr0.times.last().unwrap();
    let mut offsets = Vec::with_capacity(thetas.len());
    for &th in thetas {
        if !(th > 0.0 && th <= 0.5 * horizon * (1.0 + 1e-12)) {
            return Err(Error::InvalidParameter(format!("theta = {th} outside (0, T/2]")));
        }
        let q = (th / h).round() as usize;
        if q == 0 || (q as f64 * h - th).abs() > 1e-9 * th {
            return Err(Error::InvalidParameter(format!(
                "theta = {th} is not a multiple of the record spacing {h}"
            )));
        }
        offsets.push(q);
    }
    let last = tr0.times.len() - 1;
    let qmax = *offsets.iter().max().unwrap();
    let span = last - qmax;
    let nb = (span + 1).min(MAX_BASE_TIMES);
    let bases: Vec<usize> = (0..nb).map(|i| i * span / (nb - 1).max(1)).collect();

    let scale = ens
        .trajectories
        .iter()
        .flat_map(|tr| tr.states.iter())
        .map(|u| space.vprime_norm(u.modes()))
        .fold(0.0, f64::max);
    let mut means = Vec::new();
    let mut stderrs = Vec::new();
    for &q in &offsets {
        let per_path: Vec<f64> = ens
            .trajectories
            .iter()
            .map(|tr| {
                bases
                    .iter()
                    .map(|&r| space.vprime_norm(tr.states[r + q].sub(&tr.states[r]).modes()))
                    .sum::<f64>()
                    / bases.len() as f64
            })
            .collect();
        let (m, se) = mean_stderr(&per_path);
        means.push(m);
        stderrs.push(se);
    }
    if scale == 0.0 || means.iter().any(|&m| m <= 1e-13 * scale) {
        return Err(Error::DegenerateFit("increments are below round-off".into()));
    }
    let xs: Vec<f64> = thetas.iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> = means.iter().map(|m| m.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("theta grid has a single value".into()));
    }
    let sigma = sxy / sxx;
    let c = (my - sigma * mx).exp();
    Ok(AldousFit {
        thetas: thetas.to_vec(),
        means,
        stderrs,
        c,
        sigma,
        base_times: bases.len(),
        pass: sigma >= 0.45,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrator::{SimConfig, Simulator, Terms};
    use crate::noise::NoiseModel;
    use crate::spectral::Domain;

    fn scan(model: NoiseModel, terms: Terms, paths: usize) -> Result<AldousFit> {
        let cfg = SimConfig::new(Domain::periodic_2pi(4), model)
            .with_terms(terms)
            .with_dt(1e-3)
            .with_horizon(0.4)
            .with_stride(1);
        let sim = Simulator::new(cfg).unwrap();
        let u0 = sim.space().single_mode(1, 0, 1.0, 0.0);
        let ens = Ensemble::run(&sim, &u0, paths).unwrap();
        increment_moment_scan(sim.space(), &ens, &[0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2])
    }

    #[test]
    fn drift_only_scales_linearly() {
        let f = scan(NoiseModel::zero(1), Terms::linear(), 2).unwrap();
        assert!((f.sigma - 1.0).abs() < 0.05, "{}", f.sigma);
    }

    #[test]
    fn brownian_control_scales_with_square_root() {
        let f = scan(NoiseModel::multiplicative(0.5), Terms::frozen_noise_only(), 64).unwrap();
        assert!((f.sigma - 0.5).abs() < 0.05, "{}", f.sigma);
        assert!(f.pass);
    }

    #[test]
    fn zero_dynamics_is_degenerate() {
        let t = Terms {
            stokes: false,
            ..Terms::linear()
        };
        assert!(matches!(scan(NoiseModel::zero(1), t, 2), Err(Error::DegenerateFit(_))));
    }
}

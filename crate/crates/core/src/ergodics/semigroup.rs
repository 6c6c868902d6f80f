use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::observables::Observable;
use super::occupation::EmpiricalMeasure;
use crate::diagnostics::mean_stderr;
use crate::error::{Error, Result};
use crate::integrator::{SimConfig, Simulator};
use crate::spectral::SpectralField;

/// Simulator for `cfg` with horizon `t`, recording only the endpoints.
fn horizon_simulator(cfg: &SimConfig, t: f64) -> Result<Simulator> {
    let steps = (t / cfg.dt).round().max(1.0) as usize;
    Simulator::new(
        cfg.clone()
            .with_horizon(t)
            .with_stride(steps)
            .keep_states(false),
    )
}

/// Evolves each start by `t`; start `i` uses stream `stream_base + i`.
/// Paths that blow up give `None`.
pub fn evolve_many(
    cfg: &SimConfig,
    starts: &[SpectralField],
    t: f64,
    stream_base: u64,
) -> Result<Vec<Option<SpectralField>>> {
    if t == 0.0 {
        return Ok(starts.iter().cloned().map(Some).collect());
    }
    let sim = horizon_simulator(cfg, t)?;
    starts
        .par_iter()
        .enumerate()
        .map(|(i, u)| match sim.run(u, stream_base + i as u64) {
            Ok(tr) => Ok(Some(tr.last)),
            Err(Error::BlowUp { .. }) => Ok(None),
            Err(e) => Err(e),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemigroupEstimate {
    pub t: f64,
    pub names: Vec<String>,
    pub means: Vec<f64>,
    pub stderrs: Vec<f64>,
    pub paths: usize,
    pub excluded: usize,
}

/// Monte-Carlo `P_t phi(u0)` over `paths` independent streams.
pub fn semigroup_estimate(
    cfg: &SimConfig,
    u0: &SpectralField,
    t: f64,
    observables: &[Observable],
    paths: usize,
) -> Result<SemigroupEstimate> {
    if paths < 2 {
        return Err(Error::InvalidParameter("semigroup estimate needs at least 2 paths".into()));
    }
    let space = crate::spectral::Space::new(cfg.domain.clone())?;
    let starts = vec![u0.clone(); paths];
    let ends: Vec<SpectralField> = evolve_many(cfg, &starts, t, 0)?.into_iter().flatten().collect();
    let excluded = paths - ends.len();
    if ends.len() < 2 {
        return Err(Error::EmptySamples);
    }
    let (means, stderrs) = observables
        .iter()
        .map(|o| {
            let v: Vec<f64> = ends.iter().map(|u| o.eval(&space, u)).collect();
            mean_stderr(&v)
        })
        .unzip();
    Ok(SemigroupEstimate {
        t,
        names: observables.iter().map(|o| o.name.clone()).collect(),
        means,
        stderrs,
        paths: ends.len(),
        excluded,
    })
}

/// Two-sample Kolmogorov-Smirnov statistic `sup_x |F_a(x) - F_b(x)|`.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Kolmogorov survival function `Q(lambda) = P(K > lambda)`.
pub fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.18 {
        let pi2 = std::f64::consts::PI.powi(2);
        let s: f64 = (1..=20)
            .map(|j| {
                let k = (2 * j - 1) as f64;
                (-k * k * pi2 / (8.0 * lambda * lambda)).exp()
            })
            .sum();
        (1.0 - (2.0 * std::f64::consts::PI).sqrt() / lambda * s).clamp(0.0, 1.0)
    } else {
        let s: f64 = (1..=100)
            .map(|j| {
                let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
                sign * (-2.0 * (j * j) as f64 * lambda * lambda).exp()
            })
            .sum();
        (2.0 * s).clamp(0.0, 1.0)
    }
}

/// Asymptotic two-sample KS p-value with the Stephens small-sample
/// correction; exactly 1 when `d = 0`.
pub fn ks_p_value(d: f64, na: usize, nb: usize) -> f64 {
    if d == 0.0 {
        return 1.0;
    }
    let ne = (na * nb) as f64 / (na + nb) as f64;
    let s = ne.sqrt();
    kolmogorov_q((s + 0.12 + 0.11 / s) * d)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvarianceResult {
    pub t: f64,
    pub names: Vec<String>,
    pub statistics: Vec<f64>,
    /// Raw per-observable p-values.
    pub p_values: Vec<f64>,
    /// Bonferroni-corrected `min(1, K p)`.
    pub adjusted: Vec<f64>,
    pub restarts: usize,
    pub excluded: usize,
    pub pass: bool,
}

/// Stream offset of restart paths, disjoint from ensemble streams.
pub const RESTART_STREAM_BASE: u64 = 1 << 32;

/// Restarts `restarts` retained states, evolves each by `t` with fresh noise
/// and compares observable samples before and after with two-sample KS
/// tests. Passes when every Bonferroni-corrected p-value exceeds 0.01.
pub fn invariance_test(
    cfg: &SimConfig,
    measure: &EmpiricalMeasure,
    t: f64,
    observables: &[Observable],
    restarts: usize,
) -> Result<InvarianceResult> {
    let have = measure.snapshots.len();
    if have < restarts || restarts == 0 {
        return Err(Error::InsufficientSnapshots {
            needed: restarts.max(1),
            have,
        });
    }
    let space = crate::spectral::Space::new(cfg.domain.clone())?;
    let starts: Vec<SpectralField> = (0..restarts)
        .map(|i| measure.snapshots[i * have / restarts].clone())
        .collect();
    let ends: Vec<SpectralField> = evolve_many(cfg, &starts, t, RESTART_STREAM_BASE)?
        .into_iter()
        .flatten()
        .collect();
    let k = observables.len() as f64;
    let mut statistics = Vec::new();
    let mut p_values = Vec::new();
    for o in observables {
        let before: Vec<f64> = starts.iter().map(|u| o.eval(&space, u)).collect();
        let after: Vec<f64> = ends.iter().map(|u| o.eval(&space, u)).collect();
        let d = ks_statistic(&before, &after);
        statistics.push(d);
        p_values.push(ks_p_value(d, before.len(), after.len()));
    }
    let adjusted: Vec<f64> = p_values.iter().map(|p| (p * k).min(1.0)).collect();
    let pass = adjusted.iter().all(|&p| p > 0.01);
    Ok(InvarianceResult {
        t,
        names: observables.iter().map(|o| o.name.clone()).collect(),
        statistics,
        p_values,
        adjusted,
        restarts,
        excluded: restarts - ends.len(),
        pass,
    })
}

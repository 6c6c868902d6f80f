use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::observables::Observable;
use super::semigroup::evolve_many;
use crate::diagnostics::mean_stderr;
use crate::error::{Error, Result};
use crate::integrator::{SimConfig, Simulator};
use crate::spectral::{Space, SpectralField};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FellerRow {
    pub k1: i64,
    pub k2: i64,
    pub kappa: f64,
    /// `|P_t phi(u0 + eps e_k) - P_t phi(u0)|`.
    pub diff: f64,
    /// Standard error of the paired (common random numbers) difference.
    pub paired_stderr: f64,
    /// `sqrt(se_a^2 + se_b^2)` of the two estimates taken separately.
    pub pooled_stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FellerTable {
    pub t: f64,
    pub eps: f64,
    pub paths: usize,
    pub rows: Vec<FellerRow>,
    /// Each entry at most the previous one plus twice its pooled stderr.
    pub nonincreasing: bool,
    /// Final entry at most twice its pooled stderr.
    pub final_small: bool,
    pub pass: bool,
}

/// Weak continuity of `P_t phi` along the weakly null sequence
/// `u0 + eps e_{k_n}` (unit-norm single modes of increasing frequency).
/// Path `i` uses stream `i` for every start (common random numbers).
pub fn feller_experiment(
    cfg: &SimConfig,
    u0: &SpectralField,
    t: f64,
    phi: &Observable,
    eps: f64,
    schedule: &[(i64, i64)],
    paths: usize,
) -> Result<FellerTable> {
    let space = Space::new(cfg.domain.clone())?;
    let n = space.cutoff() as i64;
    if let Some(&(k1, k2)) = schedule.iter().find(|(a, b)| a.abs().max(b.abs()) > n || (*a, *b) == (0, 0)) {
        return Err(Error::InvalidParameter(format!(
            "schedule mode ({k1}, {k2}) is zero or exceeds the cutoff {n}"
        )));
    }
    let kap: Vec<f64> = schedule
        .iter()
        .map(|&(a, b)| space.kappa2(space.index(a, b)).sqrt())
        .collect();
    if kap.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("schedule frequencies must increase".into()));
    }
    if paths < 2 {
        return Err(Error::InvalidParameter("need at least 2 paths".into()));
    }
    let base_vals = values(cfg, &space, u0, t, phi, paths)?;
    let mut rows = Vec::with_capacity(schedule.len());
    for (&(k1, k2), &kappa) in schedule.iter().zip(&kap) {
        let mut un = u0.clone();
        un.axpy(eps, &space.single_mode(k1, k2, 1.0, 0.0));
        let vals = values(cfg, &space, &un, t, phi, paths)?;
        let (mut d, mut a, mut b) = (Vec::new(), Vec::new(), Vec::new());
        for (x, y) in vals.iter().zip(&base_vals) {
            if let (Some(x), Some(y)) = (x, y) {
                d.push(x - y);
                a.push(*x);
                b.push(*y);
            }
        }
        let (md, sd) = mean_stderr(&d);
        let pooled = (mean_stderr(&a).1.powi(2) + mean_stderr(&b).1.powi(2)).sqrt();
        rows.push(FellerRow {
            k1,
            k2,
            kappa,
            diff: md.abs(),
            paired_stderr: sd,
            pooled_stderr: pooled,
        });
    }
    let nonincreasing = rows
        .windows(2)
        .all(|w| w[1].diff <= w[0].diff + 2.0 * w[1].pooled_stderr);
    let final_small = rows
        .last()
        .is_none_or(|r| r.diff <= 2.0 * r.pooled_stderr);
    Ok(FellerTable {
        t,
        eps,
        paths,
        rows,
        nonincreasing,
        final_small,
        pass: nonincreasing && final_small,
    })
}

fn values(
    cfg: &SimConfig,
    space: &Space,
    u0: &SpectralField,
    t: f64,
    phi: &Observable,
    paths: usize,
) -> Result<Vec<Option<f64>>> {
    let starts = vec![u0.clone(); paths];
    Ok(evolve_many(cfg, &starts, t, 0)?
        .into_iter()
        .map(|u| u.map(|u| phi.eval(space, &u)))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityPoint {
    pub delta: f64,
    /// `E sup_t |u_a(t) - u_b(t)|_H` over recorded times.
    pub mean_sup: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityCurve {
    pub points: Vec<StabilityPoint>,
    /// `mean_sup(delta_j) / mean_sup(delta_{j+1})` for consecutive deltas.
    pub ratios: Vec<f64>,
    pub monotone: bool,
    /// Every ratio at least the corresponding `delta` ratio.
    pub proportional: bool,
    pub vanishing: bool,
    pub pass: bool,
}

/// Relative slack when comparing reduction ratios against the halving
/// factor (round-off in forming `u0 + delta h`).
const RATIO_RTOL: f64 = 1e-6;

/// Coupled pairs from `u0` and `u0 + delta h` (`|h|_H = 1`) for each
/// `delta` (strictly decreasing), `paths` streams each.
///
/// Passes when the curve decreases at least in proportion to `delta`
/// (up to round-off) and its last value is below `3 stderr` plus the linear
/// prediction from the first point.
pub fn continuous_dependence_experiment(
    cfg: &SimConfig,
    u0: &SpectralField,
    direction: &SpectralField,
    deltas: &[f64],
    paths: usize,
) -> Result<StabilityCurve> {
    if deltas.windows(2).any(|w| w[1] >= w[0]) || deltas.iter().any(|d| *d < 0.0) {
        return Err(Error::InvalidParameter("deltas must be nonnegative and strictly decreasing".into()));
    }
    let hn = direction.h_norm();
    if hn == 0.0 {
        return Err(Error::InvalidParameter("direction must be nonzero".into()));
    }
    let h = direction.scaled(1.0 / hn);
    let sim = Simulator::new(cfg.clone().keep_states(true))?;
    let mut points = Vec::with_capacity(deltas.len());
    for &delta in deltas {
        let mut ub = u0.clone();
        ub.axpy(delta, &h);
        let sups: Vec<Result<f64>> = (0..paths as u64)
            .into_par_iter()
            .map(|i| {
                let (a, b) = sim.coupled_pair(u0, &ub, i)?;
                Ok(a.sup_distance(&b))
            })
            .collect();
        let sups: Vec<f64> = sups.into_iter().collect::<Result<_>>()?;
        let (m, se) = mean_stderr(&sups);
        points.push(StabilityPoint {
            delta,
            mean_sup: m,
            stderr: se,
        });
    }
    let ratios: Vec<f64> = points
        .windows(2)
        .map(|w| w[0].mean_sup / w[1].mean_sup)
        .collect();
    let monotone = points.windows(2).all(|w| w[1].mean_sup <= w[0].mean_sup);
    let proportional = points.windows(2).zip(&ratios).all(|(w, r)| {
        w[0].mean_sup == 0.0 || *r >= (w[0].delta / w[1].delta) * (1.0 - RATIO_RTOL)
    });
    let vanishing = match (points.first(), points.last()) {
        (Some(f), Some(l)) if f.delta > 0.0 => {
            l.mean_sup <= f.mean_sup * (l.delta / f.delta) * 1.5 + 3.0 * l.stderr
        }
        (Some(_), Some(l)) => l.mean_sup == 0.0,
        _ => true,
    };
    Ok(StabilityCurve {
        points,
        ratios,
        monotone,
        proportional,
        vanishing,
        pass: monotone && proportional && vanishing,
    })
}

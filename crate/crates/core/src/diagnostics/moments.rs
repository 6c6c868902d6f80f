use serde::{Deserialize, Serialize};

use super::ensemble::Ensemble;
use super::report::mean_stderr;
use crate::error::{Error, Result};

/// Mean and stderr of `sup_t |u(t)|^p` and of `int_0^T |u|^{p-2} ||u||^2 ds`,
/// both at record resolution.
pub fn p_moment(ens: &Ensemble, p: f64) -> ((f64, f64), (f64, f64)) {
    let sups: Vec<f64> = ens
        .trajectories
        .iter()
        .map(|tr| tr.ledger.rows.iter().map(|r| r.h2.powf(0.5 * p)).fold(0.0, f64::max))
        .collect();
    let ints: Vec<f64> = ens
        .trajectories
        .iter()
        .map(|tr| {
            tr.ledger
                .rows
                .windows(2)
                .map(|w| w[0].h2.powf(0.5 * p - 1.0) * w[0].v2 * (w[1].t - w[0].t))
                .sum()
        })
        .collect();
    (mean_stderr(&sups), mean_stderr(&ints))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub p: f64,
    /// `[cutoff n, cutoff 2n]`.
    pub cutoffs: [usize; 2],
    pub sup_moment: [f64; 2],
    pub sup_stderr: [f64; 2],
    pub integral_moment: [f64; 2],
    pub integral_stderr: [f64; 2],
    /// Relative change `|x_2n - x_n| / x_n` of the two moments.
    pub rel_change: [f64; 2],
    pub pass: bool,
}

/// p-th moment bounds, stable when both moments are finite and move by less
/// than 15% from cutoff `n` (`coarse`) to `2n` (`fine`).
pub fn p_moment_report(coarse: &Ensemble, fine: &Ensemble, p: f64) -> Result<MomentReport> {
    let b = coarse
        .budget
        .ok_or_else(|| Error::Precondition("noise model is not certified".into()))?;
    b.check_p(p)?;
    let (s0, i0) = p_moment(coarse, p);
    let (s1, i1) = p_moment(fine, p);
    let rel = |a: f64, b: f64| if a == b { 0.0 } else { (b - a).abs() / a.abs() };
    let rel_change = [rel(s0.0, s1.0), rel(i0.0, i1.0)];
    let finite = [s0.0, s1.0, i0.0, i1.0].iter().all(|x| x.is_finite());
    Ok(MomentReport {
        p,
        cutoffs: [coarse.cutoff, fine.cutoff],
        sup_moment: [s0.0, s1.0],
        sup_stderr: [s0.1, s1.1],
        integral_moment: [i0.0, i1.0],
        integral_stderr: [i0.1, i1.1],
        rel_change,
        pass: finite && rel_change.iter().all(|&r| r < 0.15),
    })
}

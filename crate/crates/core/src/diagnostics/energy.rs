use super::ensemble::Ensemble;
use super::report::{mean_stderr, EstimateReport};
use crate::error::{Error, Result};
use crate::integrator::{Simulator, Trajectory};
use crate::spectral::SpectralField;

/// Per-path defect of the p = 2 Ito identity at row `r`:
/// `|u(t)|^2 - |u0|^2 - int_0^t (-2 ||u||^2 + 2 <f, u> + |G(u)|_HS^2) ds`.
fn ito_defect(tr: &Trajectory, r: usize) -> f64 {
    let row = &tr.ledger.rows[r];
    let h0 = tr.ledger.rows[0].h2;
    row.h2 - h0 - (-2.0 * row.int_v2 + 2.0 * row.int_fu + row.int_hs)
}

/// Two-sided check of the ensemble-mean Ito energy identity at every
/// recorded time: `|mean defect| <= 3 stderr + bias`.
pub fn ito_balance_report(ens: &Ensemble, bias: f64) -> EstimateReport {
    let rows = ens.trajectories[0].ledger.rows.len();
    let points = (0..rows)
        .map(|r| {
            let d: Vec<f64> = ens.trajectories.iter().map(|t| ito_defect(t, r)).collect();
            let (m, se) = mean_stderr(&d);
            (ens.trajectories[0].ledger.rows[r].t, m.abs(), 0.0, se, true)
        })
        .collect();
    EstimateReport::build("ito_energy_balance", points, bias, ens.meta())
}

/// Ito balance at `dt` with its discretisation bias measured by dt-halving
/// on shared Brownian paths: `bias = 2 |mean(D_dt - D_{dt/2})|` at the final
/// time, where `D` is the per-path defect. Also returns the ensemble at `dt`.
pub fn ito_balance_halving(sim: &Simulator, u0: &SpectralField, paths: usize) -> Result<(EstimateReport, Ensemble)> {
    let fine = Simulator::new(sim.config().clone().with_dt(sim.config().dt / 2.0))?;
    let coarse = Ensemble::run_coarsened(sim, u0, paths, 2)?;
    let fine = Ensemble::run(&fine, u0, paths)?;
    let diffs: Vec<f64> = coarse
        .trajectories
        .iter()
        .filter_map(|ta| {
            let tb = fine.trajectories.iter().find(|tb| tb.stream == ta.stream)?;
            Some(ito_defect(ta, ta.ledger.rows.len() - 1) - ito_defect(tb, tb.ledger.rows.len() - 1))
        })
        .collect();
    if diffs.is_empty() {
        return Err(Error::EmptySamples);
    }
    let bias = 2.0 * mean_stderr(&diffs).0.abs();
    Ok((ito_balance_report(&coarse, bias), coarse))
}

/// `E|u(t)|^2 + (eta/2) E int_0^t ||u||^2 <= |u0|^2 + (2/eta) |f|_{V'}^2 t + rho t`
/// at every recorded `t`.
pub fn poincare_energy_report(ens: &Ensemble, bias: f64) -> Result<EstimateReport> {
    let b = ens.dissipative_budget()?;
    let h0 = ens.initial_energy();
    let rows = ens.trajectories[0].ledger.rows.len();
    let points = (0..rows)
        .map(|r| {
            let left: Vec<f64> = ens
                .trajectories
                .iter()
                .map(|tr| {
                    let row = &tr.ledger.rows[r];
                    row.h2 + 0.5 * b.eta * row.int_v2
                })
                .collect();
            let (m, se) = mean_stderr(&left);
            let t = ens.trajectories[0].ledger.rows[r].t;
            let right = h0 + (2.0 / b.eta) * ens.forcing_vprime_sq * t + b.rho * t;
            (t, m, right, se, true)
        })
        .collect();
    Ok(EstimateReport::build("poincare_energy", points, bias, ens.meta()))
}

/// Whether the mean left side of the Poincaré estimate is nonincreasing
/// between consecutive records within 3 paired standard errors.
pub fn poincare_left_is_monotone(ens: &Ensemble) -> Result<bool> {
    let b = ens.dissipative_budget()?;
    let rows = ens.trajectories[0].ledger.rows.len();
    let left = |tr: &Trajectory, r: usize| {
        let row = &tr.ledger.rows[r];
        row.h2 + 0.5 * b.eta * row.int_v2
    };
    Ok((1..rows).all(|r| {
        let d: Vec<f64> = ens.trajectories.iter().map(|tr| left(tr, r) - left(tr, r - 1)).collect();
        let (m, se) = mean_stderr(&d);
        m <= 3.0 * se + 1e-12 * ens.initial_energy()
    }))
}

/// Chebyshev bound on the time-averaged exceedance probability,
/// `(1/(T R^2)) (2/(C eta)) |u0|^2 + (1/R^2) (2/(C eta)) ((2/eta) |f|_{V'}^2 + rho)`.
pub fn chebyshev_bound(r: f64, horizon: f64, poincare: f64, eta: f64, u0_h2: f64, f_vprime_sq: f64, rho: f64) -> f64 {
    let k = 2.0 / (poincare * eta);
    k * u0_h2 / (horizon * r * r) + k * ((2.0 / eta) * f_vprime_sq + rho) / (r * r)
}

/// Empirical `(1/T) int_0^T 1{|u(s)|_H > R} ds` (left-point sums at record
/// resolution) against [`chebyshev_bound`] for each `R`.
pub fn chebyshev_bound_check(ens: &Ensemble, radii: &[f64]) -> Result<EstimateReport> {
    let b = ens.dissipative_budget()?;
    if radii.is_empty() || radii.iter().any(|r| !(*r > 0.0)) {
        return Err(Error::InvalidParameter("radii must be positive and nonempty".into()));
    }
    let h0 = ens.initial_energy();
    let points = radii
        .iter()
        .map(|&r| {
            let fr: Vec<f64> = ens
                .trajectories
                .iter()
                .map(|tr| {
                    let rows = &tr.ledger.rows;
                    let total = rows.last().unwrap().t;
                    rows.windows(2)
                        .filter(|w| w[0].h2 > r * r)
                        .map(|w| w[1].t - w[0].t)
                        .sum::<f64>()
                        / total
                })
                .collect();
            let (m, se) = mean_stderr(&fr);
            let bound = chebyshev_bound(r, ens.horizon, ens.poincare, b.eta, h0, ens.forcing_vprime_sq, b.rho);
            (r, m, bound, se, bound < 1.0)
        })
        .collect();
    Ok(EstimateReport::build("chebyshev_exceedance", points, 0.0, ens.meta()))
}

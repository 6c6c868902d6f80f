use super::observables::Observable;
use crate::diagnostics::mean_stderr;
use crate::error::{Error, Result};
use crate::integrator::Trajectory;
use crate::spectral::{Space, SpectralField};

/// Krylov-Bogoliubov time averages `(1/(T - T0)) int_{T0}^T phi(u(s)) ds` over
/// one or more independent paths, with retained restart states.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalMeasure {
    pub names: Vec<String>,
    pub bounds: Vec<Option<f64>>,
    /// Path-averaged time averages, one per observable.
    pub averages: Vec<f64>,
    /// Per path, per observable: observable values at the window records.
    pub series: Vec<Vec<Vec<f64>>>,
    /// Record widths in the window (left-point rule).
    pub weights: Vec<f64>,
    pub snapshots: Vec<SpectralField>,
    pub burn_in: f64,
    pub horizon: f64,
}

fn window(traj: &Trajectory, burn_in: f64) -> Result<usize> {
    if traj.states.len() != traj.times.len() {
        return Err(Error::InsufficientSnapshots {
            needed: traj.times.len(),
            have: traj.states.len(),
        });
    }
    let horizon = traj.final_time();
    if !(burn_in >= 0.0 && burn_in < horizon) {
        return Err(Error::HorizonTooShort(format!(
            "burn-in {burn_in} must lie in [0, {horizon})"
        )));
    }
    let first = traj
        .times
        .iter()
        .position(|&t| t >= burn_in - 1e-12 * horizon)
        .unwrap_or(traj.times.len());
    if traj.times.len() - first < 2 {
        return Err(Error::HorizonTooShort("fewer than two records after burn-in".into()));
    }
    Ok(first)
}

/// Occupation measure of one trajectory; keeps `snapshots` evenly spaced
/// window states.
pub fn kb_occupation(
    space: &Space,
    traj: &Trajectory,
    burn_in: f64,
    observables: &[Observable],
    snapshots: usize,
) -> Result<EmpiricalMeasure> {
    kb_occupation_paths(space, std::slice::from_ref(traj), burn_in, observables, snapshots)
}

/// Occupation measure averaged over independent trajectories of equal
/// length; keeps `snapshots_per_path` evenly spaced window states from each.
pub fn kb_occupation_paths(
    space: &Space,
    trajs: &[Trajectory],
    burn_in: f64,
    observables: &[Observable],
    snapshots_per_path: usize,
) -> Result<EmpiricalMeasure> {
    let first_traj = trajs.first().ok_or(Error::EmptySamples)?;
    let first = window(first_traj, burn_in)?;
    let times = &first_traj.times[first..];
    // The final record closes the last interval; it carries no weight.
    let weights: Vec<f64> = times.windows(2).map(|w| w[1] - w[0]).collect();
    let total: f64 = weights.iter().sum();
    let mut series = Vec::with_capacity(trajs.len());
    let mut snaps = Vec::new();
    let mut sums = vec![0.0; observables.len()];
    for tr in trajs {
        if tr.times.len() != first_traj.times.len() {
            return Err(Error::InvalidParameter("trajectories differ in length".into()));
        }
        window(tr, burn_in)?;
        let states = &tr.states[first..tr.states.len() - 1];
        let per_obs: Vec<Vec<f64>> = observables
            .iter()
            .map(|o| states.iter().map(|u| o.eval(space, u)).collect())
            .collect();
        for (s, vals) in sums.iter_mut().zip(&per_obs) {
            *s += vals.iter().zip(&weights).map(|(v, w)| v * w).sum::<f64>() / total;
        }
        series.push(per_obs);
        let len = states.len();
        let k = snapshots_per_path.min(len);
        for i in 0..k {
            let idx = if k == 1 { len - 1 } else { i * (len - 1) / (k - 1) };
            snaps.push(states[idx].clone());
        }
    }
    let averages = sums.iter().map(|s| s / trajs.len() as f64).collect();
    Ok(EmpiricalMeasure {
        names: observables.iter().map(|o| o.name.clone()).collect(),
        bounds: observables.iter().map(|o| o.bound()).collect(),
        averages,
        series,
        weights,
        snapshots: snaps,
        burn_in,
        horizon: first_traj.final_time(),
    })
}

impl EmpiricalMeasure {
    /// Time average of observable `obs` on path `path` over records
    /// `[lo, hi)` of the window.
    pub fn partial_average(&self, path: usize, obs: usize, lo: usize, hi: usize) -> f64 {
        let v = &self.series[path][obs][lo..hi];
        let w = &self.weights[lo..hi];
        v.iter().zip(w).map(|(a, b)| a * b).sum::<f64>() / w.iter().sum::<f64>()
    }

    /// Batch-means estimate (mean, stderr) of observable `obs` on path
    /// `path` over `batches` contiguous batches of records in `[lo, hi)`.
    pub fn batch_means(&self, path: usize, obs: usize, lo: usize, hi: usize, batches: usize) -> (f64, f64) {
        let len = hi - lo;
        let b = batches.min(len).max(1);
        let avgs: Vec<f64> = (0..b)
            .map(|i| self.partial_average(path, obs, lo + i * len / b, lo + (i + 1) * len / b))
            .collect();
        mean_stderr(&avgs)
    }

    /// Averages of the two disjoint halves of the window on path `path`,
    /// each with a batch-means stderr.
    pub fn halves(&self, path: usize, obs: usize, batches: usize) -> [(f64, f64); 2] {
        let len = self.weights.len();
        [
            self.batch_means(path, obs, 0, len / 2, batches),
            self.batch_means(path, obs, len / 2, len, batches),
        ]
    }
}

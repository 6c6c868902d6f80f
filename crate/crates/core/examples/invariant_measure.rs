//! Krylov-Bogoliubov occupation measure over independent paths, followed by
//! the restart-and-compare invariance test; a no-burn-in run from a large
//! initial state serves as the negative control.
//!
//! `cargo run --example invariant_measure`

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use snsim::ergodics::{invariance_test, kb_occupation_paths, Observable};
use snsim::integrator::{single_mode_forcing, SimConfig, Simulator};
use snsim::noise::{certified, NoiseChannel, NoiseModel};
use snsim::spectral::{Domain, Space};

pub fn run_example() -> snsim::Result<()> {
    let d = Domain::periodic_2pi(5);
    let s = Space::new(d.clone())?;
    let m = NoiseModel::new(vec![NoiseChannel::advective(0.7, 0.0), NoiseChannel::advective(0.0, 0.7)]);
    let mut f = single_mode_forcing(&s, 1, 0, 3.0).into_modes();
    f.axpy(1.0, single_mode_forcing(&s, 0, 1, 3.0).modes());
    let base = SimConfig::new(d.clone(), certified(&m, &d, 1)?)
        .with_forcing(snsim::spectral::DualField::from_modes(f))
        .with_dt(1e-2);
    let obs = Observable::catalog(&s, 1.0);

    for (label, horizon, burn_in, norm) in [("stationary", 20.0, 8.0, 1.0), ("no burn-in", 1.0, 0.0, 20.0)] {
        let cfg = base.clone().with_horizon(horizon).with_stride(10);
        let sim = Simulator::new(cfg.clone())?;
        let u0 = s.random_field(&mut ChaCha8Rng::seed_from_u64(2), 1.0, norm);
        let trajs = sim.ensemble(&u0, 16).into_iter().collect::<snsim::Result<Vec<_>>>()?;
        let mu = kb_occupation_paths(&s, &trajs, burn_in, &obs, 5)?;
        let r = invariance_test(&cfg, &mu, 2.0, &obs, 80)?;
        println!("{label}:");
        for i in 0..obs.len() {
            println!(
                "  {:<20} average {:+.3}  KS D = {:.3}  adjusted p = {:.3}",
                r.names[i], mu.averages[i], r.statistics[i], r.adjusted[i]
            );
        }
        println!("  pass = {}", r.pass);
    }
    Ok(())
}

fn main() -> snsim::Result<()> {
    run_example()
}

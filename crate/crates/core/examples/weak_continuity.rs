//! Weak continuity of the transition semigroup along `u0 + eps e_k` with
//! `|k|` growing, and Lipschitz dependence of coupled pairs on the initial
//! data.
//!
//! `cargo run --example weak_continuity`

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use snsim::ergodics::{continuous_dependence_experiment, feller_experiment, Observable};
use snsim::integrator::SimConfig;
use snsim::noise::{certified, NoiseChannel, NoiseModel};
use snsim::spectral::{Domain, Space};

pub fn run_example() -> snsim::Result<()> {
    let d = Domain::periodic_2pi(6);
    let s = Space::new(d.clone())?;
    let m = NoiseModel::new(vec![NoiseChannel::advective(0.7, 0.0), NoiseChannel::advective(0.0, 0.7)]);
    let cfg = SimConfig::new(d.clone(), certified(&m, &d, 1)?).with_dt(5e-3);
    let u0 = s.random_field(&mut ChaCha8Rng::seed_from_u64(3), 1.0, 1.0);

    let phi = Observable::catalog(&s, 1.0).remove(0);
    let schedule: Vec<(i64, i64)> = (1..=6).map(|k| (k, 0)).collect();
    let t = feller_experiment(&cfg, &u0, 0.5, &phi, 1.0, &schedule, 64)?;
    println!("|P_t phi(u0 + e_k) - P_t phi(u0)| at t = 0.5:");
    for r in &t.rows {
        println!("  k = ({}, {})  diff = {:.3e}  pooled se = {:.1e}", r.k1, r.k2, r.diff, r.pooled_stderr);
    }
    println!("  pass = {}", t.pass);

    let dir = s.random_field(&mut ChaCha8Rng::seed_from_u64(4), 1.0, 1.0);
    let deltas: Vec<f64> = (0..5).map(|j| 1e-2 / 2f64.powi(j)).collect();
    let c = continuous_dependence_experiment(&cfg.with_horizon(1.0), &u0, &dir, &deltas, 16)?;
    println!("E sup_t |u_a - u_b| against delta:");
    for p in &c.points {
        println!("  delta = {:.3e}  {:.3e}", p.delta, p.mean_sup);
    }
    println!("  reductions per halving = {:?}", c.ratios);
    Ok(())
}

fn main() -> snsim::Result<()> {
    run_example()
}

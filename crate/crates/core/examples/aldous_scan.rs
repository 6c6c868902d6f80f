//! Increment-moment scan `E|u(s + theta) - u(s)| ~ C theta^sigma` for a pure
//! drift and a Brownian control, then for the full stochastic model.
//!
//! `cargo run --example aldous_scan`

use snsim::diagnostics::{increment_moment_scan, Ensemble};
use snsim::integrator::{SimConfig, Simulator, Terms};
use snsim::noise::NoiseModel;
use snsim::spectral::Domain;

fn scan(label: &str, model: NoiseModel, terms: Terms, paths: usize) -> snsim::Result<()> {
    let cfg = SimConfig::new(Domain::periodic_2pi(4), model)
        .with_terms(terms)
        .with_dt(1e-3)
        .with_horizon(0.4)
        .with_stride(1);
    let sim = Simulator::new(cfg)?;
    let u0 = sim.space().single_mode(1, 0, 1.0, 0.0);
    let ens = Ensemble::run(&sim, &u0, paths)?;
    let fit = increment_moment_scan(sim.space(), &ens, &[0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2])?;
    println!("{label:<18} sigma = {:.3}  C = {:.3e}", fit.sigma, fit.c);
    Ok(())
}

pub fn run_example() -> snsim::Result<()> {
    scan("drift only", NoiseModel::zero(1), Terms::linear(), 2)?;
    scan("Brownian control", NoiseModel::multiplicative(0.5), Terms::frozen_noise_only(), 32)?;
    scan("full model", NoiseModel::advective_x(0.7), Terms::full(), 32)
}

fn main() -> snsim::Result<()> {
    run_example()
}

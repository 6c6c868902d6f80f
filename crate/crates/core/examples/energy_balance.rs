//! Ensemble energy diagnostics for a certified transport-noise model: the
//! Ito balance (with dt-halving bias), the Poincare budget, Chebyshev
//! exceedance bounds and p-th moments across a cutoff doubling.
//!
//! `cargo run --example energy_balance`

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use snsim::diagnostics::{chebyshev_bound_check, ito_balance_halving, p_moment_report, poincare_energy_report, Ensemble};
use snsim::integrator::{single_mode_forcing, SimConfig, Simulator};
use snsim::noise::{certified, NoiseChannel, NoiseModel};
use snsim::spectral::{Domain, Space};

fn model(d: &Domain) -> snsim::Result<NoiseModel> {
    let m = NoiseModel::new(vec![NoiseChannel::advective(0.7, 0.0), NoiseChannel::advective(0.0, 0.7)]);
    certified(&m, d, 1)
}

pub fn run_example() -> snsim::Result<()> {
    let d = Domain::periodic_2pi(6);
    let s = Space::new(d.clone())?;
    let base = SimConfig::new(d.clone(), model(&d)?)
        .with_dt(5e-3)
        .with_horizon(2.0)
        .with_stride(40)
        .keep_states(false);
    let u0 = s.random_field(&mut ChaCha8Rng::seed_from_u64(1), 1.0, 2.0);

    let forced = Simulator::new(base.clone().with_forcing(single_mode_forcing(&s, 1, 0, 2.0)))?;
    let (ito, ens) = ito_balance_halving(&forced, &u0, 32)?;
    println!("Ito balance: bias = {:.3e}, pass = {}", ito.bias, ito.pass);
    let cheb = chebyshev_bound_check(&ens, &[1.0, 2.0, 4.0])?;
    for r in &cheb.rows {
        println!("  R = {:3.1}: exceedance {:.3} <= bound {:.3}", r.x, r.left, r.right);
    }

    let free = Ensemble::run(&Simulator::new(base.clone())?, &u0, 32)?;
    let p = poincare_energy_report(&free, 0.0)?;
    let last = p.rows.last().unwrap();
    println!("Poincare budget at t = {}: {:.4} <= {:.4}, pass = {}", last.x, last.left, last.right, p.pass);

    let mut fine = base.clone();
    fine.domain.cutoff *= 2;
    let fine_ens = Ensemble::run(&Simulator::new(fine)?, &u0.resampled(12), 32)?;
    let m = p_moment_report(&free, &fine_ens, 2.5)?;
    println!("p = 2.5 moments: relative change under cutoff doubling = {:?}", m.rel_change);
    Ok(())
}

fn main() -> snsim::Result<()> {
    run_example()
}

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use snsim::diagnostics::{chebyshev_bound_check, poincare_left_is_monotone, Ensemble};
use snsim::ergodics::{kb_occupation, semigroup_estimate, Observable};
use snsim::integrator::{single_mode_forcing, SimConfig, Simulator};
use snsim::noise::{certified, NoiseChannel, NoiseModel};
use snsim::spectral::{Domain, DualField, Space};

fn translation_config(n: usize) -> SimConfig {
    let d = Domain::periodic_2pi(n);
    let m = NoiseModel::new(vec![NoiseChannel::advective(0.7, 0.0), NoiseChannel::advective(0.0, 0.7)]);
    SimConfig::new(d.clone(), certified(&m, &d, 1).unwrap())
}

fn forcing(s: &Space) -> DualField {
    let mut m = single_mode_forcing(s, 1, 0, 3.0).into_modes();
    m.axpy(1.0, single_mode_forcing(s, 0, 1, 3.0).modes());
    m.axpy(1.0, single_mode_forcing(s, 1, 2, 2.0).modes());
    DualField::from_modes(m)
}

/// Two disjoint half-windows of one long run agree within three combined
/// batch-means standard errors.
#[test]
fn occupation_halves_agree() {
    let s = Space::new(Domain::periodic_2pi(6)).unwrap();
    let cfg = translation_config(6)
        .with_forcing(forcing(&s))
        .with_dt(1e-2)
        .with_horizon(220.0)
        .with_stride(10)
        .with_seed(4);
    let sim = Simulator::new(cfg).unwrap();
    let u0 = s.random_field(&mut ChaCha8Rng::seed_from_u64(2), 1.0, 1.0);
    let tr = sim.run(&u0, 0).unwrap();
    let obs = Observable::catalog(&s, 1.0);
    let mu = kb_occupation(&s, &tr, 20.0, &obs, 10).unwrap();
    for (o, name) in mu.names.iter().enumerate() {
        let [(a, sa), (b, sb)] = mu.halves(0, o, 10);
        let tol = 3.0 * (sa * sa + sb * sb).sqrt();
        assert!((a - b).abs() <= tol, "{name}: {a} vs {b} (tol {tol})");
        assert!(mu.averages[o].abs() <= mu.bounds[o].unwrap());
    }
}

#[test]
fn chebyshev_exceedance_is_exactly_monotone_in_radius() {
    let s = Space::new(Domain::periodic_2pi(5)).unwrap();
    let cfg = translation_config(5)
        .with_forcing(forcing(&s))
        .with_dt(1e-2)
        .with_horizon(5.0)
        .with_stride(2)
        .keep_states(false);
    let sim = Simulator::new(cfg).unwrap();
    let u0 = s.random_field(&mut ChaCha8Rng::seed_from_u64(3), 1.0, 3.0);
    let ens = Ensemble::run(&sim, &u0, 16).unwrap();
    let radii: Vec<f64> = (1..40).map(|i| 0.25 * i as f64).collect();
    let r = chebyshev_bound_check(&ens, &radii).unwrap();
    assert!(r.rows.windows(2).all(|w| w[1].left <= w[0].left && w[1].right <= w[0].right));
    assert!(r.pass);
}

#[test]
fn unforced_energy_mean_is_monotone() {
    let cfg = translation_config(6).with_dt(1e-2).with_horizon(4.0).with_stride(10).keep_states(false);
    let sim = Simulator::new(cfg).unwrap();
    let u0 = sim.space().random_field(&mut ChaCha8Rng::seed_from_u64(5), 1.0, 2.0);
    let ens = Ensemble::run(&sim, &u0, 64).unwrap();
    assert!(poincare_left_is_monotone(&ens).unwrap());
}

#[test]
fn semigroup_means_stay_within_observable_bounds() {
    let s = Space::new(Domain::periodic_2pi(5)).unwrap();
    let cfg = translation_config(5).with_forcing(forcing(&s)).with_dt(1e-2);
    let u0 = s.random_field(&mut ChaCha8Rng::seed_from_u64(6), 1.0, 5.0);
    let obs = Observable::catalog(&s, 0.5);
    for t in [0.0, 0.3, 1.0] {
        let e = semigroup_estimate(&cfg, &u0, t, &obs, 16).unwrap();
        for (m, o) in e.means.iter().zip(&obs) {
            assert!(m.abs() <= o.bound().unwrap());
        }
    }
}

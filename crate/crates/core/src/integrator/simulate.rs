use log::warn;
use rayon::prelude::*;

use super::config::SimConfig;
use super::trajectory::{EnergyLedger, LedgerRow, Trajectory};
use super::wiener::WienerStream;
use crate::error::{Error, Result};
use crate::noise::{Budget, NoiseColumns, NoiseOperator};
use crate::spectral::{DualField, Space, SpectralField};

/// A validated [`SimConfig`] bound to its discretisation.
///
/// Steps with the integrating-factor Euler-Maruyama update
/// `u+ = exp(-|kappa|^2 dt) [u + dt (f - B(u, u)) + sum_i g_i(u) dW_i]`,
/// which is exact for the Stokes part and Ito-explicit in the noise.
#[derive(Debug, Clone)]
pub struct Simulator {
    cfg: SimConfig,
    space: Space,
    noise: NoiseOperator,
    forcing: SpectralField,
    decay: Vec<f64>,
    budget: Option<Budget>,
    hash: String,
}

impl Simulator {
    pub fn new(cfg: SimConfig) -> Result<Self> {
        cfg.validate()?;
        let space = Space::new(cfg.domain.clone())?;
        let noise = NoiseOperator::new(&cfg.model, &space)?;
        let forcing = match &cfg.forcing {
            Some(f) if cfg.terms.forcing => space.leray_project(f.modes()),
            _ => SpectralField::zeros(space.cutoff()),
        };
        let side = space.side();
        let decay = (0..side * side)
            .map(|i| {
                if cfg.terms.stokes {
                    (-space.kappa2(i) * cfg.dt).exp()
                } else {
                    1.0
                }
            })
            .collect();
        let budget = cfg.model.certified.map(|c| c.budget());
        if let Some(b) = budget {
            if b.lambda0 > 0.0 && cfg.dt > 0.1 / b.lambda0 {
                warn!("dt = {} exceeds the noise guard 0.1/lambda0 = {}", cfg.dt, 0.1 / b.lambda0);
            }
        }
        let hash = cfg.hash();
        Ok(Self {
            cfg,
            space,
            noise,
            forcing,
            decay,
            budget,
            hash,
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.cfg
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn noise(&self) -> &NoiseOperator {
        &self.noise
    }

    /// The Leray-projected forcing actually applied.
    pub fn forcing(&self) -> &SpectralField {
        &self.forcing
    }

    pub fn noise_columns(&self, u: &SpectralField) -> NoiseColumns {
        self.noise.columns(&self.space, u)
    }

    /// One step from `u` with increments `dw` (length `m`).
    pub fn galerkin_step(&self, u: &SpectralField, dw: &[f64]) -> SpectralField {
        let cols = self.noise_columns(u);
        self.step_with(u, &cols, dw, self.cfg.dt)
    }

    fn step_with(&self, u: &SpectralField, cols: &NoiseColumns, dw: &[f64], dt: f64) -> SpectralField {
        let t = &self.cfg.terms;
        let mut m = u.modes().clone();
        if t.advection {
            m.axpy(-dt, self.space.nonlinear_self(u).modes());
        }
        m.axpy(dt, self.forcing.modes());
        if t.noise {
            for (g, w) in cols.0.iter().zip(dw) {
                m.axpy(*w, g.modes());
            }
        }
        if dt == self.cfg.dt {
            for (v, e) in m.data_mut().iter_mut().zip(&self.decay) {
                v[0] *= e;
                v[1] *= e;
            }
        } else if t.stokes {
            for (i, v) in m.data_mut().iter_mut().enumerate() {
                let e = (-self.space.kappa2(i) * dt).exp();
                v[0] *= e;
                v[1] *= e;
            }
        }
        self.space.leray_project(&m)
    }

    fn check_state(&self, u0: &SpectralField) -> Result<()> {
        if u0.cutoff() != self.space.cutoff() {
            return Err(Error::CutoffMismatch {
                expected: self.space.cutoff(),
                found: u0.cutoff(),
            });
        }
        Ok(())
    }

    fn cfl_guard(&self, u: &SpectralField) -> bool {
        if !self.cfg.terms.advection {
            return true;
        }
        let sup = u.data().iter().map(|v| v[0].norm() + v[1].norm()).sum::<f64>()
            / self.space.domain().area().sqrt();
        self.cfg.dt * self.space.max_kappa2().sqrt() * sup <= 0.5
    }

    fn row(&self, t: f64, u: &SpectralField, cols: &NoiseColumns, acc: &Accum) -> LedgerRow {
        LedgerRow {
            t,
            h2: u.h_norm_sq(),
            v2: self.space.v_seminorm_sq(u),
            fu: self.forcing.inner(u),
            hs: cols.hs_norm_sq(),
            mart: acc.mart,
            int_v2: acc.int_v2,
            int_fu: acc.int_fu,
            int_hs: acc.int_hs,
        }
    }

    /// Runs path `stream` from `u0`.
    pub fn run(&self, u0: &SpectralField, stream: u64) -> Result<Trajectory> {
        self.run_coarsened(u0, stream, 1)
    }

    /// Runs path `stream` with each increment the sum of `factor` draws at
    /// `dt / factor`, so that a run at `dt / factor` on the same stream sees
    /// the same Brownian path.
    pub fn run_coarsened(&self, u0: &SpectralField, stream: u64, factor: usize) -> Result<Trajectory> {
        let mut wiener = WienerStream::new(self.cfg.seed, stream);
        let mut paths = [Path::new(self, u0, stream)?];
        self.drive(&mut paths, &mut wiener, factor.max(1))?;
        let [p] = paths;
        Ok(p.finish(self))
    }

    /// Two paths driven by the same Wiener stream in lockstep.
    pub fn coupled_pair(
        &self,
        a: &SpectralField,
        b: &SpectralField,
        stream: u64,
    ) -> Result<(Trajectory, Trajectory)> {
        let mut wiener = WienerStream::new(self.cfg.seed, stream);
        let mut paths = [Path::new(self, a, stream)?, Path::new(self, b, stream)?];
        self.drive(&mut paths, &mut wiener, 1)?;
        let [pa, pb] = paths;
        Ok((pa.finish(self), pb.finish(self)))
    }

    /// `paths` independent runs from `u0` on streams `0..paths`, in parallel.
    pub fn ensemble(&self, u0: &SpectralField, paths: usize) -> Vec<Result<Trajectory>> {
        (0..paths as u64)
            .into_par_iter()
            .map(|i| self.run(u0, i))
            .collect()
    }

    fn drive<const K: usize>(&self, paths: &mut [Path; K], wiener: &mut WienerStream, factor: usize) -> Result<()> {
        let steps = self.cfg.steps();
        let stride = self.cfg.record_stride;
        let m = self.noise.m();
        let dt = self.cfg.dt;
        let mut dw = vec![0.0; m];
        let mut sub = vec![0.0; m];
        let mut warned = false;
        for p in paths.iter_mut() {
            if !self.cfl_guard(&p.u) {
                warn!("dt = {dt} violates the advective step guard at t = 0");
                warned = true;
            }
        }
        for j in 0..steps {
            if m > 0 {
                dw.iter_mut().for_each(|w| *w = 0.0);
                for _ in 0..factor {
                    wiener.fill(dt / factor as f64, &mut sub)?;
                    dw.iter_mut().zip(&sub).for_each(|(w, s)| *w += s);
                }
            }
            let t = j as f64 * dt;
            for p in paths.iter_mut() {
                let cols = p.columns(self);
                let h2 = p.u.h_norm_sq();
                let v2 = self.space.v_seminorm_sq(&p.u);
                let hs = cols.hs_norm_sq();
                if let Some(b) = self.budget {
                    let bound = b.bound(v2, h2);
                    if hs > bound * (1.0 + 1e-9) + 1e-300 {
                        return Err(Error::BudgetViolation { step: j, time: t, hs, budget: bound });
                    }
                }
                if j % stride == 0 {
                    let row = self.row(t, &p.u, &cols, &p.acc);
                    p.record(t, row, self.cfg.keep_states);
                    p.acc.mart = 0.0;
                    if !warned && !self.cfl_guard(&p.u) {
                        warn!("dt = {dt} violates the advective step guard at t = {t}");
                        warned = true;
                    }
                }
                p.acc.mart += cols.0.iter().zip(&dw).map(|(g, w)| w * p.u.inner(g)).sum::<f64>();
                p.acc.int_v2 += dt * v2;
                p.acc.int_fu += dt * self.forcing.inner(&p.u);
                p.acc.int_hs += dt * hs;
                let next = self.step_with(&p.u, &cols, &dw, dt);
                if !next.is_finite() {
                    return Err(Error::BlowUp {
                        step: j + 1,
                        time: (j + 1) as f64 * dt,
                        last_finite: p.ledger.rows.iter().rev().find(|r| r.is_finite()).copied(),
                    });
                }
                p.u = next;
            }
        }
        let t = steps as f64 * dt;
        for p in paths.iter_mut() {
            let cols = p.columns(self);
            let row = self.row(t, &p.u, &cols, &p.acc);
            p.record(t, row, self.cfg.keep_states);
        }
        Ok(())
    }
}

#[derive(Debug, Default, Clone, Copy)]
struct Accum {
    mart: f64,
    int_v2: f64,
    int_fu: f64,
    int_hs: f64,
}

struct Path {
    u: SpectralField,
    frozen: Option<NoiseColumns>,
    times: Vec<f64>,
    states: Vec<SpectralField>,
    ledger: EnergyLedger,
    acc: Accum,
    stream: u64,
}

impl Path {
    fn new(sim: &Simulator, u0: &SpectralField, stream: u64) -> Result<Self> {
        sim.check_state(u0)?;
        let frozen = sim.cfg.terms.frozen_noise.then(|| sim.noise_columns(u0));
        Ok(Self {
            u: u0.clone(),
            frozen,
            times: Vec::new(),
            states: Vec::new(),
            ledger: EnergyLedger::default(),
            acc: Accum::default(),
            stream,
        })
    }

    /// Active noise columns; empty when the noise term is off.
    fn columns(&self, sim: &Simulator) -> NoiseColumns {
        match &self.frozen {
            _ if !sim.cfg.terms.noise => NoiseColumns(Vec::new()),
            Some(c) => c.clone(),
            None => sim.noise_columns(&self.u),
        }
    }

    fn record(&mut self, t: f64, row: LedgerRow, keep: bool) {
        self.times.push(t);
        if keep {
            self.states.push(self.u.clone());
        }
        self.ledger.rows.push(row);
    }

    fn finish(self, sim: &Simulator) -> Trajectory {
        Trajectory {
            times: self.times,
            states: self.states,
            last: self.u,
            ledger: self.ledger,
            seed: sim.cfg.seed,
            stream: self.stream,
            config_hash: sim.hash.clone(),
        }
    }
}

/// Runs path 0 of `cfg` from `u0`.
pub fn simulate(cfg: &SimConfig, u0: &SpectralField) -> Result<Trajectory> {
    Simulator::new(cfg.clone())?.run(u0, 0)
}

/// Coupled pair on path 0 of `cfg`.
pub fn coupled_pair_simulate(
    cfg: &SimConfig,
    a: &SpectralField,
    b: &SpectralField,
) -> Result<(Trajectory, Trajectory)> {
    Simulator::new(cfg.clone())?.coupled_pair(a, b, 0)
}

/// Forcing with a single mode, as a [`DualField`].
pub fn single_mode_forcing(space: &Space, k1: i64, k2: i64, amplitude: f64) -> DualField {
    DualField::from_modes(space.single_mode(k1, k2, amplitude, 0.0).into_modes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrator::Terms;
    use crate::noise::{Certificate, NoiseModel};
    use crate::spectral::Domain;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cfg(n: usize, model: NoiseModel) -> SimConfig {
        SimConfig::new(Domain::periodic_2pi(n), model)
    }

    #[test]
    fn linear_single_mode_decay_is_exact() {
        let c = cfg(6, NoiseModel::zero(1))
            .with_terms(Terms::linear())
            .with_dt(1e-3)
            .with_horizon(10.0)
            .with_stride(2500)
            .keep_states(true);
        let sim = Simulator::new(c).unwrap();
        let u0 = sim.space().single_mode(1, 1, 1.0, 0.4);
        let tr = sim.run(&u0, 0).unwrap();
        assert_eq!(tr.times.len(), 5);
        for (t, u) in tr.times.iter().zip(&tr.states) {
            let want = u0.scaled((-2.0 * t).exp());
            assert!(u.sub(&want).h_norm() <= 1e-12 * want.h_norm(), "t = {t}");
        }
    }

    #[test]
    fn forced_linear_recursion_matches_closed_form() {
        let n = 4;
        let space = Space::new(Domain::periodic_2pi(n)).unwrap();
        let f = single_mode_forcing(&space, 2, 1, 0.8);
        let dt = 0.01;
        let c = cfg(n, NoiseModel::zero(1))
            .with_terms(Terms::linear())
            .with_dt(dt)
            .with_horizon(3.0)
            .with_stride(50)
            .with_forcing(f.clone());
        let tr = simulate(&c, &SpectralField::zeros(n)).unwrap();
        let a = 5.0 * dt;
        let fk = f.get(2, 1);
        // u_{j+1} = e^{-a} (u_j + dt f) from u_0 = 0.
        let star = (-a).exp() * dt / (1.0 - (-a).exp());
        for (j, u) in tr.states.iter().enumerate() {
            let steps = (j * 50) as i32;
            let scale = star * (1.0 - (-a).exp().powi(steps));
            let got = u.get(2, 1);
            for comp in 0..2 {
                assert!((got[comp] - fk[comp] * scale).norm() < 1e-13);
            }
        }
        // The discrete fixed point is within O(dt) of f / |kappa|^2.
        assert!((star - 0.2).abs() < 0.2 * a);
    }

    #[test]
    fn tiny_step_is_continuous() {
        let space = Space::new(Domain::periodic_2pi(6)).unwrap();
        let f = single_mode_forcing(&space, 1, 2, 1.0);
        let c = cfg(6, NoiseModel::zero(1))
            .with_forcing(f)
            .with_dt(1e-8)
            .with_horizon(1e-8);
        let sim = Simulator::new(c).unwrap();
        let u = sim.space().random_field(&mut ChaCha8Rng::seed_from_u64(2), 1.0, 1.0);
        let dw = [0.0];
        let next = sim.galerkin_step(&u, &dw);
        assert!(next.sub(&u).h_norm() <= 1e-6 * u.h_norm());
    }

    #[test]
    fn zero_data_stays_zero() {
        let tr = simulate(&cfg(4, NoiseModel::multiplicative(0.3)).with_horizon(0.1), &SpectralField::zeros(4)).unwrap();
        assert!(tr.states.iter().all(|u| u.max_abs() == 0.0));
        assert!(tr.ledger.rows.iter().all(|r| r.h2 == 0.0 && r.hs == 0.0));
    }

    #[test]
    fn runs_are_reproducible_and_streams_differ() {
        let c = cfg(6, NoiseModel::advective_x(0.6)).with_horizon(0.2);
        let sim = Simulator::new(c).unwrap();
        let u0 = sim.space().random_field(&mut ChaCha8Rng::seed_from_u64(5), 1.0, 1.0);
        let a = sim.run(&u0, 3).unwrap();
        let b = sim.run(&u0, 3).unwrap();
        assert_eq!(a, b);
        let c = sim.run(&u0, 4).unwrap();
        assert_ne!(a.last, c.last);
    }

    #[test]
    fn taylor_green_energy_decay() {
        let c = cfg(8, NoiseModel::zero(1))
            .with_terms(Terms::deterministic())
            .with_dt(1e-4)
            .with_horizon(1.0)
            .with_stride(1000);
        let sim = Simulator::new(c).unwrap();
        let tg = sim.space().project_physical(|x, y| [x.sin() * y.cos(), -x.cos() * y.sin()]);
        let tr = sim.run(&tg, 0).unwrap();
        let e0 = tg.h_norm_sq();
        for r in &tr.ledger.rows {
            let want = (-4.0 * r.t).exp() * e0;
            assert!((r.h2 - want).abs() <= 1e-6 * want);
        }
    }

    #[test]
    fn coupled_pairs_share_noise() {
        let c = cfg(6, NoiseModel::advective_x(0.6)).with_horizon(0.3);
        let sim = Simulator::new(c).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let u0 = sim.space().random_field(&mut rng, 1.0, 1.0);
        let (a, b) = sim.coupled_pair(&u0, &u0, 2).unwrap();
        assert_eq!(a.states, b.states);
        assert_eq!(a.sup_distance(&b), 0.0);
        assert_eq!(a.last, sim.run(&u0, 2).unwrap().last);
    }

    #[test]
    fn deterministic_energy_is_nonincreasing() {
        let c = cfg(8, NoiseModel::zero(1))
            .with_terms(Terms::deterministic())
            .with_dt(2e-3)
            .with_horizon(1.0)
            .with_stride(1);
        let sim = Simulator::new(c).unwrap();
        let u0 = sim.space().random_field(&mut ChaCha8Rng::seed_from_u64(3), 0.5, 3.0);
        let tr = sim.run(&u0, 0).unwrap();
        for w in tr.ledger.rows.windows(2) {
            assert!(w[1].h2 <= w[0].h2 * (1.0 + 1e-13));
        }
    }

    #[test]
    fn state_invariants_hold_after_steps() {
        let c = cfg(8, NoiseModel::advective_x(0.7)).with_horizon(0.5).with_stride(50);
        let sim = Simulator::new(c).unwrap();
        let u0 = sim.space().random_field(&mut ChaCha8Rng::seed_from_u64(4), 1.0, 2.0);
        let tr = sim.run(&u0, 0).unwrap();
        for u in &tr.states {
            assert!(sim.space().divergence_defect(u.modes()) <= 1e-12 * u.max_abs());
            assert!(u.reality_defect() <= 1e-12 * u.max_abs());
            assert_eq!(u.get(0, 0), [Complex64::new(0.0, 0.0); 2]);
        }
        assert_eq!(tr.times[0], 0.0);
    }

    #[test]
    fn runtime_budget_violation_aborts() {
        let mut model = NoiseModel::advective_x(1.0);
        model.certified = Some(Certificate {
            c1: 1.0,
            a_hat: 1.0,
            eta: 1.5,
            lambda0: 0.0,
            rho: 0.0,
            l_hat: 1.0,
        });
        let c = cfg(4, model).with_horizon(0.01);
        let sim = Simulator::new(c).unwrap();
        let u0 = sim.space().single_mode(1, 0, 1.0, 0.0);
        assert!(matches!(sim.run(&u0, 0), Err(Error::BudgetViolation { step: 0, .. })));
    }

    #[test]
    fn blow_up_reports_last_finite_row() {
        let c = cfg(6, NoiseModel::zero(1))
            .with_terms(Terms::deterministic())
            .with_dt(0.05)
            .with_horizon(20.0)
            .with_stride(1);
        let sim = Simulator::new(c).unwrap();
        let u0 = sim.space().random_field(&mut ChaCha8Rng::seed_from_u64(1), 0.0, 1e4);
        match sim.run(&u0, 0) {
            Err(Error::BlowUp { step, last_finite, .. }) => {
                let row = last_finite.unwrap();
                assert!(row.is_finite() && step > 0);
            }
            other => panic!("expected blow-up, got {other:?}"),
        }
    }

    #[test]
    fn coarsened_stream_reproduces_fine_brownian_path() {
        let base = cfg(4, NoiseModel::multiplicative(0.5))
            .with_terms(Terms::frozen_noise_only())
            .with_horizon(0.5);
        let coarse = Simulator::new(base.clone().with_dt(0.01)).unwrap();
        let fine = Simulator::new(base.with_dt(0.005)).unwrap();
        let u0 = coarse.space().single_mode(1, 2, 1.0, 0.0);
        let a = coarse.run_coarsened(&u0, 1, 2).unwrap();
        let b = fine.run(&u0, 1).unwrap();
        assert!(a.last.sub(&b.last).h_norm() < 1e-12);
        assert!(a.last.sub(&u0).h_norm() > 1e-3);
    }

    #[test]
    fn ledger_accumulates_riemann_sums() {
        let c = cfg(4, NoiseModel::multiplicative(0.4))
            .with_terms(Terms {
                advection: false,
                ..Terms::full()
            })
            .with_dt(0.01)
            .with_horizon(0.5)
            .with_stride(1);
        let sim = Simulator::new(c).unwrap();
        let u0 = sim.space().single_mode(1, 0, 1.0, 0.0);
        let tr = sim.run(&u0, 0).unwrap();
        let rows = &tr.ledger.rows;
        let sum_hs: f64 = rows[..rows.len() - 1].iter().map(|r| 0.01 * r.hs).sum();
        assert!((rows.last().unwrap().int_hs - sum_hs).abs() < 1e-14);
        for r in rows {
            assert!((r.hs - 0.16 * r.h2).abs() < 1e-14 * (1.0 + r.h2));
        }
    }
}

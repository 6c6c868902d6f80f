use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::config::{emit_config, load_config, validate_config, RunConfig};
use super::output::{sha256_hex, OutputDir, RunManifest, SUMMARY_FILE};
use crate::diagnostics::{
    chebyshev_bound_check, increment_moment_scan, ito_balance_halving, ito_balance_report, mean_stderr,
    p_moment_report, poincare_energy_report, poincare_left_is_monotone, Ensemble, EstimateReport,
};
use crate::ergodics::{
    continuous_dependence_experiment, feller_experiment, invariance_test, kb_occupation_paths, EmpiricalMeasure,
};
use crate::error::{Error, Result};
use crate::integrator::{Simulator, Trajectory};
use crate::noise::{certify, certify::probe_fields, NoiseModel, NoiseOperator};
use crate::spectral::{io, Space, SpectralField};

/// Environment variable overriding the config seed (below `--seed`).
pub const SEED_ENV: &str = "SNS_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subcommand {
    CertifyNoise,
    Simulate,
    EnergyReport,
    Moments,
    AldousScan,
    Chebyshev,
    KbEstimate,
    InvarianceTest,
    Feller,
    ContinuousDependence,
}

impl Subcommand {
    pub const ALL: [Subcommand; 10] = [
        Self::CertifyNoise,
        Self::Simulate,
        Self::EnergyReport,
        Self::Moments,
        Self::AldousScan,
        Self::Chebyshev,
        Self::KbEstimate,
        Self::InvarianceTest,
        Self::Feller,
        Self::ContinuousDependence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::CertifyNoise => "certify-noise",
            Self::Simulate => "simulate",
            Self::EnergyReport => "energy-report",
            Self::Moments => "moments",
            Self::AldousScan => "aldous-scan",
            Self::Chebyshev => "chebyshev",
            Self::KbEstimate => "kb-estimate",
            Self::InvarianceTest => "invariance-test",
            Self::Feller => "feller",
            Self::ContinuousDependence => "continuous-dependence",
        }
    }
}

impl fmt::Display for Subcommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Subcommand {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown subcommand `{s}`")))
    }
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub subcommand: Subcommand,
    pub config: PathBuf,
    pub out: PathBuf,
    pub seed: Option<u64>,
    /// Measure the time-step bias by dt-halving on shared Brownian paths.
    pub dt_halving: bool,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub pass: bool,
    pub summary: toml::Table,
    pub manifest: RunManifest,
}

/// Exit status: 0 when every check passed, 2 when a check failed, 1 for
/// usage, configuration and precondition errors.
pub fn exit_code(r: &Result<Outcome>) -> i32 {
    match r {
        Ok(o) if o.pass => 0,
        Ok(_) => 2,
        Err(_) => 1,
    }
}

struct Summary(toml::Table);

impl Summary {
    fn set(&mut self, key: &str, v: impl Into<toml::Value>) {
        self.0.insert(key.into(), v.into());
    }
}

struct Ctx {
    cfg: RunConfig,
    space: Space,
    model: NoiseModel,
    u0: SpectralField,
    dt_halving: bool,
}

impl Ctx {
    fn simulator(&self, keep_states: bool) -> Result<Simulator> {
        Simulator::new(self.cfg.sim_config(self.model.clone())?.keep_states(keep_states))
    }

    fn ensemble(&self, keep_states: bool) -> Result<Ensemble> {
        Ensemble::run(&self.simulator(keep_states)?, &self.u0, self.cfg.run.paths)
    }

    fn require_dissipative(&self) -> Result<()> {
        match self.model.certified {
            Some(c) if c.lambda0 == 0.0 => Ok(()),
            Some(c) => Err(Error::Precondition(format!(
                "this report needs a certified lambda0 = 0 noise model; certified lambda0 = {}",
                c.lambda0
            ))),
            None => Err(Error::Precondition(
                "this report needs a certified noise model (set noise.certify = true)".into(),
            )),
        }
    }
}

fn resolve_seed(cfg_seed: u64, flag: Option<u64>) -> Result<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("{SEED_ENV} = `{v}` is not an unsigned integer"))),
        Err(_) => Ok(cfg_seed),
    }
}

/// Runs one subcommand end to end: loads and validates the config, writes
/// the normalised config, CSVs, `summary.toml` and `manifest.toml` under
/// `opts.out`.
pub fn run(opts: &RunOptions) -> Result<Outcome> {
    let mut cfg = load_config(&opts.config)?;
    cfg.seed = resolve_seed(cfg.seed, opts.seed)?;
    let cfg = validate_config(&cfg).map_err(|e| Error::Config(e.join("\n")))?;
    let snapshot = emit_config(&cfg)?;
    let config_hash = sha256_hex(snapshot.as_bytes())[..32].to_string();

    let mut out = OutputDir::open(&opts.out)?;
    out.write_str("config.toml", &snapshot)?;
    let space = Space::new(cfg.domain.clone())?;
    let u0 = cfg.initial_state(&space)?;

    let mut summary = Summary(toml::Table::new());
    summary.set("subcommand", opts.subcommand.name());
    summary.set("config_hash", config_hash.clone());
    summary.set("seed", cfg.seed as i64);

    let mut model = cfg.noise_model();
    let pass = if opts.subcommand == Subcommand::CertifyNoise {
        certify_noise(&cfg, &space, &model, &mut out, &mut summary)?
    } else {
        if cfg.noise.certify {
            let r = certify(&model, &cfg.domain, cfg.seed)?;
            if !r.pass {
                return Err(Error::Precondition(format!(
                    "noise certification failed: budget violations = {}, linear growth pass = {}, a_hat = {}",
                    r.g3.violations, r.g1.pass, r.ellipticity.a_hat
                )));
            }
            model.certified = Some(r.certificate());
        }
        if let Some(c) = model.certified {
            summary.set("eta", c.eta);
            summary.set("lambda0", c.lambda0);
            summary.set("rho", c.rho);
            summary.set("l_hat", c.l_hat);
        }
        let ctx = Ctx {
            cfg: cfg.clone(),
            space,
            model,
            u0,
            dt_halving: opts.dt_halving,
        };
        match opts.subcommand {
            Subcommand::CertifyNoise => unreachable!(),
            Subcommand::Simulate => simulate_cmd(&ctx, &mut out, &mut summary)?,
            Subcommand::EnergyReport => energy_report(&ctx, &mut out, &mut summary)?,
            Subcommand::Moments => moments(&ctx, &mut out, &mut summary)?,
            Subcommand::AldousScan => aldous_scan(&ctx, &mut out, &mut summary)?,
            Subcommand::Chebyshev => chebyshev(&ctx, &mut out, &mut summary)?,
            Subcommand::KbEstimate => kb_estimate(&ctx, &mut out, &mut summary)?,
            Subcommand::InvarianceTest => invariance(&ctx, &mut out, &mut summary)?,
            Subcommand::Feller => feller(&ctx, &mut out, &mut summary)?,
            Subcommand::ContinuousDependence => continuous_dependence(&ctx, &mut out, &mut summary)?,
        }
    };
    summary.set("pass", pass);
    let text = toml::to_string(&summary.0).map_err(|e| Error::Format(e.to_string()))?;
    out.write_str(SUMMARY_FILE, &text)?;
    let status = if pass { 0 } else { 2 };
    let manifest = out.finish(opts.subcommand.name(), &config_hash, cfg.seed, status)?;
    Ok(Outcome {
        pass,
        summary: summary.0,
        manifest,
    })
}

fn certify_noise(
    cfg: &RunConfig,
    space: &Space,
    model: &NoiseModel,
    out: &mut OutputDir,
    s: &mut Summary,
) -> Result<bool> {
    let r = certify(model, &cfg.domain, cfg.seed)?;
    let op = NoiseOperator::new(model, space)?;
    let b = r.budget;
    out.write_with("certification.csv", |w| {
        writeln!(w, "probe,hs,V2,H2,budget,gap")?;
        for (i, u) in probe_fields(space, cfg.seed, 24, 1.0).iter().enumerate() {
            let hs = op.hs_norm_sq(space, u);
            let rhs = b.bound(space.v_seminorm_sq(u), u.h_norm_sq());
            writeln!(
                w,
                "{i},{:e},{:e},{:e},{:e},{:e}",
                hs,
                space.v_seminorm_sq(u),
                u.h_norm_sq(),
                rhs,
                rhs - hs
            )?;
        }
        Ok(())
    })?;
    s.set("m", r.m as i64);
    s.set("budget_source", r.budget_source.clone());
    s.set("eta", b.eta);
    s.set("lambda0", b.lambda0);
    s.set("rho", b.rho);
    s.set("p_upper", b.p_upper());
    s.set("c1", r.c1);
    s.set("a_hat", r.ellipticity.a_hat);
    s.set("l_hat", r.lipschitz.l_hat);
    s.set("l_hat_below_sqrt2", r.lipschitz.below_sqrt2);
    s.set("g1_c_hat", r.g1.c_hat);
    s.set("g1_pass", r.g1.pass);
    s.set("g3_violations", r.g3.violations as i64);
    s.set("g3_margin", r.g3.margin);
    s.set("probes", r.probes as i64);
    Ok(r.pass)
}

fn write_state(out: &mut OutputDir, stem: &str, u: &SpectralField, binary: bool) -> Result<()> {
    out.write_with(&format!("{stem}.csv"), |w| io::write_csv(u.modes(), w))?;
    if binary {
        out.write_with(&format!("{stem}.bin"), |w| io::write_binary(u.modes(), w))?;
    }
    Ok(())
}

fn simulate_cmd(ctx: &Ctx, out: &mut OutputDir, s: &mut Summary) -> Result<bool> {
    let sim = ctx.simulator(false)?;
    let results = sim.ensemble(&ctx.u0, ctx.cfg.run.paths);
    let mut index = String::from("path,stream,status,final_time,H2,V2\n");
    let mut failed = 0;
    let total = results.len();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(tr) => {
                let (t, h2, v2) = tr.ledger.last().map_or((0.0, 0.0, 0.0), |r| (r.t, r.h2, r.v2));
                index.push_str(&format!("{i},{},ok,{t:e},{h2:e},{v2:e}\n", tr.stream));
                out.write_with(&format!("ledger/path_{i:04}.csv"), |w| tr.ledger.write_csv(w))?;
                write_state(out, &format!("final/path_{i:04}"), &tr.last, ctx.cfg.run.binary_snapshots)?;
            }
            Err(e) => {
                failed += 1;
                let status = match e {
                    Error::BlowUp { .. } => "blow_up",
                    Error::BudgetViolation { .. } => "budget_violation",
                    _ => return Err(e),
                };
                index.push_str(&format!("{i},{i},{status},,,\n"));
                log::warn!("path {i}: {e}");
            }
        }
    }
    out.write_str("run_index.csv", &index)?;
    s.set("paths", total as i64);
    s.set("failed", failed as i64);
    s.set("steps", sim.config().steps() as i64);
    s.set("trajectory_hash", sim.config().hash());
    Ok(failed == 0)
}

fn report_csv(out: &mut OutputDir, name: &str, r: &EstimateReport) -> Result<()> {
    out.write_with(name, |w| r.write_csv(w))
}

fn ensemble_summary(s: &mut Summary, ens: &Ensemble) {
    s.set("paths", ens.len() as i64);
    s.set("excluded", ens.excluded as i64);
}

fn energy_report(ctx: &Ctx, out: &mut OutputDir, s: &mut Summary) -> Result<bool> {
    ctx.require_dissipative()?;
    let sim = ctx.simulator(false)?;
    let (ito, ens) = if ctx.dt_halving {
        ito_balance_halving(&sim, &ctx.u0, ctx.cfg.run.paths)?
    } else {
        let ens = Ensemble::run(&sim, &ctx.u0, ctx.cfg.run.paths)?;
        (ito_balance_report(&ens, 0.0), ens)
    };
    let poincare = poincare_energy_report(&ens, 0.0)?;
    report_csv(out, "ito_balance.csv", &ito)?;
    report_csv(out, "poincare.csv", &poincare)?;
    ensemble_summary(s, &ens);
    s.set("dt_halving", ctx.dt_halving);
    s.set("ito_bias", ito.bias);
    s.set("ito_pass", ito.pass);
    s.set("poincare_pass", poincare.pass);
    s.set("poincare_monotone", poincare_left_is_monotone(&ens)?);
    s.set("initial_energy", ens.initial_energy());
    Ok(ito.pass && poincare.pass)
}

fn moments(ctx: &Ctx, out: &mut OutputDir, s: &mut Summary) -> Result<bool> {
    let coarse = ctx.ensemble(false)?;
    let mut fine_cfg = ctx.cfg.clone();
    fine_cfg.domain.cutoff *= 2;
    let fine_space = Space::new(fine_cfg.domain.clone())?;
    let sim = Simulator::new(fine_cfg.sim_config(ctx.model.clone())?.keep_states(false))?;
    let fine = Ensemble::run(&sim, &ctx.u0.resampled(fine_space.cutoff()), ctx.cfg.run.paths)?;
    let r = p_moment_report(&coarse, &fine, ctx.cfg.run.p)?;
    out.write_with("moments.csv", |w| {
        writeln!(w, "cutoff,sup_moment,sup_stderr,integral_moment,integral_stderr")?;
        for i in 0..2 {
            writeln!(
                w,
                "{},{:e},{:e},{:e},{:e}",
                r.cutoffs[i], r.sup_moment[i], r.sup_stderr[i], r.integral_moment[i], r.integral_stderr[i]
            )?;
        }
        Ok(())
    })?;
    ensemble_summary(s, &coarse);
    s.set("p", r.p);
    s.set("sup_rel_change", r.rel_change[0]);
    s.set("integral_rel_change", r.rel_change[1]);
    Ok(r.pass)
}

fn aldous_scan(ctx: &Ctx, out: &mut OutputDir, s: &mut Summary) -> Result<bool> {
    let ens = ctx.ensemble(true)?;
    let fit = increment_moment_scan(&ctx.space, &ens, &ctx.cfg.experiments.aldous.thetas)?;
    out.write_with("aldous.csv", |w| {
        writeln!(w, "theta,mean_increment,stderr")?;
        for i in 0..fit.thetas.len() {
            writeln!(w, "{:e},{:e},{:e}", fit.thetas[i], fit.means[i], fit.stderrs[i])?;
        }
        Ok(())
    })?;
    ensemble_summary(s, &ens);
    s.set("c", fit.c);
    s.set("sigma", fit.sigma);
    s.set("base_times", fit.base_times as i64);
    Ok(fit.pass)
}

fn chebyshev(ctx: &Ctx, out: &mut OutputDir, s: &mut Summary) -> Result<bool> {
    ctx.require_dissipative()?;
    let ens = ctx.ensemble(false)?;
    let r = chebyshev_bound_check(&ens, &ctx.cfg.experiments.chebyshev.radii)?;
    report_csv(out, "chebyshev.csv", &r)?;
    ensemble_summary(s, &ens);
    s.set("informative_radii", r.rows.iter().filter(|r| r.informative).count() as i64);
    Ok(r.pass)
}

fn occupation(ctx: &Ctx) -> Result<EmpiricalMeasure> {
    let sim = ctx.simulator(true)?;
    let trajs: Vec<Trajectory> = sim
        .ensemble(&ctx.u0, ctx.cfg.run.paths)
        .into_iter()
        .collect::<Result<_>>()?;
    let kb = &ctx.cfg.experiments.kb;
    kb_occupation_paths(&ctx.space, &trajs, kb.burn_in, &ctx.cfg.observables(&ctx.space), kb.snapshots_per_path)
}

fn kb_estimate(ctx: &Ctx, out: &mut OutputDir, s: &mut Summary) -> Result<bool> {
    let mu = occupation(ctx)?;
    let kb = &ctx.cfg.experiments.kb;
    let paths = mu.series.len();
    let mut rows = String::from(
        "observable,average,bound,first_half,first_half_stderr,second_half,second_half_stderr,consistent\n",
    );
    let mut pass = true;
    for (o, name) in mu.names.iter().enumerate() {
        let halves: Vec<[(f64, f64); 2]> = (0..paths).map(|p| mu.halves(p, o, kb.batches)).collect();
        let half = |h: usize| {
            let m = mean_stderr(&halves.iter().map(|x| x[h].0).collect::<Vec<_>>()).0;
            let se = halves.iter().map(|x| x[h].1 * x[h].1).sum::<f64>().sqrt() / paths as f64;
            (m, se)
        };
        let (a, b) = (half(0), half(1));
        let consistent = (a.0 - b.0).abs() <= 3.0 * (a.1 * a.1 + b.1 * b.1).sqrt();
        let bound = mu.bounds[o].unwrap_or(f64::INFINITY);
        pass &= consistent && mu.averages[o].abs() <= bound;
        rows.push_str(&format!(
            "{name},{:e},{:e},{:e},{:e},{:e},{:e},{consistent}\n",
            mu.averages[o], bound, a.0, a.1, b.0, b.1
        ));
    }
    out.write_str("kb.csv", &rows)?;
    if kb.write_snapshots {
        for (i, u) in mu.snapshots.iter().enumerate() {
            write_state(out, &format!("snapshots/snap_{i:04}"), u, ctx.cfg.run.binary_snapshots)?;
        }
    }
    s.set("paths", paths as i64);
    s.set("burn_in", mu.burn_in);
    s.set("horizon", mu.horizon);
    s.set("snapshots", mu.snapshots.len() as i64);
    Ok(pass)
}

fn invariance(ctx: &Ctx, out: &mut OutputDir, s: &mut Summary) -> Result<bool> {
    let mu = occupation(ctx)?;
    let inv = &ctx.cfg.experiments.invariance;
    let cfg = ctx.cfg.sim_config(ctx.model.clone())?;
    let r = invariance_test(&cfg, &mu, inv.t, &ctx.cfg.observables(&ctx.space), inv.restarts)?;
    out.write_with("invariance.csv", |w| {
        writeln!(w, "observable,statistic,p_value,adjusted_p_value,pass")?;
        for i in 0..r.names.len() {
            writeln!(
                w,
                "{},{:e},{:e},{:e},{}",
                r.names[i],
                r.statistics[i],
                r.p_values[i],
                r.adjusted[i],
                r.adjusted[i] > 0.01
            )?;
        }
        Ok(())
    })?;
    s.set("t", r.t);
    s.set("restarts", r.restarts as i64);
    s.set("excluded", r.excluded as i64);
    s.set("min_adjusted_p", r.adjusted.iter().cloned().fold(1.0, f64::min));
    Ok(r.pass)
}

fn feller(ctx: &Ctx, out: &mut OutputDir, s: &mut Summary) -> Result<bool> {
    let fs = &ctx.cfg.experiments.feller;
    let phi = ctx
        .cfg
        .observables(&ctx.space)
        .into_iter()
        .find(|o| o.name == fs.observable)
        .ok_or_else(|| Error::Config(format!("unknown observable `{}`", fs.observable)))?;
    let schedule: Vec<(i64, i64)> = fs.schedule.iter().map(|k| (k[0], k[1])).collect();
    let cfg = ctx.cfg.sim_config(ctx.model.clone())?;
    let t = feller_experiment(&cfg, &ctx.u0, fs.t, &phi, fs.eps, &schedule, ctx.cfg.run.paths)?;
    out.write_with("feller.csv", |w| {
        writeln!(w, "k1,k2,kappa,diff,paired_stderr,pooled_stderr")?;
        for r in &t.rows {
            writeln!(
                w,
                "{},{},{:e},{:e},{:e},{:e}",
                r.k1, r.k2, r.kappa, r.diff, r.paired_stderr, r.pooled_stderr
            )?;
        }
        Ok(())
    })?;
    s.set("t", t.t);
    s.set("eps", t.eps);
    s.set("nonincreasing", t.nonincreasing);
    s.set("final_small", t.final_small);
    Ok(t.pass)
}

fn continuous_dependence(ctx: &Ctx, out: &mut OutputDir, s: &mut Summary) -> Result<bool> {
    let l = match ctx.model.certified {
        Some(c) if c.l_hat < 2f64.sqrt() => c.l_hat,
        Some(c) => {
            return Err(Error::Precondition(format!(
                "pathwise stability needs a noise Lipschitz constant below sqrt(2); l_hat = {}",
                c.l_hat
            )))
        }
        None => return Err(Error::Precondition("continuous dependence needs a certified noise model".into())),
    };
    let st = &ctx.cfg.experiments.continuous_dependence;
    let dir = ctx
        .space
        .random_field(&mut ChaCha8Rng::seed_from_u64(st.direction_seed), 1.0, 1.0);
    let cfg = ctx.cfg.sim_config(ctx.model.clone())?;
    let c = continuous_dependence_experiment(&cfg, &ctx.u0, &dir, &st.deltas, ctx.cfg.run.paths)?;
    out.write_with("stability.csv", |w| {
        writeln!(w, "delta,mean_sup_distance,stderr,reduction")?;
        for (i, p) in c.points.iter().enumerate() {
            let ratio = if i == 0 { String::new() } else { format!("{:e}", c.ratios[i - 1]) };
            writeln!(w, "{:e},{:e},{:e},{ratio}", p.delta, p.mean_sup, p.stderr)?;
        }
        Ok(())
    })?;
    s.set("l_hat", l);
    s.set("monotone", c.monotone);
    s.set("proportional", c.proportional);
    s.set("vanishing", c.vanishing);
    Ok(c.pass)
}

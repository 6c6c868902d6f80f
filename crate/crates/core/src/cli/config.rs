//! Run configuration: a TOML document with one section per concern.
//!
//! ```toml
//! seed = 7
//!
//! [domain]
//! lx = 6.283185307179586
//! ly = 6.283185307179586
//! cutoff = 8
//!
//! [[noise.channel]]
//! bx = { constant = 0.5 }
//!
//! [[forcing.mode]]
//! k = [1, 0]
//! amplitude = 2.0
//!
//! [run]
//! dt = 5e-3
//! horizon = 5.0
//! ```
//!
//! [`validate_config`] fills every default, so the emitted form of a
//! validated config is complete and validates to itself.

use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ergodics::Observable;
use crate::error::{Error, Result};
use crate::integrator::{single_mode_forcing, SimConfig, Terms};
use crate::noise::{Budget, NoiseChannel, NoiseModel};
use crate::spectral::{io, Domain, DualField, Space, SpectralField};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub seed: u64,
    pub domain: Domain,
    #[serde(default)]
    pub noise: NoiseSection,
    #[serde(default)]
    pub forcing: ForcingSection,
    #[serde(default)]
    pub initial: InitialSection,
    #[serde(default)]
    pub run: RunSection,
    #[serde(default)]
    pub experiments: Experiments,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSection {
    #[serde(default)]
    pub channel: Vec<NoiseChannel>,
    /// Declared budget; verified rather than searched for when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<Budget>,
    /// Certify the model before running.
    #[serde(default = "yes")]
    pub certify: bool,
}

impl Default for NoiseSection {
    fn default() -> Self {
        Self {
            channel: Vec::new(),
            budget: None,
            certify: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForcingSection {
    #[serde(default)]
    pub mode: Vec<ForcingMode>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForcingMode {
    pub k: [i64; 2],
    pub amplitude: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialKind {
    Zero,
    SingleMode,
    #[default]
    Random,
    TaylorGreen,
    File,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InitialSection {
    pub kind: InitialKind,
    /// Mode, amplitude and phase for `single-mode`; amplitude also scales
    /// `taylor-green`.
    pub k: [i64; 2],
    pub amplitude: f64,
    pub phase: f64,
    /// Spectral slope, `H` norm and seed for `random`.
    pub slope: f64,
    pub norm: f64,
    pub seed: u64,
    /// Spectral CSV for `file`, relative to the config file.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

impl Default for InitialSection {
    fn default() -> Self {
        Self {
            kind: InitialKind::Random,
            k: [1, 0],
            amplitude: 1.0,
            phase: 0.0,
            slope: 1.0,
            norm: 1.0,
            seed: 0,
            path: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunSection {
    pub dt: f64,
    pub horizon: f64,
    pub stride: usize,
    pub p: f64,
    pub paths: usize,
    pub terms: Terms,
    /// Also write state snapshots as little-endian binary.
    pub binary_snapshots: bool,
}

impl Default for RunSection {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            horizon: 1.0,
            stride: 10,
            p: 2.0,
            paths: 16,
            terms: Terms::full(),
            binary_snapshots: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Experiments {
    pub aldous: AldousSection,
    pub chebyshev: ChebyshevSection,
    pub kb: KbSection,
    pub invariance: InvarianceSection,
    pub feller: FellerSection,
    pub continuous_dependence: StabilitySection,
}

/// Empty lists and zero sizes below mean "derive from the run section".
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AldousSection {
    pub thetas: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChebyshevSection {
    pub radii: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KbSection {
    /// Negative means `0.4 * horizon`.
    pub burn_in: f64,
    pub snapshots_per_path: usize,
    pub observable_scale: f64,
    pub batches: usize,
    pub write_snapshots: bool,
}

impl Default for KbSection {
    fn default() -> Self {
        Self {
            burn_in: -1.0,
            snapshots_per_path: 5,
            observable_scale: 1.0,
            batches: 10,
            write_snapshots: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InvarianceSection {
    pub t: f64,
    pub restarts: usize,
}

impl Default for InvarianceSection {
    fn default() -> Self {
        Self { t: 1.0, restarts: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FellerSection {
    pub t: f64,
    pub eps: f64,
    pub observable: String,
    pub schedule: Vec<[i64; 2]>,
}

impl Default for FellerSection {
    fn default() -> Self {
        Self {
            t: 1.0,
            eps: 1.0,
            observable: "tanh_10".into(),
            schedule: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StabilitySection {
    pub deltas: Vec<f64>,
    pub direction_seed: u64,
}

impl Default for StabilitySection {
    fn default() -> Self {
        Self {
            deltas: Vec::new(),
            direction_seed: 1,
        }
    }
}

fn yes() -> bool {
    true
}

/// Parses TOML text without validating ranges.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    toml::from_str(text).map_err(|e| Error::Config(format!("parse error: {}", e.message())))
}

pub fn emit_config(cfg: &RunConfig) -> Result<String> {
    toml::to_string(cfg).map_err(|e| Error::Config(format!("cannot serialise config: {e}")))
}

/// Fills defaults and checks every range, collecting all problems.
pub fn validate_config(cfg: &RunConfig) -> std::result::Result<RunConfig, Vec<String>> {
    let mut c = cfg.clone();
    let mut errs = Vec::new();
    let mut push = |e: String| errs.push(e);

    if let Err(e) = c.domain.validate() {
        push(e.to_string());
    }
    let n = c.domain.cutoff as i64;
    let in_band = |k: [i64; 2]| k != [0, 0] && k[0].abs() <= n && k[1].abs() <= n;

    let model = c.noise_model();
    if let Err(e) = model.validate_for(&c.domain) {
        push(e.to_string());
    }
    if let Some(b) = c.noise.budget {
        if let Err(e) = b.validate() {
            push(e.to_string());
        } else if let Err(e) = b.check_p(c.run.p) {
            push(e.to_string());
        }
    } else if c.run.p < 2.0 {
        push(format!("p = {} must be at least 2", c.run.p));
    }
    if c.run.p != 2.0 && !c.noise.certify && c.noise.budget.is_none() {
        push(format!("p = {} needs a certified or declared budget", c.run.p));
    }

    for m in &c.forcing.mode {
        if !in_band(m.k) {
            push(format!("forcing mode {:?} is zero or beyond the cutoff {n}", m.k));
        }
        if !m.amplitude.is_finite() {
            push(format!("forcing amplitude {} is not finite", m.amplitude));
        }
    }

    match c.initial.kind {
        InitialKind::SingleMode if !in_band(c.initial.k) => {
            push(format!("initial mode {:?} is zero or beyond the cutoff {n}", c.initial.k))
        }
        InitialKind::Random if !(c.initial.norm >= 0.0) => {
            push(format!("initial norm {} must be nonnegative", c.initial.norm))
        }
        InitialKind::File if c.initial.path.is_none() => push("initial kind `file` needs `path`".into()),
        _ => {}
    }

    let r = &c.run;
    let dt_ok = r.dt > 0.0 && r.dt.is_finite();
    if !dt_ok {
        push(format!("dt = {} must be positive", r.dt));
    } else if !(r.horizon >= r.dt && r.horizon.is_finite()) {
        push(format!("horizon = {} must be at least dt = {}", r.horizon, r.dt));
    }
    if r.stride == 0 {
        push("stride must be positive".into());
    }
    if r.paths < 2 {
        push(format!("paths = {} must be at least 2", r.paths));
    }
    let spacing = r.dt * r.stride as f64;
    let horizon = r.horizon;
    let paths = r.paths;

    let ex = &mut c.experiments;
    if ex.aldous.thetas.is_empty() && spacing > 0.0 {
        ex.aldous.thetas = [1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 200.0, 500.0]
            .iter()
            .map(|m| m * spacing)
            .filter(|t| *t <= 0.5 * horizon * (1.0 + 1e-12))
            .collect();
    }
    if ex.aldous.thetas.iter().any(|t| !(*t > 0.0)) {
        push("aldous thetas must be positive".into());
    }
    if ex.chebyshev.radii.is_empty() {
        ex.chebyshev.radii = vec![1.0, 2.0, 4.0, 8.0, 16.0];
    }
    if ex.chebyshev.radii.iter().any(|r| !(*r > 0.0)) {
        push("chebyshev radii must be positive".into());
    }
    if ex.kb.burn_in < 0.0 {
        ex.kb.burn_in = 0.4 * horizon;
    }
    if ex.kb.burn_in >= horizon {
        push(format!("kb burn_in = {} must be below the horizon {horizon}", ex.kb.burn_in));
    }
    if ex.kb.snapshots_per_path == 0 || ex.kb.batches < 2 || !(ex.kb.observable_scale > 0.0) {
        push("kb needs snapshots_per_path >= 1, batches >= 2 and observable_scale > 0".into());
    }
    let available = paths * ex.kb.snapshots_per_path;
    if ex.invariance.restarts == 0 {
        ex.invariance.restarts = available.min(200);
    }
    if ex.invariance.restarts > available {
        push(format!(
            "invariance restarts = {} exceed the {available} retained snapshots (paths x snapshots_per_path)",
            ex.invariance.restarts
        ));
    }
    if !(ex.invariance.t >= 0.0) || !(ex.feller.t >= 0.0) {
        push("restart and Feller times must be nonnegative".into());
    }
    if ex.feller.schedule.is_empty() {
        ex.feller.schedule = (1..=n).map(|k| [k, 0]).collect();
    }
    if ex.feller.schedule.iter().any(|&k| !in_band(k)) {
        push(format!("feller schedule leaves the band 1 <= max(|k1|, |k2|) <= {n}"));
    }
    if ex.continuous_dependence.deltas.is_empty() {
        ex.continuous_dependence.deltas = (0..5).map(|j| 1e-2 / 2f64.powi(j)).collect();
    }
    let d = &ex.continuous_dependence.deltas;
    if d.windows(2).any(|w| w[1] >= w[0]) || d.iter().any(|x| *x < 0.0) {
        push("continuous_dependence deltas must be nonnegative and strictly decreasing".into());
    }
    if errs.is_empty() {
        Ok(c)
    } else {
        Err(errs)
    }
}

/// Reads, parses and validates a config file.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut cfg = parse_config(&text)?;
    if let (Some(p), Some(dir)) = (&cfg.initial.path, path.parent()) {
        if p.is_relative() {
            cfg.initial.path = Some(dir.join(p));
        }
    }
    validate_config(&cfg).map_err(|errs| Error::Config(errs.join("\n")))
}

impl RunConfig {
    /// Box and cutoff only; everything else at its default.
    pub fn minimal(domain: Domain) -> Self {
        Self {
            seed: 0,
            domain,
            noise: NoiseSection::default(),
            forcing: ForcingSection::default(),
            initial: InitialSection::default(),
            run: RunSection::default(),
            experiments: Experiments::default(),
        }
    }

    pub fn noise_model(&self) -> NoiseModel {
        let mut m = NoiseModel::new(self.noise.channel.clone());
        if m.channels.is_empty() {
            m = NoiseModel::zero(1);
        }
        m.budget = self.noise.budget;
        m
    }

    pub fn forcing(&self, space: &Space) -> Option<DualField> {
        if self.forcing.mode.is_empty() {
            return None;
        }
        let mut acc = DualField::zeros(space.cutoff()).into_modes();
        for m in &self.forcing.mode {
            acc.axpy(1.0, single_mode_forcing(space, m.k[0], m.k[1], m.amplitude).modes());
        }
        Some(DualField::from_modes(acc))
    }

    pub fn initial_state(&self, space: &Space) -> Result<SpectralField> {
        let i = &self.initial;
        Ok(match i.kind {
            InitialKind::Zero => SpectralField::zeros(space.cutoff()),
            InitialKind::SingleMode => space.single_mode(i.k[0], i.k[1], i.amplitude, i.phase),
            InitialKind::Random => {
                space.random_field(&mut ChaCha8Rng::seed_from_u64(i.seed), i.slope, i.norm)
            }
            InitialKind::TaylorGreen => space
                .project_physical(|x, y| [x.sin() * y.cos(), -x.cos() * y.sin()])
                .scaled(i.amplitude),
            InitialKind::File => {
                let path = i.path.as_ref().ok_or_else(|| Error::Config("initial path missing".into()))?;
                let f = std::fs::File::open(path)
                    .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
                let modes = io::read_csv(std::io::BufReader::new(f))?;
                space.validate_field(modes.resampled(space.cutoff()), 1e-10)?
            }
        })
    }

    /// Simulation settings with `model` (possibly certified) in place.
    pub fn sim_config(&self, model: NoiseModel) -> Result<SimConfig> {
        let space = Space::new(self.domain.clone())?;
        let mut cfg = SimConfig::new(self.domain.clone(), model)
            .with_dt(self.run.dt)
            .with_horizon(self.run.horizon)
            .with_stride(self.run.stride)
            .with_seed(self.seed)
            .with_p(self.run.p)
            .with_terms(self.run.terms);
        if let Some(f) = self.forcing(&space) {
            cfg = cfg.with_forcing(f);
        }
        Ok(cfg)
    }

    pub fn observables(&self, space: &Space) -> Vec<Observable> {
        Observable::catalog(space, self.experiments.kb.observable_scale)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const MINIMAL: &str = "[domain]\nlx = 6.283185307179586\nly = 6.283185307179586\ncutoff = 4\n";

    #[test]
    fn minimal_config_gets_defaults() {
        let c = validate_config(&parse_config(MINIMAL).unwrap()).unwrap();
        assert_eq!(c.run, RunSection::default());
        assert!(c.noise.certify);
        assert_eq!(c.experiments.chebyshev.radii.len(), 5);
        assert_eq!(c.experiments.feller.schedule.len(), 4);
        assert_eq!(c.experiments.kb.burn_in, 0.4);
        assert_eq!(c.experiments.invariance.restarts, 80);
        assert!(c.experiments.aldous.thetas.iter().all(|t| *t <= 0.5));
    }

    #[test]
    fn moment_exponent_error_names_the_bound() {
        let text = format!("{MINIMAL}[noise.budget]\neta = 1.0\nlambda0 = 0.0\nrho = 0.0\n[run]\np = 10.0\n");
        let errs = validate_config(&parse_config(&text).unwrap()).unwrap_err();
        assert_eq!(errs.len(), 1);
        assert!(errs[0].contains("p = 10") && errs[0].contains("= 3"), "{}", errs[0]);
    }

    #[test]
    fn empty_and_unknown_inputs_are_parse_errors() {
        for text in ["", "[domain]\ncutoff = 4\n", &format!("{MINIMAL}bogus = 1\n")] {
            match parse_config(text) {
                Err(Error::Config(m)) => assert!(m.starts_with("parse error")),
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn errors_are_aggregated() {
        let text = format!("{MINIMAL}[run]\ndt = -1.0\nstride = 0\npaths = 1\n[[forcing.mode]]\nk = [9, 0]\namplitude = 1.0\n");
        let errs = validate_config(&parse_config(&text).unwrap()).unwrap_err();
        assert_eq!(errs.len(), 4, "{errs:?}");
    }

    proptest! {
        #[test]
        fn validated_config_is_a_fixed_point(
            cutoff in 1usize..12,
            dt in 1e-4f64..1e-2,
            steps in 1usize..2000,
            stride in 1usize..50,
            paths in 2usize..300,
            seed in any::<u64>(),
            beta in 0.0f64..1.0,
        ) {
            let mut c = RunConfig::minimal(Domain::periodic_2pi(cutoff));
            c.seed = seed;
            c.run.dt = dt;
            c.run.horizon = dt * steps as f64;
            c.run.stride = stride;
            c.run.paths = paths;
            c.noise.channel = vec![NoiseChannel::advective(beta, 0.0)];
            c.experiments.kb.burn_in = 0.0;
            let v = validate_config(&c).unwrap();
            let again = validate_config(&parse_config(&emit_config(&v).unwrap()).unwrap()).unwrap();
            prop_assert_eq!(again, v);
        }
    }
}

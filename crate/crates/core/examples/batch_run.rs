//! Writes a config file, runs two subcommands through the batch front door
//! and prints the summaries and manifest. Pass a directory to keep the
//! outputs; otherwise a temporary one is used.
//!
//! `cargo run --example batch_run -- /tmp/snsim-demo`

use std::path::PathBuf;

use snsim::cli::{emit_config, run, RunConfig, RunOptions, Subcommand};
use snsim::noise::NoiseChannel;
use snsim::spectral::Domain;

pub fn run_example() -> snsim::Result<()> {
    let tmp = tempfile::tempdir()?;
    let root = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| tmp.path().to_path_buf());
    std::fs::create_dir_all(&root)?;

    let mut cfg = RunConfig::minimal(Domain::periodic_2pi(4));
    cfg.noise.channel = vec![NoiseChannel::advective(0.7, 0.0), NoiseChannel::advective(0.0, 0.7)];
    cfg.run.dt = 5e-3;
    cfg.run.horizon = 0.5;
    cfg.run.paths = 4;
    let path = root.join("config.toml");
    std::fs::write(&path, emit_config(&cfg)?)?;

    for sub in [Subcommand::CertifyNoise, Subcommand::Simulate] {
        let out = root.join(sub.name());
        if out.exists() {
            std::fs::remove_dir_all(&out)?;
        }
        let o = run(&RunOptions {
            subcommand: sub,
            config: path.clone(),
            out: out.clone(),
            seed: None,
            dt_halving: false,
        })?;
        println!("== {sub} (pass = {})", o.pass);
        println!("{}", toml::to_string(&o.summary).unwrap_or_default());
        for f in &o.manifest.files {
            println!("  {:<28} {} bytes  sha256 {}", f.path, f.bytes, &f.sha256[..16]);
        }
    }
    Ok(())
}

fn main() -> snsim::Result<()> {
    run_example()
}

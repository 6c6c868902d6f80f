use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use snsim::cli::{exit_code, run, RunOptions, Subcommand};

#[derive(Parser)]
#[command(version, about = "Stochastic Navier-Stokes Galerkin experiments")]
struct Args {
    /// One of: certify-noise, simulate, energy-report, moments, aldous-scan,
    /// chebyshev, kb-estimate, invariance-test, feller, continuous-dependence.
    subcommand: String,
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Overrides the config seed and SNS_SEED.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    threads: Option<usize>,
    /// Measure the time-step bias by dt-halving on shared Brownian paths.
    #[arg(long)]
    dt_halving: bool,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let subcommand = match args.subcommand.parse::<Subcommand>() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    if let Some(n) = args.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let result = run(&RunOptions {
        subcommand,
        config: args.config,
        out: args.out,
        seed: args.seed,
        dt_halving: args.dt_halving,
    });
    match &result {
        Ok(o) => println!("{}", toml::to_string(&o.summary).unwrap_or_default()),
        Err(e) => eprintln!("error: {e}"),
    }
    ExitCode::from(exit_code(&result) as u8)
}

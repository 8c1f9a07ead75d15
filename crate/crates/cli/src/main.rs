//! `winterbottom-lab`: run experiments from a JSON config and emit JSON
//! reports, CSV tables and SVG figures.

mod config;
mod emit;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use config::ExperimentConfig;
use run::{Command, Failure, Options};

const THREADS_VAR: &str = "WINTERBOTTOM_LAB_THREADS";

#[derive(Parser, Debug)]
#[command(name = "winterbottom-lab", version, about = "Wulff and Winterbottom shape experiments")]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Experiment config (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `output_dir` in the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for every seeded block (minimize, verify, validate, identity).
    #[arg(long)]
    seed: Option<u64>,
    /// Sample count for verify, validate and identity.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    quiet: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(v) = std::env::var(THREADS_VAR) {
        match v.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("error: {THREADS_VAR} must be a positive integer, got `{v}`");
                return ExitCode::from(1);
            }
        }
    }
    let mut cfg = match ExperimentConfig::load(&cli.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(1);
        }
    };
    if let Some(seed) = cli.seed {
        cfg.minimize.seed = seed;
        cfg.verify.seed = seed;
        cfg.validate.seed = seed;
        cfg.identity.seed = seed;
    }
    if let Some(n) = cli.samples {
        cfg.verify.samples = n;
        cfg.validate.samples = n;
        cfg.identity.samples = n;
    }
    let out = cli
        .out
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"));
    let opts = Options { out, quiet: cli.quiet };
    match run::run(cli.command, &cfg, &cli.config, &opts) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Violation(e)) => {
            eprintln!("violation: {e}");
            ExitCode::from(2)
        }
    }
}

//! `hausdorff`: run Hausdorff-operator experiments from JSON configs.
//!
//! Exit codes: 0 ok, 1 verification failure, 2 configuration error,
//! 3 numerical divergence.

mod commands;
mod config;
mod error;
mod suite;
mod table;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::Output;
use crate::config::ExperimentConfig;
use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(name = "hausdorff", version, about = "Hausdorff operators over the unit disc")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Experiment config (JSON)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output file; stdout when omitted. `bounds` writes JSON for `.json` paths.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Override the quadrature level of the operator's measure
    #[arg(long, global = true)]
    level: Option<u32>,

    /// Override the random seed
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Taylor coefficients of H f
    Apply,
    /// Bloch, Bergman and Hardy norms of f
    Norms,
    /// Analytic bounds against empirical operator norms
    Bounds,
    /// Contour-integral and closed-form coefficient sequences
    Coeffs,
    /// Identity-approximation sweep over ε
    Approx,
    /// Run the invariant suite
    Verify,
}

fn load(cli: &Cli) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match (&cli.config, cli.command) {
        (Some(path), _) => ExperimentConfig::load(path)?,
        (None, Command::Verify) => ExperimentConfig::default(),
        (None, _) => return Err(CliError::Config("--config is required".into())),
    };
    if let Some(level) = cli.level {
        cfg.level = level;
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
        cfg.seeds.clear();
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    let cfg = load(cli)?;
    let json = cli
        .out
        .as_deref()
        .and_then(Path::extension)
        .is_some_and(|e| e.eq_ignore_ascii_case("json"));
    match cli.command {
        Command::Apply => commands::apply(&cfg),
        Command::Norms => commands::norms(&cfg),
        Command::Bounds => commands::bounds(&cfg, json),
        Command::Coeffs => commands::coeffs(&cfg),
        Command::Approx => commands::approx(&cfg),
        Command::Verify => suite::run(&cfg),
    }
}

fn configure_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("HAUSDORFF_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| CliError::Config(format!("HAUSDORFF_THREADS={v} is not a thread count")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| {
        let out = run(&cli)?;
        match &cli.out {
            Some(path) => std::fs::write(path, &out.text)?,
            None => print!("{}", out.text),
        }
        if out.failed {
            Err(CliError::Verification(format!("{:?} reported failing checks", cli.command).to_lowercase()))
        } else {
            Ok(())
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hausdorff: {e}");
            e.exit_code()
        }
    }
}

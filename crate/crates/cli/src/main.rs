//! `exitwell <inspect|expand|evaluate|validate|report> --config <path>`
//!
//! Exit status: 0 success, 1 configuration error, 2 violated assumption,
//! 3 numerical failure.

use clap::{Parser, ValueEnum};
use exitwell::config::RunConfig;
use exitwell::run::{run, summary_text, write_outputs, Subcommand};
use exitwell::Error;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Command {
    /// Geometry, potential and assumption checks.
    Inspect,
    /// Boundary-layer coefficients, dumped to CSV.
    Expand,
    /// Asymptotic scalars and evaluators for every eps.
    Evaluate,
    /// Independent oracles only.
    Validate,
    /// The full pipeline with comparisons.
    Report,
}

impl From<Command> for Subcommand {
    fn from(c: Command) -> Self {
        match c {
            Command::Inspect => Subcommand::Inspect,
            Command::Expand => Subcommand::Expand,
            Command::Evaluate => Subcommand::Evaluate,
            Command::Validate => Subcommand::Validate,
            Command::Report => Subcommand::Report,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "exitwell", version, about = "Mean exit times of overdamped Langevin dynamics from a single well")]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides the config and the EXITWELL_OUT variable.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Monte Carlo seed; overrides the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

fn execute(cli: &Cli) -> Result<i32, Error> {
    let mut cfg = RunConfig::load(&cli.config)?;
    if let Some(seed) = cli.seed {
        cfg.monte_carlo.seed = seed;
    }
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::Config("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(format!("cannot start {n} worker threads: {e}")))?;
    }
    let out = run(&cfg, cli.command.into())?;
    let dir = cli.out.clone().unwrap_or_else(|| cfg.out_dir());
    let written = write_outputs(&out, &dir)?;
    print!("{}", summary_text(&out.report));
    for p in written {
        println!("wrote {}", p.display());
    }
    Ok(out.report.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("exitwell: {e}");
            if let Error::Assumption { assumption, .. } = &e {
                eprintln!("exitwell: required assumption: {}", assumption.describe());
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

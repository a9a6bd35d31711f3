use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use trigint_cli::config::{ExperimentConfig, ExperimentKind};
use trigint_cli::{run_experiment, CliResult};

#[derive(Debug, Parser)]
#[command(name = "trigint", version, about = "Trigonometric interpolation experiments")]
struct Cli {
    #[command(subcommand)]
    experiment: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Condition number of the kernel matrix against the degree.
    CondVsDegree(Flags),
    /// Condition numbers at jittered equispaced nodes.
    JitterSweep(Flags),
    /// CGNE error per iteration against the a-priori bounds.
    ErrorDecay(Flags),
    /// Scattered data reconstruction with a random holdout.
    Reconstruct(Flags),
}

#[derive(Debug, clap::Args)]
struct Flags {
    /// `key = value` config file; defaults are used without one.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the config output path.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run(cli: Cli) -> CliResult<()> {
    let (kind, flags) = match cli.experiment {
        Command::CondVsDegree(f) => (ExperimentKind::CondVsDegree, f),
        Command::JitterSweep(f) => (ExperimentKind::JitterSweep, f),
        Command::ErrorDecay(f) => (ExperimentKind::ErrorDecay, f),
        Command::Reconstruct(f) => (ExperimentKind::Reconstruct, f),
    };
    let mut cfg = match &flags.config {
        Some(path) => ExperimentConfig::load(path, Some(kind))?,
        None => ExperimentConfig::defaults(kind),
    };
    if let Some(seed) = flags.seed {
        cfg.seed = seed;
    }
    if let Some(out) = flags.out {
        cfg.output = out;
    }
    let report = run_experiment(&cfg)?;
    for f in &report.files {
        println!("{}", f.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

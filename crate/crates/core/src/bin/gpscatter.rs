use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use gpscatter::experiment::{self, Command, ExperimentConfig};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Cmd {
    Groundstate,
    Evolve,
    Variational,
    Compare,
    Sweep,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Groundstate => Command::GroundState,
            Cmd::Evolve => Command::Evolve,
            Cmd::Variational => Command::Variational,
            Cmd::Compare => Command::Compare,
            Cmd::Sweep => Command::Sweep,
        }
    }
}

/// BEC scattering from a Gaussian obstacle with optional PT-symmetric gain/loss.
#[derive(Debug, Parser)]
#[command(name = "gpscatter", version)]
struct Cli {
    #[arg(value_enum)]
    command: Cmd,
    /// Experiment file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `run.output_dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Sweep workers; GPSCATTER_JOBS takes precedence.
    #[arg(long)]
    jobs: Option<usize>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(2);
        }
    };
    let result = ExperimentConfig::from_file(&cli.config).and_then(|cfg| {
        let jobs = experiment::resolve_jobs(cli.jobs);
        experiment::run(cli.command.into(), &cfg, cli.out.as_deref(), jobs)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gpscatter: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

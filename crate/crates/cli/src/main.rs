use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use contrast_cli::{run, Task};

/// Spectra and high-contrast convergence harnesses for concentric disks.
#[derive(Debug, Parser)]
#[command(name = "contrast", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Transmission spectrum at the first contrast of `a_list`.
    Spectrum { config: PathBuf },
    /// Effective spectrum by the scalar DtN and eigen-series routes.
    Effective { config: PathBuf },
    /// Steklov eigenvalues of the inner disk.
    Steklov { config: PathBuf },
    /// Eigenvalue gap against the limit, over `a_list`.
    ConvergeEig { config: PathBuf },
    /// Resolvent-norm gap against the limit at `z_probe`, over `a_list`.
    ConvergeResolvent { config: PathBuf },
    /// Boundary-triple identities on random realizations.
    TripleCheck { config: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (task, config) = match cli.command {
        Command::Spectrum { config } => (Task::Spectrum, config),
        Command::Effective { config } => (Task::Effective, config),
        Command::Steklov { config } => (Task::Steklov, config),
        Command::ConvergeEig { config } => (Task::ConvergeEig, config),
        Command::ConvergeResolvent { config } => (Task::ConvergeResolvent, config),
        Command::TripleCheck { config } => (Task::TripleCheck, config),
    };
    match run(task, &config) {
        Ok(summary) => {
            eprintln!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("contrast {}: {e}", task.name());
            ExitCode::from(e.exit_code())
        }
    }
}

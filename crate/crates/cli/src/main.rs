use std::path::PathBuf;
use std::process::ExitCode;

use cdmid::identification::ViabilizeStrategy;
use cdmid_cli::commands::{format_vector, load_reconstruction, parse_vector, summarize, viabilize_command};
use cdmid_cli::experiment::run_config;
use cdmid_cli::CliResult;
use clap::{Parser, Subcommand};

/// Identify control authority degradation from simulated observations.
#[derive(Parser)]
#[command(name = "cdmid", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate, identify and write samples, reconstruction and convergence tables.
    Run {
        config: PathBuf,
        /// Output directory, overriding the configuration.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Summarize a reconstruction file.
    Report { file: PathBuf },
    /// Print the command that makes the degraded plant receive VECTOR.
    Viabilize {
        file: PathBuf,
        /// Comma-separated command over the identified channels or all inputs.
        #[arg(allow_hyphen_values = true)]
        vector: String,
        /// Prefer inverting an identified mode over passing the command through.
        #[arg(long)]
        modes_first: bool,
    },
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Run { config, out } => {
            let (outcome, artifacts) = run_config(&config, out.as_deref())?;
            println!(
                "{} samples, {} modes identified",
                outcome.samples.len(),
                outcome.reconstruction.identified_count()
            );
            println!("samples:        {}", artifacts.samples.display());
            println!("reconstruction: {}", artifacts.reconstruction.display());
            println!("convergence:    {}", artifacts.convergence.display());
        }
        Command::Report { file } => {
            print!("{}", summarize(&load_reconstruction(&file)?));
        }
        Command::Viabilize { file, vector, modes_first } => {
            let recon = load_reconstruction(&file)?;
            let strategy = if modes_first { ViabilizeStrategy::ModesFirst } else { ViabilizeStrategy::PassthroughFirst };
            let u_v = viabilize_command(&recon, &parse_vector(&vector)?, strategy)?;
            println!("{}", format_vector(&u_v));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("error")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.line());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use korovkin_lab::cli;
use korovkin_lab::operators::axioms::DEFAULT_SEED;

#[derive(Parser)]
#[command(
    name = "korovkin",
    about = "Quantitative Korovkin bounds for sublinear operators"
)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the sweep described by a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Check the operator axioms on random trials.
    VerifyAxioms {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Fitted constants and slopes from an existing CSV.
    Report {
        #[arg(long)]
        csv: PathBuf,
    },
}

fn main() -> ExitCode {
    let args = Args::parse();
    let outcome = match args.command {
        Command::Run { config } => cli::run(&config),
        Command::VerifyAxioms { seed } => cli::verify_axioms(seed),
        Command::Report { csv } => cli::report(&csv),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

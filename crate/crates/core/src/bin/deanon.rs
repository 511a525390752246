use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use deanon::experiment::{error_json, CommandKind, Experiment};

/// Graph perturbation, utility and de-anonymization experiments.
#[derive(Parser)]
#[command(name = "deanon", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Load an edge list and report its statistics
    Ingest(Flags),
    /// Write a perturbed copy of an edge list
    Perturb(Flags),
    /// Local and global utility of one graph against another
    Utility(Flags),
    /// Evaluate the utility conditions for one parameter set
    Bounds(Flags),
    /// Condition grid over the (U_a, U_u) square as CSV
    Region(Flags),
    /// Map an anonymized graph onto an auxiliary graph
    Attack(Flags),
    /// Monte Carlo success probability of the correct mapping
    Verify(Flags),
}

#[derive(Args)]
struct Flags {
    /// JSON config for the subcommand
    #[arg(long)]
    config: PathBuf,
    /// Output directory
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Overrides the seed in the config
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    quiet: bool,
}

fn main() -> ExitCode {
    let (kind, flags) = match Cli::parse().command {
        Cmd::Ingest(f) => (CommandKind::Ingest, f),
        Cmd::Perturb(f) => (CommandKind::Perturb, f),
        Cmd::Utility(f) => (CommandKind::Utility, f),
        Cmd::Bounds(f) => (CommandKind::Bounds, f),
        Cmd::Region(f) => (CommandKind::Region, f),
        Cmd::Attack(f) => (CommandKind::Attack, f),
        Cmd::Verify(f) => (CommandKind::Verify, f),
    };
    let result = Experiment::load(kind, &flags.config, flags.seed).and_then(|e| e.run(&flags.out));
    match result {
        Ok(path) => {
            if !flags.quiet {
                println!("wrote {}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", error_json(&e));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

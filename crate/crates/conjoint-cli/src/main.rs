//! `conjoint`: measurement statistics for bipartite preparation and
//! readout scenarios, under both the conditioned and the complete
//! description.

use clap::{Parser, Subcommand};
use conjoint_cli::{
    cmd_compare, cmd_joint, cmd_predict, cmd_retrodict, cmd_sample, cmd_validate, OutputFormat,
};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "conjoint",
    version,
    about = "Joint, conditional, and divergence statistics for bipartite scenarios"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

const DEFAULT_EPS: f64 = 1e-10;

#[derive(Subcommand)]
enum Command {
    /// Check a scenario file and list every diagnostic
    Validate {
        path: PathBuf,
        /// Numerical tolerance for validation checks
        #[arg(long, default_value_t = DEFAULT_EPS)]
        eps: f64,
    },
    /// Joint outcome distribution p(a,b) with both marginals
    Joint {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
        #[arg(long, default_value_t = DEFAULT_EPS)]
        eps: f64,
    },
    /// Predictive conditionals p(b|a)
    Predict {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
        #[arg(long, default_value_t = DEFAULT_EPS)]
        eps: f64,
    },
    /// Retrodictive conditionals p(a|b)
    Retrodict {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
        #[arg(long, default_value_t = DEFAULT_EPS)]
        eps: f64,
    },
    /// Conventional vs complete joint tables and their distance
    Compare {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
        #[arg(long, default_value_t = DEFAULT_EPS)]
        eps: f64,
    },
    /// Draw seeded samples and report the distance to the exact table
    Sample {
        path: PathBuf,
        /// Number of draws
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_EPS)]
        eps: f64,
    },
}

fn main() {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Validate { path, eps } => cmd_validate(&path, eps),
        Command::Joint { path, format, eps } => cmd_joint(&path, format, eps),
        Command::Predict { path, format, eps } => cmd_predict(&path, format, eps),
        Command::Retrodict { path, format, eps } => cmd_retrodict(&path, format, eps),
        Command::Compare { path, format, eps } => cmd_compare(&path, format, eps),
        Command::Sample { path, n, seed, eps } => cmd_sample(&path, n, seed, eps),
    };
    print!("{}", outcome.rendered);
    eprint!("{}", outcome.diagnostics);
    std::process::exit(outcome.exit_code);
}

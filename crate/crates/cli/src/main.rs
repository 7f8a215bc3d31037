mod commands;
mod config;
mod error;
mod format;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "dmed", version, about = "Moment-based divergence indices and bandit simulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Minimum divergence of moments or of a finite distribution to a level mu.
    Dmin(DminArgs),
    /// Upper and lower principal representations of a moment vector.
    Rep {
        /// Raw moments M_1,...,M_d.
        #[arg(value_delimiter = ',', allow_negative_numbers = true, required = true)]
        moments: Vec<f64>,
    },
    /// The six-row beta divergence table as CSV.
    Table1 {
        /// Write full-precision CSV here instead of the rounded table on stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = commands::TABLE_SEED)]
        seed: u64,
        /// Monte Carlo draws per row for the D_min column.
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
    },
    /// Run a simulation campaign from a config file.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Override the master seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        runs: Option<usize>,
        #[arg(long)]
        horizon: Option<u64>,
        /// Output directory for summary.csv and traces.csv.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("input").required(true).args(["moments", "dist"])))]
struct DminArgs {
    /// Raw moments M_1,...,M_d.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    moments: Option<Vec<f64>>,
    /// Finite distribution as "x:w,x:w,...".
    #[arg(long)]
    dist: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    mu: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Dmin(a) => match (a.moments, a.dist) {
            (Some(m), _) => commands::dmin_moments(&m, a.mu),
            (None, Some(d)) => commands::dmin_dist(&d, a.mu),
            (None, None) => unreachable!("clap enforces one input"),
        },
        Command::Rep { moments } => commands::rep(&moments),
        Command::Table1 { out, seed, samples } => commands::table1(out.as_deref(), seed, samples),
        Command::Simulate { config, seed, runs, horizon, out } => {
            commands::simulate(&config, commands::Overrides { seed, runs, horizon, out })
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dmed: {e}");
            ExitCode::from(e.code())
        }
    }
}

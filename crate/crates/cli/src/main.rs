mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::error::CliError;

/// Hierarchical percolation: theory profiles, Monte Carlo checks and graph dumps.
#[derive(Debug, Parser)]
#[command(name = "hierperc", version)]
struct Cli {
    #[command(flatten)]
    run: RunArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// JSON run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output directory, created if missing.
    #[arg(long, global = true, value_name = "DIR", default_value = ".")]
    out: PathBuf,

    /// Replaces the seed of the configuration.
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,

    /// Worker threads for trial-level parallelism (default: all cores).
    #[arg(long, global = true, value_name = "INT")]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write theory.json with the analytic profile of the configuration.
    Theory {
        /// Last level used when multiplying the tail of a parametric rule.
        #[arg(long, default_value_t = 10_000)]
        tail_limit: usize,
    },
    /// Run the configured experiments and write report.json and report.csv.
    Simulate {
        /// Largest N^K accepted.
        #[arg(long, default_value_t = 1 << 32)]
        max_vertices: u64,
    },
    /// Sample one graph and write it to graph.edges.
    DumpGraph {
        /// Largest N^K accepted.
        #[arg(long, default_value_t = 10_000_000)]
        max_vertices: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hierperc: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let run = commands::Manifest::load(&cli.run)?;
    let go = || match cli.command {
        Command::Theory { tail_limit } => commands::theory(&run, tail_limit),
        Command::Simulate { max_vertices } => commands::simulate(&run, max_vertices),
        Command::DumpGraph { max_vertices } => commands::dump_graph(&run, max_vertices),
    };
    match cli.run.threads {
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?
            .install(go),
        None => go(),
    }
}

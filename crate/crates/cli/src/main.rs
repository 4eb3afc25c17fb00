//! `ftcons`: analyze graphs, synthesize/verify/simulate consensus schedules,
//! certify two-step infeasibility and bound the consensus number.
//!
//! Exit codes: 0 success, 1 negative result (no witness, FAIL, inapplicable
//! method), 2 usage or input error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "ftcons", version, about = "Finite-time average consensus toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct GraphArg {
    /// Edge-list file, or `@name` for a built-in graph (e.g. @pappus, @counterexample, @path:10)
    pub graph: String,
    /// Declared node count; indices must lie below it
    #[arg(long)]
    pub nodes: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Metrics, regularity, distance-regularity and adjacency spectrum
    Analyze {
        #[command(flatten)]
        graph: GraphArg,
        /// Relative gap separating distinct eigenvalues
        #[arg(long, default_value_t = ftcons::spectra::DEFAULT_CLUSTER_TOL)]
        cluster_tol: f64,
    },
    /// Build and verify a schedule, optionally writing it to a file
    Synthesize {
        #[command(flatten)]
        graph: GraphArg,
        /// auto | adjacency | laplacian-shift | path | tree | bfs-tree
        #[arg(long, default_value = "auto")]
        method: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Max-entry residual tolerance
        #[arg(long, default_value_t = ftcons::synthesis::DEFAULT_VERIFY_TOL)]
        tol: f64,
        #[arg(long, default_value_t = ftcons::spectra::DEFAULT_CLUSTER_TOL)]
        cluster_tol: f64,
    },
    /// Check a schedule file against a graph
    Verify {
        #[command(flatten)]
        graph: GraphArg,
        schedule: PathBuf,
        #[arg(long, default_value_t = ftcons::synthesis::DEFAULT_VERIFY_TOL)]
        tol: f64,
    },
    /// Replay a schedule from a random or given initial state
    Simulate {
        #[command(flatten)]
        graph: GraphArg,
        schedule: PathBuf,
        #[arg(long, default_value_t = 7, conflicts_with = "x0")]
        seed: u64,
        /// File with one initial value per node (whitespace separated)
        #[arg(long)]
        x0: Option<PathBuf>,
        #[arg(long, default_value_t = -1.5, allow_hyphen_values = true)]
        lo: f64,
        #[arg(long, default_value_t = 1.5, allow_hyphen_values = true)]
        hi: f64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Try to certify that no two-step schedule exists
    Certify2 {
        #[command(flatten)]
        graph: GraphArg,
    },
    /// Numeric search for a schedule with a fixed number of steps
    Search {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        /// Maximum sweeps per restart
        #[arg(long, default_value_t = 500)]
        iters: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lower and upper bounds on the consensus number
    Bounds {
        #[command(flatten)]
        graph: GraphArg,
        /// Skip the numeric search between the bounds
        #[arg(long)]
        no_search: bool,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        #[arg(long, default_value_t = 300)]
        iters: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Analyze { graph, cluster_tol } => commands::analyze(&graph, cluster_tol),
        Command::Synthesize { graph, method, out, tol, cluster_tol } => {
            commands::synthesize(&graph, &method, out.as_deref(), tol, cluster_tol)
        }
        Command::Verify { graph, schedule, tol } => commands::verify(&graph, &schedule, tol),
        Command::Simulate { graph, schedule, seed, x0, lo, hi, csv } => {
            commands::simulate(&graph, &schedule, seed, x0.as_deref(), lo, hi, csv.as_deref())
        }
        Command::Certify2 { graph } => commands::certify2(&graph),
        Command::Search { graph, steps, restarts, iters, seed, out } => {
            commands::search(&graph, steps, restarts, iters, seed, out.as_deref())
        }
        Command::Bounds { graph, no_search, restarts, iters, seed } => {
            commands::bounds(&graph, !no_search, restarts, iters, seed)
        }
    };
    match result {
        Ok(outcome) => {
            print!("{}", outcome.report);
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

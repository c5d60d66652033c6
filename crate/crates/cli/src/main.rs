use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use coxsplit_cli::commands::{self, AnalyzeFlags, CommandResult};

/// Special splittings of Coxeter groups acting on hyperbolic space, and the
/// explicit displacement bound when no splitting certificate is found.
#[derive(Parser)]
#[command(name = "coxsplit", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate all nontrivial special splittings of a presentation.
    Splittings {
        /// Presentation document (JSON).
        system: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Evaluate the constants c, delta, R, Lambda_n and C.
    Constants {
        /// Number of generators.
        k: usize,
        /// Site count |X|; defaults to k·(k-1)/2.
        #[arg(long)]
        size_x: Option<usize>,
        /// Margulis constant for the target dimension.
        #[arg(long)]
        margulis: f64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Run the full analysis: splitting certificate or displacement bound.
    ///
    /// Exits 10 when a splitting is found, 0 for a bound outcome.
    Analyze {
        /// Presentation document (JSON).
        system: PathBuf,
        /// Representation document (JSON).
        representation: PathBuf,
        /// Margulis constant for the target dimension.
        #[arg(long)]
        margulis: f64,
        /// Override the point-validation tolerance.
        #[arg(long)]
        tol_point: Option<f64>,
        /// Override the fixed-point tolerance.
        #[arg(long)]
        tol_fix: Option<f64>,
        /// Iteration budget for the displacement minimisation.
        #[arg(long, default_value_t = 2000)]
        budget: u32,
        /// Include the approximating-tree serialization in the report.
        #[arg(long)]
        dump_tree: bool,
        #[command(flatten)]
        out: OutArg,
    },
    /// Validate documents without running the analysis.
    Check {
        /// Presentation document (JSON).
        system: PathBuf,
        /// Representation document (JSON), validated against the system.
        representation: Option<PathBuf>,
    },
}

#[derive(Args)]
struct OutArg {
    /// Write the output document here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn deliver(result: CommandResult, out: Option<PathBuf>) -> ExitCode {
    if !result.stderr.is_empty() {
        eprint!("{}", result.stderr);
    }
    match out {
        Some(path) if !result.stdout.is_empty() => {
            if let Err(e) = fs::write(&path, result.stdout) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(commands::EXIT_INPUT);
            }
        }
        _ => print!("{}", result.stdout),
    }
    ExitCode::from(result.code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Splittings { system, out } => {
            deliver(commands::cmd_splittings(&system), out.out)
        }
        Command::Constants { k, size_x, margulis, out } => {
            deliver(commands::cmd_constants(k, size_x, margulis), out.out)
        }
        Command::Analyze {
            system,
            representation,
            margulis,
            tol_point,
            tol_fix,
            budget,
            dump_tree,
            out,
        } => {
            let flags = AnalyzeFlags { margulis, tol_point, tol_fix, budget, dump_tree };
            deliver(commands::cmd_analyze(&system, &representation, &flags), out.out)
        }
        Command::Check { system, representation } => {
            deliver(commands::cmd_check(&system, representation.as_deref()), None)
        }
    }
}

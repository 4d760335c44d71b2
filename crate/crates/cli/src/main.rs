//! `tetra`: membership tests, automorphisms, geodesics, left inverses, lifts
//! and verification suites for the tetrablock.

mod commands;
mod output;
mod parse;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use output::Format;

#[derive(Parser, Debug)]
#[command(name = "tetra", version, about = "Complex geodesics and invariant metrics of the tetrablock")]
#[command(after_help = "Complex numbers are written `re,im` or as a bare real. \
Tolerances are overridden with --tol.NAME=VALUE, NAME one of: sym, unit, contour, den, fix, eq, boundary, singular, rouche_eps.")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Master seed for every random choice.
    #[arg(long, global = true, env = "TETRA_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Number of samples for commands that sample the disc.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Output format; `geodesic` defaults to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write output here (atomically) instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Membership of a point; exit code 0 inside, 1 outside, 2 on bad input.
    Member {
        #[arg(long, value_enum, default_value_t = Domain::Tetrablock)]
        domain: Domain,
        /// Coordinates: 3 for the tetrablock, 2 (s, p) for g2, 4 matrix entries (row-major) for Cartan domains.
        #[arg(required = true, allow_hyphen_values = true)]
        values: Vec<String>,
    },
    /// The gauge rho (largest norm of a symmetric preimage under pi).
    Rho {
        #[arg(required = true, allow_hyphen_values = true)]
        point: Vec<String>,
    },
    /// Apply an automorphism of the tetrablock.
    Aut {
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        a1: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        a2: String,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        eta: f64,
        /// Use the anti-diagonal rotation.
        #[arg(long)]
        swap: bool,
        #[arg(required = true, allow_hyphen_values = true)]
        point: Vec<String>,
    },
    /// Sample a geodesic given as JSON (inline or a file path).
    Geodesic { spec: String },
    /// Construct a left inverse of a geodesic and certify it.
    Leftinv { spec: String },
    /// Lift a geodesic (or a disc given with --disc) through pi.
    Lift {
        /// Geodesic spec, unless --disc is given.
        spec: Option<String>,
        /// A disc in C^3 as JSON: a list of three {num, den} coefficient records.
        #[arg(long, conflicts_with = "spec")]
        disc: Option<String>,
        /// Monomial orders `n,m` to factor out at the origin.
        #[arg(long)]
        orders: Option<String>,
        #[arg(long, value_enum, default_value_t = BranchArg::Plus)]
        branch: BranchArg,
    },
    /// Run a verification suite and emit one report per line.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Number of tasks.
        #[arg(long, default_value_t = 50)]
        n: usize,
        /// Sample budget of the non-convexity search.
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
    },
    /// Search for two points of the tetrablock whose midpoint is outside.
    Witness {
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Domain {
    Tetrablock,
    TetrablockAlt,
    G2,
    CartanI,
    CartanIi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Equality,
    Invariance,
    Psh,
    Nonconvex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BranchArg {
    Plus,
    Minus,
}

/// Exit code for malformed input.
pub const EXIT_INPUT: u8 = 2;

fn main() -> ExitCode {
    let (args, tol) = match parse::split_tolerances(std::env::args().collect()) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let cli = Cli::parse_from(args);
    match commands::run(&cli, &tol) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

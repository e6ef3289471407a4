mod commands;
mod output;
mod parse;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use output::Format;

/// Exact counts, spectra, entanglement and correlators of the arrow-indexed
/// Fredkin chain.
#[derive(Debug, Parser, Serialize)]
#[command(name = "semifredkin", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, global = true, default_value = "json")]
    pub format: Format,

    /// Write results here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    /// Chain-end terms of the Hamiltonian.
    #[arg(long, value_enum, global = true, default_value = "standard")]
    pub boundary: Boundary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    /// Floor terms plus the three-site end terms.
    Standard,
    /// Floor terms plus terms pinning both ends to index 2.
    IndexTwoEnds,
}

/// Couplings, either by phase or explicitly.
#[derive(Debug, Args, Serialize)]
pub struct Couplings {
    /// 1 (mixing), 2 (unmixed) or 3 (balanced).
    #[arg(long, conflicts_with_all = ["lambda1", "lambda2"])]
    pub phase: Option<String>,
    #[arg(long)]
    pub lambda1: Option<f64>,
    #[arg(long)]
    pub lambda2: Option<f64>,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Command {
    /// Exact walk counts.
    Count {
        /// 1, 2 or 3.
        #[arg(long, required_unless_present = "dyck")]
        phase: Option<String>,
        /// Classical Dyck walks instead.
        #[arg(long)]
        dyck: bool,
        /// Walk length.
        #[arg(long, required_unless_present = "n_max")]
        n: Option<usize>,
        /// Tabulate all lengths up to this one.
        #[arg(long, conflicts_with = "n")]
        n_max: Option<usize>,
        /// End height (with --n), or largest end height (with --n-max).
        #[arg(long, default_value_t = 0)]
        h: usize,
        /// End indices `ab`; all of them when omitted.
        #[arg(long)]
        class: Option<String>,
        /// Emit ln(count).
        #[arg(long)]
        log_domain: bool,
        /// Add the ratio to the closed asymptotic form where one exists.
        #[arg(long)]
        asymptotic: bool,
        #[arg(long, default_value_t = 5000)]
        max_len: usize,
    },
    /// All connected nonnegative walks of a class.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        class: String,
        #[arg(long, default_value_t = 0)]
        h: i32,
        #[arg(long, default_value_t = 14)]
        max_len: usize,
    },
    /// Closure of a path under the local moves.
    Closure {
        /// Path text, e.g. "1,2 2,1".
        #[arg(long)]
        path: String,
        /// Include the x31 x13 <-> x32 x23 move.
        #[arg(long)]
        mixing: bool,
        #[arg(long, default_value_t = 1_000_000)]
        max_paths: usize,
    },
    /// Lowest eigenvalues of the Hamiltonian.
    Spectrum {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        couplings: Couplings,
        #[arg(long, default_value_t = 10)]
        k: usize,
        #[arg(long, default_value_t = 8)]
        max_sites: usize,
    },
    /// Ground-state degeneracy, ground energy and gap.
    Gsd {
        /// Comma-separated chain lengths.
        #[arg(long)]
        n: String,
        #[command(flatten)]
        couplings: Couplings,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 10.0)]
        gap_ratio: f64,
        #[arg(long, default_value_t = 8)]
        max_sites: usize,
    },
    /// Entanglement entropy of the uniform class states.
    Ee {
        /// 1, 2 or 3.
        #[arg(long)]
        phase: String,
        /// `ab`; every class with a counting route when omitted.
        #[arg(long)]
        class: Option<String>,
        /// Comma-separated even chain lengths.
        #[arg(long)]
        two_n: String,
        /// Comma-separated cut offsets.
        #[arg(long, default_value = "0")]
        r: String,
        #[arg(long, value_enum, default_value = "counts")]
        method: EeMethod,
        /// Force the log-domain counting route.
        #[arg(long)]
        log_domain: bool,
        /// Largest chain for the numeric route.
        #[arg(long, default_value_t = 8)]
        max_sites: usize,
    },
    /// Connected correlators on a disconnection excitation.
    Correlator {
        /// `he:N:R`, `random:N:K:SEED` or `segments:L,a,b,h0,h1;...`.
        #[arg(long)]
        state: String,
        #[command(flatten)]
        couplings: Couplings,
        #[arg(long, default_value = "0.5,1,5")]
        times: String,
        /// Left operator, e.g. `flip(12;31)@2`; scans the default grid when
        /// omitted.
        #[arg(long, requires = "b")]
        a: Option<String>,
        #[arg(long, requires = "a")]
        b: Option<String>,
        /// Per-relation maxima instead of every row.
        #[arg(long)]
        summary: bool,
    },
    /// Run the acceptance criteria.
    Verify {
        /// Reduced ranges, chains of at most 6 sites.
        #[arg(long)]
        quick: bool,
        /// Comma-separated criterion ids.
        #[arg(long)]
        only: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EeMethod {
    Counts,
    Numeric,
    Asymptotic,
    All,
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            log::warn!("thread pool: {e}");
        }
    }
    match commands::run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}

//! `planartest`: batch experiments over hard-instance families, the
//! count-vector tester, the collision distinguisher and separator
//! decompositions. Every subcommand writes a CSV table plus a JSON sidecar
//! under `--out`; reruns with the same seed are byte-identical.
//!
//! Exit codes: 0 success, 1 an `--assert` (or certification) check failed,
//! 2 usage or input error.

mod decompose;
mod family;
mod output;
mod sweep;
mod testrun;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "planartest", version, about = "Property-testing experiments on bounded-degree graphs")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Base seed; every random choice derives from it.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output directory.
    #[arg(long, global = true, env = "PLANARTEST_OUT", default_value = "planartest-out")]
    pub out: PathBuf,
    /// Worker threads (0 = all cores). Results do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Greedy far-apart diagonal-grid family, written as an archive.
    ///
    /// CSV columns: index, code, nearest_hamming, vertices, edges, form.
    FamilyBuild(family::BuildArgs),
    /// All unrooted trees on s vertices with max degree 3.
    ///
    /// CSV columns: index, code, orbit_size, vertices, edges, form.
    TreeFamily(family::TreeArgs),
    /// Certify pairwise distances and balanced separators of an archive.
    ///
    /// CSV columns: index, third, fine, exact.
    VerifySuitable(family::VerifyArgs),
    /// Tester trials on YES and NO instances built from an archive.
    ///
    /// CSV columns: trial, instance, accept, phase, queries,
    /// distance_to_spec.
    TestRun(testrun::TestRunArgs),
    /// Minimal distinguishing sample count per family size.
    ///
    /// CSV columns: experiment, s, family_size, n, q, yes_rate, no_rate,
    /// success_rate, ci_low, ci_high, seed, flags. `success_rate` is the
    /// smaller of the YES and NO rates and the interval is that side's.
    DistinguishSweep(sweep::SweepArgs),
    /// Separator decomposition of random trees, paths or grids.
    ///
    /// CSV columns: trial, n, eps, tau, k, blocks, max_block,
    /// removed_edges, edge_budget, leaves, leaf_limit, verified.
    DecomposeDemo(decompose::DecomposeArgs),
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Assert(String),
    Io(String),
    Core(planartest_core::Error),
}

impl From<planartest_core::Error> for CliError {
    fn from(e: planartest_core::Error) -> Self {
        match e {
            planartest_core::Error::Usage(m) => CliError::Usage(m),
            e => CliError::Core(e),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Assert(m) => write!(f, "check failed: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Turns failed checks into an assertion error when `enforce` is set.
pub fn check(enforce: bool, failures: &[String]) -> Result<(), CliError> {
    for f in failures {
        eprintln!("FAIL {f}");
    }
    if enforce && !failures.is_empty() {
        return Err(CliError::Assert(failures.join("; ")));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    if cli.common.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.common.jobs)
            .build_global()
            .map_err(|e| usage(e.to_string()))?;
    }
    match cli.command {
        Command::FamilyBuild(a) => family::build(&cli.common, &a),
        Command::TreeFamily(a) => family::trees(&cli.common, &a),
        Command::VerifySuitable(a) => family::verify(&cli.common, &a),
        Command::TestRun(a) => testrun::run(&cli.common, &a),
        Command::DistinguishSweep(a) => sweep::run(&cli.common, &a),
        Command::DecomposeDemo(a) => decompose::run(&cli.common, &a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            match e {
                CliError::Assert(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

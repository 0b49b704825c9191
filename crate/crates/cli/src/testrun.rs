use std::path::PathBuf;

use clap::Args;
use planartest_core::tester::tester_trials;
use serde::Serialize;

use crate::family::load_family;
use crate::output::Artifact;
use crate::{check, usage, CliError, Common};

#[derive(Debug, Clone, Args, Serialize)]
pub struct TestRunArgs {
    /// Family archive directory.
    #[arg(long)]
    #[serde(skip)]
    pub family: PathBuf,
    #[arg(long, default_value_t = 0.25)]
    pub eps: f64,
    /// Copies of each member in a YES instance.
    #[arg(long = "copies", short = 'm', default_value_t = 10)]
    pub copies: usize,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    /// Override the second-phase sample count.
    #[arg(long)]
    pub samples: Option<usize>,
    /// NO instances must be certified this multiple of eps far.
    #[arg(long, default_value_t = 1.0)]
    pub farness_multiplier: f64,
    /// Exit 1 unless both rates reach 2/3 and the farness certificate holds.
    #[arg(long)]
    pub assert: bool,
}

#[derive(Serialize)]
struct Summary {
    family_size: usize,
    truncated_from: Option<usize>,
    n: usize,
    k: usize,
    d: usize,
    samples: usize,
    radius: f64,
    yes_rate: f64,
    no_rate: f64,
    yes_ci: (f64, f64),
    no_ci: (f64, f64),
    no_farness_lower: f64,
    no_farness_edits: u64,
    farness_required: f64,
    failures: Vec<String>,
}

pub fn run(common: &Common, a: &TestRunArgs) -> Result<(), CliError> {
    if !(a.eps > 0.0 && a.eps < 1.0) {
        return Err(usage(format!("--eps must lie in (0, 1), got {}", a.eps)));
    }
    if a.trials == 0 || a.copies == 0 {
        return Err(usage("--trials and --copies must be at least 1"));
    }
    let full = load_family(&a.family)?;
    let even = full.len() / 2 * 2;
    if even == 0 {
        return Err(usage("a NO instance needs at least two members"));
    }
    let f = full.truncated(even);
    let s = tester_trials(&f, a.copies, a.eps, a.trials, common.seed, a.samples)?;
    let required = a.farness_multiplier * a.eps;
    let mut failures = Vec::new();
    if s.yes_rate() < 2.0 / 3.0 {
        failures.push(format!("YES acceptance {:.3} < 2/3", s.yes_rate()));
    }
    if s.no_rate() < 2.0 / 3.0 {
        failures.push(format!("NO rejection {:.3} < 2/3", s.no_rate()));
    }
    if s.no_farness_lower < required {
        failures.push(format!(
            "certified NO farness {:.5} < {required:.5}",
            s.no_farness_lower
        ));
    }
    let summary = Summary {
        family_size: f.len(),
        truncated_from: (even != full.len()).then_some(full.len()),
        n: s.n,
        k: s.k,
        d: s.d,
        samples: s.samples,
        radius: s.radius,
        yes_rate: s.yes_rate(),
        no_rate: s.no_rate(),
        yes_ci: s.yes_ci,
        no_ci: s.no_ci,
        no_farness_lower: s.no_farness_lower,
        no_farness_edits: s.no_farness_edits,
        farness_required: required,
        failures: failures.clone(),
    };
    Artifact {
        out: &common.out,
        name: "test_run",
        command: "test-run",
        seed: common.seed,
    }
    .write(&s.rows, a, &summary)?;
    println!(
        "tester: YES accept {:.3}, NO reject {:.3}, certified NO farness {:.5} (|F| = {}, n = {}, {} samples)",
        s.yes_rate(),
        s.no_rate(),
        s.no_farness_lower,
        f.len(),
        s.n,
        s.samples
    );
    check(a.assert, &failures)
}

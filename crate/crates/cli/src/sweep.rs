use std::path::PathBuf;

use clap::Args;
use planartest_core::family::{code_pool, default_radius, take_scoops, GridParams, ScoopsOptions, SuitableFamily};
use planartest_core::seeds::derive_seed;
use planartest_core::tester::{
    copies_for, empirical_sample_complexity, evaluate_q, two_sample_success, wilson_interval, QCell, SweepOptions,
};
use serde::Serialize;

use crate::family::load_family;
use crate::output::Artifact;
use crate::{check, usage, CliError, Common};

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepArgs {
    /// Grid sides of gadgetless default-radius families.
    #[arg(long, value_delimiter = ',', default_values_t = vec![3, 4, 5])]
    pub s: Vec<usize>,
    /// Family archives to sweep instead of building grids.
    #[arg(long)]
    #[serde(skip)]
    pub family: Vec<PathBuf>,
    /// Trials per side per cell.
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    /// Evaluate a single sample budget instead of searching.
    #[arg(long)]
    pub qfixed: Option<usize>,
    #[arg(long, default_value_t = 4096)]
    pub q_max: usize,
    /// Pool size for sides whose codes cannot be enumerated.
    #[arg(long, default_value_t = 4096)]
    pub pool_sample: usize,
    #[arg(long)]
    pub max_members: Option<usize>,
    /// Exit 1 unless q* grows strictly and tracks sqrt(|F|) within a factor
    /// of 4 (or, with --qfixed 2, matches the closed-form rates).
    #[arg(long)]
    pub assert: bool,
}

#[derive(Serialize)]
struct Row {
    experiment: &'static str,
    s: Option<usize>,
    family_size: usize,
    n: usize,
    q: Option<usize>,
    yes_rate: Option<f64>,
    no_rate: Option<f64>,
    success_rate: Option<f64>,
    ci_low: Option<f64>,
    ci_high: Option<f64>,
    seed: u64,
    flags: String,
}

#[derive(Serialize)]
struct FamilyEntry {
    s: Option<usize>,
    family_size: usize,
    truncated_from: Option<usize>,
    q_star: Option<usize>,
    analytic: Option<(f64, f64)>,
}

#[derive(Serialize)]
struct Summary {
    families: Vec<FamilyEntry>,
    failures: Vec<String>,
}

fn grid_family(s: usize, a: &SweepArgs, seed: u64) -> Result<SuitableFamily, CliError> {
    let p = GridParams::gadgetless(s)?;
    let (pool, mode) = code_pool(p.cells(), a.pool_sample, seed);
    let options = ScoopsOptions {
        skip_isomorphic: true,
        max_members: a.max_members,
    };
    Ok(take_scoops(&p, &pool, mode, default_radius(s), options)?)
}

fn cell_row(cell: &QCell, s: Option<usize>, f: &SuitableFamily, seed: u64, experiment: &'static str, z: f64) -> Row {
    let (yes, no) = (cell.yes_rate(), cell.no_rate());
    let low_side = if yes <= no { cell.yes_successes } else { cell.no_successes };
    let (lo, hi) = wilson_interval(low_side, cell.trials, z);
    Row {
        experiment,
        s,
        family_size: f.len(),
        n: f.len() * copies_for(cell.q, f.len()) * f.t,
        q: Some(cell.q),
        yes_rate: Some(yes),
        no_rate: Some(no),
        success_rate: Some(yes.min(no)),
        ci_low: Some(lo),
        ci_high: Some(hi),
        seed,
        flags: String::new(),
    }
}

pub fn run(common: &Common, a: &SweepArgs) -> Result<(), CliError> {
    if a.trials == 0 {
        return Err(usage("--trials must be at least 1"));
    }
    if a.max_members == Some(0) {
        return Err(usage("empty family: --max-members must be at least 1"));
    }
    if a.qfixed.is_some_and(|q| q < 2) {
        return Err(usage("--qfixed must be at least 2"));
    }
    let mut families: Vec<(Option<usize>, SuitableFamily)> = Vec::new();
    if a.family.is_empty() {
        if a.s.is_empty() {
            return Err(usage("no families to sweep"));
        }
        for (i, &s) in a.s.iter().enumerate() {
            families.push((Some(s), grid_family(s, a, derive_seed(common.seed, 1000 + i as u64))?));
        }
    } else {
        for dir in &a.family {
            families.push((None, load_family(dir)?));
        }
    }

    let options = SweepOptions {
        trials: a.trials,
        q_max: a.q_max,
        ..SweepOptions::default()
    };
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    let mut failures = Vec::new();
    for (i, (s, full)) in families.iter().enumerate() {
        if full.is_empty() {
            return Err(usage("empty family"));
        }
        let even = if full.len() == 1 { 1 } else { full.len() / 2 * 2 };
        let f = full.truncated(even);
        let seed = derive_seed(common.seed, i as u64);
        let mut entry = FamilyEntry {
            s: *s,
            family_size: f.len(),
            truncated_from: (even != full.len()).then_some(full.len()),
            q_star: None,
            analytic: None,
        };
        if let Some(q) = a.qfixed {
            if f.len() < 2 {
                return Err(usage("--qfixed needs a family of at least two members"));
            }
            let cell = evaluate_q(&f.members, q, a.trials, seed)?;
            rows.push(cell_row(&cell, *s, &f, seed, "qfixed", options.z));
            if q == 2 {
                let (py, pn) = two_sample_success(f.len());
                entry.analytic = Some((py, pn));
                for (side, rate, p) in [("YES", cell.yes_rate(), py), ("NO", cell.no_rate(), pn)] {
                    let sigma = (p * (1.0 - p) / a.trials as f64).sqrt();
                    if (rate - p).abs() > 4.0 * sigma + 0.01 {
                        failures.push(format!("|F| = {}: {side} rate {rate:.3} vs closed form {p:.3}", f.len()));
                    }
                }
            }
        } else {
            let row = empirical_sample_complexity(&f.members, &options, seed)?;
            for cell in &row.cells {
                rows.push(cell_row(cell, *s, &f, seed, "cell", options.z));
            }
            let mut star = match row.q_star.and_then(|q| row.cells.iter().find(|c| c.q == q)) {
                Some(c) => cell_row(c, *s, &f, seed, "q_star", options.z),
                None => Row {
                    experiment: "q_star",
                    s: *s,
                    family_size: f.len(),
                    n: 0,
                    q: None,
                    yes_rate: None,
                    no_rate: None,
                    success_rate: None,
                    ci_low: None,
                    ci_high: None,
                    seed,
                    flags: String::new(),
                },
            };
            star.flags = row.flags.join("; ");
            rows.push(star);
            entry.q_star = row.q_star;
            if row.q_star.is_none() {
                failures.push(format!("|F| = {}: no q* ({})", f.len(), row.flags.join("; ")));
            }
        }
        entries.push(entry);
    }
    if a.qfixed.is_none() {
        for w in entries.windows(2) {
            let (Some(qa), Some(qb)) = (w[0].q_star, w[1].q_star) else {
                continue;
            };
            let (fa, fb) = (w[0].family_size, w[1].family_size);
            if qb <= qa {
                failures.push(format!("q* not increasing: {qa} at |F| = {fa}, {qb} at |F| = {fb}"));
            }
            let ratio = qb as f64 / qa as f64;
            let root = (fb as f64 / fa as f64).sqrt();
            if !(0.25 * root..=4.0 * root).contains(&ratio) {
                failures.push(format!("q* ratio {ratio:.3} outside [0.25, 4] x sqrt ratio {root:.3}"));
            }
        }
    }
    for e in &entries {
        match (a.qfixed, e.q_star) {
            (Some(q), _) => println!("|F| = {}: evaluated q = {q}", e.family_size),
            (None, Some(q)) => println!("|F| = {}: q* = {q}", e.family_size),
            (None, None) => println!("|F| = {}: no q*", e.family_size),
        }
    }
    let summary = Summary {
        families: entries,
        failures: failures.clone(),
    };
    Artifact {
        out: &common.out,
        name: "distinguish_sweep",
        command: "distinguish-sweep",
        seed: common.seed,
    }
    .write(&rows, a, &summary)?;
    check(a.assert, &failures)
}

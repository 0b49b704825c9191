use clap::{Args, ValueEnum};
use planartest_core::generators;
use planartest_core::partition::{decompose, heuristic_separator, treewidth_partition, SeparatorFinder, TreeCentroid};
use planartest_core::seeds::derive_seed;
use planartest_core::{Graph, Vertex};
use rayon::prelude::*;
use serde::Serialize;

use crate::output::Artifact;
use crate::{check, usage, CliError, Common};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// Random tree with maximum degree d.
    Tree,
    Path,
    /// Square grid on the largest square at most n.
    Grid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Blocks of at most 6 tau / eps.
    Planar,
    /// Components first, then eps / 2 on large ones; blocks of at most
    /// 30 tau / eps.
    Treewidth,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DecomposeArgs {
    #[arg(long, value_enum, default_value_t = Family::Tree)]
    pub graph: Family,
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[arg(long, default_value_t = 1)]
    pub tau: usize,
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    #[arg(long, value_enum, default_value_t = Mode::Planar)]
    pub mode: Mode,
    /// Exit 1 on any block-size, edge-budget, leaf or recount violation.
    #[arg(long)]
    pub assert: bool,
}

#[derive(Serialize)]
struct Row {
    trial: usize,
    n: usize,
    eps: f64,
    tau: usize,
    k: usize,
    blocks: usize,
    max_block: usize,
    removed_edges: usize,
    edge_budget: f64,
    leaves: usize,
    leaf_limit: f64,
    verified: bool,
}

#[derive(Serialize)]
struct Summary {
    trials: usize,
    max_block: usize,
    max_removed_edges: usize,
    max_leaves: usize,
    failures: Vec<String>,
}

fn make_graph(a: &DecomposeArgs, seed: u64) -> Result<Graph, CliError> {
    Ok(match a.graph {
        Family::Tree => {
            if a.d < 2 {
                return Err(usage("random trees need --d >= 2"));
            }
            generators::random_tree(a.n, a.d, seed)
        }
        Family::Path => {
            if a.d < 2 {
                return Err(usage("paths need --d >= 2"));
            }
            generators::path(a.n, a.d)
        }
        Family::Grid => {
            if a.d < 4 {
                return Err(usage("grids need --d >= 4"));
            }
            let side = (a.n as f64).sqrt().floor() as usize;
            generators::grid(side, side, a.d)
        }
    })
}

pub fn run(common: &Common, a: &DecomposeArgs) -> Result<(), CliError> {
    if !(a.eps > 0.0 && a.eps <= 1.0) {
        return Err(usage(format!("--eps must lie in (0, 1], got {}", a.eps)));
    }
    if a.trials == 0 || a.n == 0 || a.tau == 0 {
        return Err(usage("--trials, --n and --tau must be at least 1"));
    }
    let heuristic = |g: &Graph| -> planartest_core::Result<Vec<Vertex>> { Ok(heuristic_separator(g, 2.0 / 3.0)) };
    let finder: &dyn SeparatorFinder = match a.graph {
        Family::Tree | Family::Path => &TreeCentroid,
        Family::Grid => &heuristic,
    };
    let results: Result<Vec<(Row, String)>, CliError> = (0..a.trials)
        .into_par_iter()
        .map(|trial| {
            let g = make_graph(a, derive_seed(common.seed, trial as u64))?;
            let report = match a.mode {
                Mode::Planar => decompose(&g, a.eps, a.tau, finder)?,
                Mode::Treewidth => treewidth_partition(&g, a.eps, a.tau, finder)?,
            };
            let p = &report.partition;
            let n = g.n();
            Ok((
                Row {
                    trial,
                    n,
                    eps: a.eps,
                    tau: a.tau,
                    k: p.k(),
                    blocks: p.block_count(),
                    max_block: p.max_block(),
                    removed_edges: report.removed_edges,
                    edge_budget: a.eps * a.d as f64 * n as f64,
                    leaves: report.leaves,
                    leaf_limit: a.eps * n as f64 / (2.0 * a.tau as f64),
                    verified: p.verify(&g).is_ok(),
                },
                p.to_text(),
            ))
        })
        .collect();
    let results = results?;
    let mut failures = Vec::new();
    for (r, _) in &results {
        if r.max_block > r.k {
            failures.push(format!("trial {}: block of {} > k = {}", r.trial, r.max_block, r.k));
        }
        if r.removed_edges as f64 > r.edge_budget {
            failures.push(format!("trial {}: {} removed edges > {}", r.trial, r.removed_edges, r.edge_budget));
        }
        if r.leaves as f64 > r.leaf_limit {
            failures.push(format!("trial {}: {} leaves > {}", r.trial, r.leaves, r.leaf_limit));
        }
        if !r.verified {
            failures.push(format!("trial {}: partition recount failed", r.trial));
        }
    }
    std::fs::create_dir_all(&common.out)?;
    std::fs::write(common.out.join("partition.txt"), &results[0].1)?;
    let rows: Vec<Row> = results.into_iter().map(|(r, _)| r).collect();
    let summary = Summary {
        trials: rows.len(),
        max_block: rows.iter().map(|r| r.max_block).max().unwrap_or(0),
        max_removed_edges: rows.iter().map(|r| r.removed_edges).max().unwrap_or(0),
        max_leaves: rows.iter().map(|r| r.leaves).max().unwrap_or(0),
        failures: failures.clone(),
    };
    Artifact {
        out: &common.out,
        name: "decompose",
        command: "decompose-demo",
        seed: common.seed,
    }
    .write(&rows, a, &summary)?;
    println!(
        "decompose: {} trials, max block {}, max removed edges {}, max leaves {}",
        summary.trials, summary.max_block, summary.max_removed_edges, summary.max_leaves
    );
    check(a.assert, &failures)
}

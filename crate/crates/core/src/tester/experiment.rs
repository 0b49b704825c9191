//! Repeated tester runs on YES/NO instances and estimator calibration.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::edit::{component_matching_bound, DistanceCache};
use crate::error::Result;
use crate::family::{build_no_instance, build_yes_instance, SuitableFamily};
use crate::graph::Graph;
use crate::oracle::QueryLedger;
use crate::partition::TrivialOracle;
use crate::seeds::derive_seed;

use super::count::exact_count_vector;
use super::estimate::estimate_count_vector;
use super::run::{run_with_samples, Phase, PropertySpec};
use super::stats::wilson_interval;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub trial: usize,
    pub instance: String,
    pub accept: bool,
    pub phase: Phase,
    pub queries: u64,
    pub distance_to_spec: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub trials: usize,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub eps: f64,
    pub samples: usize,
    pub radius: f64,
    pub yes_accepts: usize,
    pub no_rejects: usize,
    pub yes_ci: (f64, f64),
    pub no_ci: (f64, f64),
    /// Certified lower bound on the normalized distance from the first NO
    /// instance to the property, `edits / (d n)`.
    pub no_farness_lower: f64,
    pub no_farness_edits: u64,
    pub farness_exact: bool,
    pub rows: Vec<TrialRow>,
}

impl TrialSummary {
    pub fn yes_rate(&self) -> f64 {
        self.yes_accepts as f64 / self.trials as f64
    }

    pub fn no_rate(&self) -> f64 {
        self.no_rejects as f64 / self.trials as f64
    }
}

/// The singleton property "is a relabeling of the YES union": its only
/// count vector is that of `copies` copies of every member, `k = t`.
pub fn singleton_spec(f: &SuitableFamily, copies: usize, eps: f64) -> Result<PropertySpec> {
    let h = build_yes_instance(f, copies, 0)?;
    PropertySpec::new(vec![exact_count_vector(&h, f.t)?], f.t, f.d, eps)
}

/// `trials` tester runs on fresh YES instances and `trials` on fresh NO
/// instances. `samples` overrides the second-phase sample count.
pub fn tester_trials(
    f: &SuitableFamily,
    copies: usize,
    eps: f64,
    trials: usize,
    seed: u64,
    samples: Option<usize>,
) -> Result<TrialSummary> {
    let spec = singleton_spec(f, copies, eps)?;
    let samples = samples.unwrap_or_else(|| spec.phase_two_samples());
    let per_trial: Result<Vec<[TrialRow; 2]>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let base = derive_seed(seed, trial as u64);
            let yes = build_yes_instance(f, copies, derive_seed(base, 0))?;
            let no = build_no_instance(f, copies, derive_seed(base, 1))?.no_graph;
            let mut rows = Vec::with_capacity(2);
            for (name, g, stream) in [("yes", &yes, 2), ("no", &no, 3)] {
                let oracle = TrivialOracle::new(g, spec.k);
                let v = run_with_samples(g, &oracle, &spec, derive_seed(base, stream), samples)?;
                rows.push(TrialRow {
                    trial,
                    instance: name.into(),
                    accept: v.accept,
                    phase: v.phase,
                    queries: v.queries_used,
                    distance_to_spec: v.distance_to_spec,
                });
            }
            let no_row = rows.pop().expect("two rows");
            let yes_row = rows.pop().expect("two rows");
            Ok([yes_row, no_row])
        })
        .collect();
    let rows: Vec<TrialRow> = per_trial?.into_iter().flatten().collect();
    let yes_accepts = rows.iter().filter(|r| r.instance == "yes" && r.accept).count();
    let no_rejects = rows.iter().filter(|r| r.instance == "no" && !r.accept).count();

    let h = build_yes_instance(f, copies, derive_seed(seed, u64::MAX))?;
    let no = build_no_instance(f, copies, derive_seed(derive_seed(seed, 0), 1))?.no_graph;
    let bound = component_matching_bound(&no, &h, &mut DistanceCache::default())?;
    let n = h.n();
    Ok(TrialSummary {
        trials,
        n,
        k: spec.k,
        d: spec.d,
        eps,
        samples,
        radius: spec.radius(n),
        yes_accepts,
        no_rejects,
        yes_ci: wilson_interval(yes_accepts, trials, 1.96),
        no_ci: wilson_interval(no_rejects, trials, 1.96),
        no_farness_lower: bound.edits as f64 / (spec.d * n) as f64,
        no_farness_edits: bound.edits,
        farness_exact: bound.exact,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub reruns: usize,
    pub samples: usize,
    pub tolerance: f64,
    pub within: usize,
    pub errors: Vec<f64>,
}

impl Calibration {
    pub fn rate(&self) -> f64 {
        self.within as f64 / self.reruns as f64
    }
}

/// Reruns the count estimator with the trivial oracle and records the l1
/// error against the exact vector; `within` counts errors below
/// `tolerance`.
pub fn calibrate_estimates(
    g: &Graph,
    k: usize,
    samples: usize,
    tolerance: f64,
    reruns: usize,
    seed: u64,
) -> Result<Calibration> {
    let exact = exact_count_vector(g, k)?;
    let oracle = TrivialOracle::new(g, k);
    let errors: Result<Vec<f64>> = (0..reruns)
        .into_par_iter()
        .map(|r| {
            let mut ledger = QueryLedger::new();
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, r as u64));
            let e = estimate_count_vector(g, &oracle, &mut ledger, samples, &mut rng)?;
            Ok(e.vector.l1_distance(&exact))
        })
        .collect();
    let errors = errors?;
    Ok(Calibration {
        reruns,
        samples,
        tolerance,
        within: errors.iter().filter(|&&e| e < tolerance).count(),
        errors,
    })
}

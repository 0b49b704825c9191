use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{NeighborOracle, QueryLedger};
use crate::partition::{cut_edge_estimate, PartitionOracle};
use crate::seeds::derive_seed;

use super::count::CountVector;
use super::estimate::{estimate_count_vector, sample_count};

/// Partition seeds tried in the first phase before rejecting.
pub const PHASE_ONE_ATTEMPTS: u64 = 3;

/// The admissible count vectors of a property, with the tester parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertySpec {
    pub vectors: Vec<CountVector>,
    pub k: usize,
    pub d: usize,
    pub eps: f64,
}

impl PropertySpec {
    pub fn new(vectors: Vec<CountVector>, k: usize, d: usize, eps: f64) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::Usage("property needs at least one count vector".into()));
        }
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::Usage(format!("eps must lie in (0, 1), got {eps}")));
        }
        if k == 0 || d == 0 {
            return Err(Error::Usage("k and d must be positive".into()));
        }
        if let Some(v) = vectors.iter().find(|v| v.max_form_size() > k) {
            return Err(Error::Usage(format!(
                "count vector holds a form of size {} > k = {k}",
                v.max_form_size()
            )));
        }
        Ok(PropertySpec { vectors, k, d, eps })
    }

    /// `eps / (4 k d)`.
    pub fn delta(&self) -> f64 {
        self.eps / (4.0 * (self.k * self.d) as f64)
    }

    /// Acceptance radius `eps n / (2 k d)`.
    pub fn radius(&self, n: usize) -> f64 {
        self.eps * n as f64 / (2.0 * (self.k * self.d) as f64)
    }

    /// Samples per cut-edge estimate: `ceil(48 / eps)`.
    pub fn phase_one_samples(&self) -> usize {
        (48.0 / self.eps).ceil() as usize
    }

    pub fn bucket_budget(&self) -> usize {
        self.vectors.iter().map(CountVector::support).max().unwrap_or(1).max(2)
    }

    pub fn min_form_size(&self) -> usize {
        self.vectors
            .iter()
            .map(CountVector::min_form_size)
            .filter(|&s| s > 0)
            .min()
            .unwrap_or(1)
    }

    pub fn phase_two_samples(&self) -> usize {
        sample_count(self.delta(), self.bucket_budget(), self.min_form_size())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    CutEstimate,
    CountVector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TesterVerdict {
    pub accept: bool,
    pub phase: Phase,
    pub queries_used: u64,
    pub estimate: Option<CountVector>,
    /// Cut fraction per first-phase attempt.
    pub cut_fractions: Vec<f64>,
    /// Smallest l1 distance from the estimate to a spec vector.
    pub distance_to_spec: Option<f64>,
    pub samples: usize,
}

/// Two-phase tester. Phase one retries up to three oracle seeds, each
/// estimating the cut-edge fraction against `eps / 4`; oracle overflow or
/// no accepted seed rejects. Phase two estimates the count vector with
/// `delta = eps / (4 k d)` and accepts iff it lies within `eps n / (2 k d)`
/// of a spec vector.
pub fn run_property_tester<O, P>(graph: &O, oracle: &P, spec: &PropertySpec, seed: u64) -> Result<TesterVerdict>
where
    O: NeighborOracle + ?Sized,
    P: PartitionOracle + ?Sized,
{
    run_with_samples(graph, oracle, spec, seed, spec.phase_two_samples())
}

/// As [`run_property_tester`] with an explicit second-phase sample count.
pub fn run_with_samples<O, P>(
    graph: &O,
    oracle: &P,
    spec: &PropertySpec,
    seed: u64,
    samples: usize,
) -> Result<TesterVerdict>
where
    O: NeighborOracle + ?Sized,
    P: PartitionOracle + ?Sized,
{
    let mut ledger = QueryLedger::new();
    let mut cut_fractions = Vec::new();
    let reject_phase_one = |ledger: &QueryLedger, cut_fractions: Vec<f64>| TesterVerdict {
        accept: false,
        phase: Phase::CutEstimate,
        queries_used: ledger.neighbor_queries(),
        estimate: None,
        cut_fractions,
        distance_to_spec: None,
        samples: 0,
    };
    let mut found = false;
    for attempt in 0..PHASE_ONE_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, attempt));
        match cut_edge_estimate(
            graph,
            oracle,
            &mut ledger,
            spec.phase_one_samples(),
            spec.eps / 4.0,
            &mut rng,
        ) {
            Ok(e) => {
                cut_fractions.push(e.fraction);
                if e.accept {
                    found = true;
                    break;
                }
            }
            Err(Error::ComponentOverflow { .. }) => return Ok(reject_phase_one(&ledger, cut_fractions)),
            Err(e) => return Err(e),
        }
    }
    if !found {
        return Ok(reject_phase_one(&ledger, cut_fractions));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, PHASE_ONE_ATTEMPTS));
    let estimate = match estimate_count_vector(graph, oracle, &mut ledger, samples, &mut rng) {
        Ok(e) => e,
        Err(Error::ComponentOverflow { .. }) => {
            return Ok(TesterVerdict {
                accept: false,
                phase: Phase::CountVector,
                queries_used: ledger.neighbor_queries(),
                estimate: None,
                cut_fractions,
                distance_to_spec: None,
                samples,
            })
        }
        Err(e) => return Err(e),
    };
    let n = graph.vertex_count();
    let distance = spec
        .vectors
        .iter()
        .map(|w| estimate.vector.l1_distance(w))
        .fold(f64::INFINITY, f64::min);
    Ok(TesterVerdict {
        accept: distance <= spec.radius(n),
        phase: Phase::CountVector,
        queries_used: ledger.neighbor_queries(),
        estimate: Some(estimate.vector),
        cut_fractions,
        distance_to_spec: Some(distance),
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::graph::{disjoint_union, random_relabel, Graph};
    use crate::partition::TrivialOracle;
    use crate::tester::count::exact_count_vector;

    fn spec_for(g: &Graph, k: usize, eps: f64) -> PropertySpec {
        PropertySpec::new(vec![exact_count_vector(g, k).unwrap()], k, g.d(), eps).unwrap()
    }

    #[test]
    fn accepts_relabeled_member() {
        let parts = [generators::path(4, 3), generators::star(3, 3)];
        let h = disjoint_union(&[(&parts[0], 50), (&parts[1], 50)]).unwrap();
        let spec = spec_for(&h, 4, 0.5);
        for seed in 0..5 {
            let g = random_relabel(&h, seed);
            let o = TrivialOracle::new(&g, 4);
            let v = run_property_tester(&g, &o, &spec, seed).unwrap();
            assert!(v.accept, "{v:?}");
            assert_eq!(v.phase, Phase::CountVector);
        }
    }

    #[test]
    fn rejects_different_histogram() {
        let parts = [generators::path(4, 3), generators::star(3, 3)];
        let h = disjoint_union(&[(&parts[0], 50), (&parts[1], 50)]).unwrap();
        let far = disjoint_union(&[(&parts[0], 100)]).unwrap();
        let spec = spec_for(&h, 4, 0.5);
        let o = TrivialOracle::new(&far, 4);
        let v = run_property_tester(&far, &o, &spec, 1).unwrap();
        assert!(!v.accept);
        assert_eq!(v.phase, Phase::CountVector);
    }

    #[test]
    fn oversized_component_rejects_in_phase_one() {
        let h = disjoint_union(&[(&generators::path(4, 3), 25)]).unwrap();
        let spec = spec_for(&h, 4, 0.5);
        let g = generators::path(100, 3);
        let o = TrivialOracle::new(&g, 4);
        let v = run_property_tester(&g, &o, &spec, 3).unwrap();
        assert!(!v.accept);
        assert_eq!(v.phase, Phase::CutEstimate);
        assert!(v.queries_used > 0);
    }

    #[test]
    fn spec_validation() {
        assert!(PropertySpec::new(vec![], 4, 3, 0.1).is_err());
        let big = exact_count_vector(&generators::path(6, 2), 6).unwrap();
        assert!(PropertySpec::new(vec![big], 4, 3, 0.1).is_err());
    }
}

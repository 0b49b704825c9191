use std::collections::HashMap;

use rand::Rng;

use crate::canon::{canonical_form, CanonicalForm};
use crate::error::{Error, Result};
use crate::graph::Vertex;
use crate::oracle::{NeighborOracle, QueryLedger};
use crate::partition::PartitionOracle;

use super::count::CountVector;

/// Samples giving `||v - cnt||_1 < delta * n` with probability at least
/// `1 - 1/B`, when every block has at least `t_min` vertices.
///
/// The empirical block-type distribution over `N` draws has expected l1
/// error at most `sqrt(B / N)` and concentrates within
/// `sqrt(2 ln(1/beta) / N)` of it (bounded differences, `2/N` per draw).
/// A count error is a probability error scaled by at most `n / t_min`.
pub fn sample_count(delta: f64, bucket_budget: usize, t_min: usize) -> usize {
    let b = bucket_budget.max(2) as f64;
    let beta = 1.0 / b;
    let spread = b.sqrt() + (2.0 * (1.0 / beta).ln()).sqrt();
    let target = delta * t_min.max(1) as f64;
    (spread * spread / (target * target)).ceil() as usize
}

#[derive(Debug, Clone, PartialEq)]
pub struct CountEstimate {
    pub vector: CountVector,
    pub samples: usize,
    /// Queries charged by this call.
    pub queries: u64,
    pub distinct_blocks: usize,
}

/// Estimates the count vector of the oracle's partition: each uniform
/// vertex reveals its block, and `count(F) ~ hits(F) / N * n / |F|`.
/// Blocks are remembered for the rest of the call, so each is explored
/// once. Oracle failures (overflow) propagate.
pub fn estimate_count_vector<O, P, R>(
    graph: &O,
    oracle: &P,
    ledger: &mut QueryLedger,
    samples: usize,
    rng: &mut R,
) -> Result<CountEstimate>
where
    O: NeighborOracle + ?Sized,
    P: PartitionOracle + ?Sized,
    R: Rng + ?Sized,
{
    let n = graph.vertex_count();
    if n == 0 || samples == 0 {
        return Err(Error::Usage("estimation needs vertices and samples".into()));
    }
    let before = ledger.neighbor_queries();
    let d = graph.degree_bound();
    let mut block_of: HashMap<Vertex, usize> = HashMap::new();
    let mut forms: Vec<CanonicalForm> = Vec::new();
    let mut hits: Vec<usize> = Vec::new();
    for _ in 0..samples {
        let s = rng.random_range(0..n) as Vertex;
        let b = match block_of.get(&s) {
            Some(&b) => b,
            None => {
                let view = oracle.block(ledger, s)?;
                let b = forms.len();
                forms.push(canonical_form(&view.to_graph(d)));
                hits.push(0);
                for &v in &view.vertices {
                    block_of.insert(v, b);
                }
                b
            }
        };
        hits[b] += 1;
    }
    let mut vector = CountVector::new(n);
    for (form, h) in forms.iter().zip(&hits) {
        if *h > 0 {
            let scale = n as f64 / (samples as f64 * form.vertex_count() as f64);
            vector.add(form.clone(), *h as f64 * scale);
        }
    }
    Ok(CountEstimate {
        vector,
        samples,
        queries: ledger.neighbor_queries() - before,
        distinct_blocks: forms.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::graph::disjoint_union;
    use crate::partition::TrivialOracle;
    use crate::tester::count::exact_count_vector;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_form_concentrates() {
        let c5 = generators::cycle(5, 2);
        let g = disjoint_union(&[(&c5, 40)]).unwrap();
        let o = TrivialOracle::new(&g, 5);
        let mut ledger = QueryLedger::new();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let e = estimate_count_vector(&g, &o, &mut ledger, 500, &mut rng).unwrap();
        assert_eq!(e.vector.support(), 1);
        assert!((e.vector.get(&canonical_form(&c5)) - 40.0).abs() < 1e-9);
        assert_eq!(e.queries, ledger.neighbor_queries());
    }

    #[test]
    fn error_within_delta_n() {
        let parts = [generators::path(4, 3), generators::star(3, 3), generators::cycle(4, 3)];
        let refs: Vec<(&crate::graph::Graph, usize)> = parts.iter().zip([30, 20, 10]).collect();
        let g = crate::graph::random_relabel(&disjoint_union(&refs).unwrap(), 1);
        let exact = exact_count_vector(&g, 4).unwrap();
        let delta = 0.02;
        let samples = sample_count(delta, 3, 4);
        let o = TrivialOracle::new(&g, 4);
        let mut good = 0;
        for seed in 0..40 {
            let mut ledger = QueryLedger::new();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let e = estimate_count_vector(&g, &o, &mut ledger, samples, &mut rng).unwrap();
            good += (e.vector.l1_distance(&exact) < delta * g.n() as f64) as usize;
        }
        assert!(good >= 38);
    }

    #[test]
    fn sample_count_grows_with_budget() {
        let a = sample_count(0.01, 4, 16);
        let b = sample_count(0.01, 12, 16);
        assert!(b > a);
        assert!(sample_count(0.005, 4, 16) >= 4 * a - 4);
    }
}

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Vertex;
use crate::oracle::{neighbor_query, NeighborOracle, QueryLedger};

use super::PartitionOracle;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutEstimate {
    /// Fraction of sampled (vertex, slot) pairs whose edge is cut.
    pub fraction: f64,
    pub samples: usize,
    pub cut_hits: usize,
    /// `fraction <= threshold`.
    pub accept: bool,
}

/// Samples a uniform vertex and a uniform slot; the pair counts as cut when
/// the slot holds a neighbor in a different block. Empty slots are never
/// cut. The expected fraction is `2 * cut_edges / (d * n)`.
///
/// Oracle overflow propagates as an error so callers can reject.
pub fn cut_edge_estimate<O, P, R>(
    graph: &O,
    oracle: &P,
    ledger: &mut QueryLedger,
    samples: usize,
    threshold: f64,
    rng: &mut R,
) -> Result<CutEstimate>
where
    O: NeighborOracle + ?Sized,
    P: PartitionOracle + ?Sized,
    R: Rng + ?Sized,
{
    let n = graph.vertex_count();
    let d = graph.degree_bound();
    if n == 0 || samples == 0 {
        return Err(Error::Usage("cut estimate needs vertices and samples".into()));
    }
    let mut cut_hits = 0;
    for _ in 0..samples {
        let u = rng.random_range(0..n) as Vertex;
        let slot = rng.random_range(0..d);
        let Some(v) = neighbor_query(graph, ledger, u, slot)? else {
            continue;
        };
        let block = oracle.block(ledger, u)?;
        if !block.contains(v) {
            cut_hits += 1;
        }
    }
    let fraction = cut_hits as f64 / samples as f64;
    Ok(CutEstimate {
        fraction,
        samples,
        cut_hits,
        accept: fraction <= threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::graph::disjoint_union;
    use crate::partition::{GlobalOracle, Partition, TrivialOracle};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn component_union_has_no_cut() {
        let tri = generators::cycle(3, 2);
        let g = disjoint_union(&[(&tri, 10)]).unwrap();
        let o = TrivialOracle::new(&g, 3);
        let mut ledger = QueryLedger::new();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let e = cut_edge_estimate(&g, &o, &mut ledger, 200, 0.05, &mut rng).unwrap();
        assert_eq!(e.cut_hits, 0);
        assert!(e.accept);
    }

    #[test]
    fn half_cut_slots_estimate_near_half() {
        // perfect matching 0-1, 2-3, ...; every vertex has degree 1 = d and
        // every other matching edge is cut by a pairing of blocks
        let n = 400;
        let edges: Vec<_> = (0..n / 2).map(|i| (2 * i as Vertex, 2 * i as Vertex + 1)).collect();
        let g = crate::graph::Graph::from_edges(n, 1, &edges).unwrap();
        let blocks: Vec<Vec<Vertex>> = (0..n as Vertex)
            .map(|v| if (v / 2) % 2 == 0 { vec![v] } else { vec![] })
            .filter(|b| !b.is_empty())
            .chain((0..n as Vertex / 4).map(|i| vec![4 * i + 2, 4 * i + 3]))
            .collect();
        let p = Partition::from_blocks(&g, blocks, 2).unwrap();
        p.verify(&g).unwrap();
        assert_eq!(2 * p.cut_edges(), n / 2);
        let o = GlobalOracle::new(&g, &p);
        // 90% binomial interval at p = 0.5 with 1000 samples is about +-0.026
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut within = 0;
        for _ in 0..50 {
            let mut ledger = QueryLedger::new();
            let e = cut_edge_estimate(&g, &o, &mut ledger, 1000, 0.25, &mut rng).unwrap();
            within += ((e.fraction - 0.5).abs() <= 0.05) as usize;
        }
        assert!(within >= 45);
    }

    #[test]
    fn overflow_propagates() {
        let g = generators::path(30, 2);
        let o = TrivialOracle::new(&g, 4);
        let mut ledger = QueryLedger::new();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        assert!(cut_edge_estimate(&g, &o, &mut ledger, 50, 0.1, &mut rng).is_err());
    }
}

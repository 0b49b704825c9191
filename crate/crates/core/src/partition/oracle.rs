use crate::error::Result;
use crate::graph::{Graph, Vertex};
use crate::oracle::{explore_component, explore_within, ComponentView, NeighborOracle, QueryLedger};

use super::Partition;

/// Answers "which block holds v" through metered neighbor queries. All
/// vertices of a block get the same answer.
pub trait PartitionOracle {
    /// Upper bound on block size.
    fn k(&self) -> usize;

    fn block(&self, ledger: &mut QueryLedger, v: Vertex) -> Result<ComponentView>;
}

/// Blocks are connected components, explored with cap `k`. Overflow means
/// the input is not a union of components of size at most `k`.
#[derive(Debug, Clone, Copy)]
pub struct TrivialOracle<'a, O: NeighborOracle + ?Sized> {
    pub graph: &'a O,
    pub k: usize,
}

impl<'a, O: NeighborOracle + ?Sized> TrivialOracle<'a, O> {
    pub fn new(graph: &'a O, k: usize) -> Self {
        TrivialOracle { graph, k }
    }
}

impl<O: NeighborOracle + ?Sized> PartitionOracle for TrivialOracle<'_, O> {
    fn k(&self) -> usize {
        self.k
    }

    fn block(&self, ledger: &mut QueryLedger, v: Vertex) -> Result<ComponentView> {
        explore_component(self.graph, ledger, v, self.k)
    }
}

/// A precomputed partition, revealed by BFS that stays inside the block.
#[derive(Debug, Clone, Copy)]
pub struct GlobalOracle<'a> {
    pub graph: &'a Graph,
    pub partition: &'a Partition,
}

impl<'a> GlobalOracle<'a> {
    pub fn new(graph: &'a Graph, partition: &'a Partition) -> Self {
        GlobalOracle { graph, partition }
    }
}

impl PartitionOracle for GlobalOracle<'_> {
    fn k(&self) -> usize {
        self.partition.k()
    }

    fn block(&self, ledger: &mut QueryLedger, v: Vertex) -> Result<ComponentView> {
        let b = self.partition.block_of(v);
        let cap = self.partition.k().max(1);
        explore_within(self.graph, ledger, v, cap, |w| self.partition.block_of(w) == b)
    }
}

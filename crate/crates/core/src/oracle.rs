//! The neighbor-query model: metered access to adjacency lists.

use std::cell::RefCell;
use std::collections::{HashMap, HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{random_permutation, Graph, Vertex};

/// Random access to the adjacency lists of a bounded-degree graph.
pub trait NeighborOracle {
    fn vertex_count(&self) -> usize;
    fn degree_bound(&self) -> usize;
    /// The `slot`-th neighbor of `v`, or `None` when the list is shorter.
    /// Callers guarantee `v < n` and `slot < d`.
    fn neighbor(&self, v: Vertex, slot: usize) -> Option<Vertex>;
}

impl NeighborOracle for Graph {
    fn vertex_count(&self) -> usize {
        self.n()
    }

    fn degree_bound(&self) -> usize {
        self.d()
    }

    fn neighbor(&self, v: Vertex, slot: usize) -> Option<Vertex> {
        self.neighbors(v).get(slot).copied()
    }
}

/// Query accounting for one simulated algorithm run.
#[derive(Debug, Default, Clone)]
pub struct QueryLedger {
    neighbor_queries: u64,
    touched: HashSet<Vertex>,
}

impl QueryLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn neighbor_queries(&self) -> u64 {
        self.neighbor_queries
    }

    pub fn vertices_touched(&self) -> usize {
        self.touched.len()
    }

    pub fn has_touched(&self, v: Vertex) -> bool {
        self.touched.contains(&v)
    }
}

/// One metered "i-th neighbor of v" query.
pub fn neighbor_query<O: NeighborOracle + ?Sized>(
    g: &O,
    ledger: &mut QueryLedger,
    v: Vertex,
    slot: usize,
) -> Result<Option<Vertex>> {
    let n = g.vertex_count();
    if v as usize >= n {
        return Err(Error::VertexOutOfRange {
            vertex: v as usize,
            n,
        });
    }
    let d = g.degree_bound();
    if slot >= d {
        return Err(Error::SlotOutOfRange { slot, d });
    }
    ledger.neighbor_queries += 1;
    ledger.touched.insert(v);
    let answer = g.neighbor(v, slot);
    if let Some(w) = answer {
        ledger.touched.insert(w);
    }
    Ok(answer)
}

/// A fully explored connected set: global vertex ids in discovery order and
/// the induced adjacency in local indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentView {
    pub vertices: Vec<Vertex>,
    pub local_adj: Vec<Vec<u32>>,
}

impl ComponentView {
    pub fn size(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.local_adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Smallest vertex id; identifies the block among its peers.
    pub fn key(&self) -> Vertex {
        self.vertices.iter().copied().min().unwrap_or(Vertex::MAX)
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.vertices.contains(&v)
    }

    pub fn to_graph(&self, d: usize) -> Graph {
        Graph::from_adjacency(d, self.local_adj.clone())
            .expect("explored component is a valid graph")
    }
}

/// BFS from `v` through metered queries. Fails with
/// [`Error::ComponentOverflow`] once more than `cap` vertices are seen.
pub fn explore_component<O: NeighborOracle + ?Sized>(
    g: &O,
    ledger: &mut QueryLedger,
    v: Vertex,
    cap: usize,
) -> Result<ComponentView> {
    explore_within(g, ledger, v, cap, |_| true)
}

/// BFS restricted to vertices accepted by `inside`. Queries are still
/// charged for every slot read.
pub(crate) fn explore_within<O, F>(
    g: &O,
    ledger: &mut QueryLedger,
    v: Vertex,
    cap: usize,
    inside: F,
) -> Result<ComponentView>
where
    O: NeighborOracle + ?Sized,
    F: Fn(Vertex) -> bool,
{
    if cap == 0 {
        return Err(Error::Usage("component cap must be at least 1".into()));
    }
    if v as usize >= g.vertex_count() {
        return Err(Error::VertexOutOfRange {
            vertex: v as usize,
            n: g.vertex_count(),
        });
    }
    let d = g.degree_bound();
    let mut index: HashMap<Vertex, u32> = HashMap::new();
    let mut vertices = vec![v];
    let mut local_adj: Vec<Vec<u32>> = vec![Vec::new()];
    index.insert(v, 0);
    let mut queue = VecDeque::from([v]);
    while let Some(u) = queue.pop_front() {
        let lu = index[&u];
        for slot in 0..d {
            let Some(w) = neighbor_query(g, ledger, u, slot)? else {
                break;
            };
            if !inside(w) {
                continue;
            }
            let lw = match index.get(&w) {
                Some(&lw) => lw,
                None => {
                    if vertices.len() >= cap {
                        return Err(Error::ComponentOverflow { start: v, cap });
                    }
                    let lw = vertices.len() as u32;
                    index.insert(w, lw);
                    vertices.push(w);
                    local_adj.push(Vec::new());
                    queue.push_back(w);
                    lw
                }
            };
            local_adj[lu as usize].push(lw);
        }
    }
    for list in &mut local_adj {
        list.sort_unstable();
    }
    Ok(ComponentView {
        vertices,
        local_adj,
    })
}

/// A uniform random bijection revealed one coordinate at a time.
#[derive(Debug)]
struct LazyBijection {
    n: usize,
    new_to_old: HashMap<Vertex, Vertex>,
    old_to_new: HashMap<Vertex, Vertex>,
    rng: ChaCha8Rng,
}

impl LazyBijection {
    fn old_of(&mut self, new: Vertex) -> Vertex {
        if let Some(&o) = self.new_to_old.get(&new) {
            return o;
        }
        let o = loop {
            let cand = self.rng.random_range(0..self.n) as Vertex;
            if !self.old_to_new.contains_key(&cand) {
                break cand;
            }
        };
        self.new_to_old.insert(new, o);
        self.old_to_new.insert(o, new);
        o
    }

    fn new_of(&mut self, old: Vertex) -> Vertex {
        if let Some(&w) = self.old_to_new.get(&old) {
            return w;
        }
        let w = loop {
            let cand = self.rng.random_range(0..self.n) as Vertex;
            if !self.new_to_old.contains_key(&cand) {
                break cand;
            }
        };
        self.new_to_old.insert(w, old);
        self.old_to_new.insert(old, w);
        w
    }
}

#[derive(Debug)]
enum Labeling {
    Eager { perm: Vec<Vertex>, inv: Vec<Vertex> },
    Lazy(Box<RefCell<LazyBijection>>),
}

/// A uniformly relabeled disjoint union of equal-size members, answered
/// without materializing the adjacency lists.
///
/// Component slot `c` holds a copy of `members[layout[c]]`; before
/// relabeling it occupies ids `c*t .. (c+1)*t`. Slot order follows the
/// ascending-new-id convention of [`Graph::permuted`].
#[derive(Debug)]
pub struct LabeledUnion<'a> {
    members: &'a [Graph],
    layout: Vec<u32>,
    t: usize,
    d: usize,
    labeling: Labeling,
}

impl<'a> LabeledUnion<'a> {
    /// Eager labeling: identical to `random_relabel(disjoint_union(..), seed)`.
    pub fn eager(members: &'a [Graph], layout: Vec<u32>, seed: u64) -> Result<Self> {
        let (t, d) = Self::check(members, &layout)?;
        let n = t * layout.len();
        let perm = random_permutation(n, seed);
        let mut inv = vec![0; n];
        for (old, &new) in perm.iter().enumerate() {
            inv[new as usize] = old as Vertex;
        }
        Ok(LabeledUnion {
            members,
            layout,
            t,
            d,
            labeling: Labeling::Eager { perm, inv },
        })
    }

    /// Lazy labeling: a uniform bijection sampled on demand. Cost grows
    /// with the number of ids touched, not with `n`.
    pub fn lazy(members: &'a [Graph], layout: Vec<u32>, seed: u64) -> Result<Self> {
        let (t, d) = Self::check(members, &layout)?;
        let n = t * layout.len();
        Ok(LabeledUnion {
            members,
            layout,
            t,
            d,
            labeling: Labeling::Lazy(Box::new(RefCell::new(LazyBijection {
                n,
                new_to_old: HashMap::new(),
                old_to_new: HashMap::new(),
                rng: ChaCha8Rng::seed_from_u64(seed),
            }))),
        })
    }

    fn check(members: &[Graph], layout: &[u32]) -> Result<(usize, usize)> {
        let first = members
            .first()
            .ok_or_else(|| Error::Usage("union needs at least one member".into()))?;
        let (t, d) = (first.n(), first.d());
        for g in members {
            if g.n() != t {
                return Err(Error::UnequalComponents {
                    first: t,
                    other: g.n(),
                });
            }
            if g.d() != d {
                return Err(Error::InvalidGraph("members disagree on degree bound".into()));
            }
        }
        if let Some(&bad) = layout.iter().find(|&&m| m as usize >= members.len()) {
            return Err(Error::Usage(format!("layout names unknown member {bad}")));
        }
        if t == 0 {
            return Err(Error::Usage("members must be nonempty".into()));
        }
        let n = t.checked_mul(layout.len()).filter(|&n| n <= Vertex::MAX as usize);
        if n.is_none() {
            return Err(Error::TooLarge {
                what: "union size",
                n: usize::MAX,
                limit: Vertex::MAX as usize,
            });
        }
        Ok((t, d))
    }

    pub fn component_size(&self) -> usize {
        self.t
    }

    pub fn component_count(&self) -> usize {
        self.layout.len()
    }

    pub fn layout(&self) -> &[u32] {
        &self.layout
    }

    fn to_old(&self, v: Vertex) -> Vertex {
        match &self.labeling {
            Labeling::Eager { inv, .. } => inv[v as usize],
            Labeling::Lazy(b) => b.borrow_mut().old_of(v),
        }
    }

    fn to_new(&self, old: Vertex) -> Vertex {
        match &self.labeling {
            Labeling::Eager { perm, .. } => perm[old as usize],
            Labeling::Lazy(b) => b.borrow_mut().new_of(old),
        }
    }

    /// Materializes the labeled graph (eager labelings only reproduce the
    /// full permutation; lazy ones reveal it id by id).
    pub fn to_graph(&self) -> Graph {
        let n = self.vertex_count();
        let adj = (0..n as Vertex)
            .map(|v| {
                let deg = (0..self.d).take_while(|&i| self.neighbor(v, i).is_some()).count();
                (0..deg).map(|i| self.neighbor(v, i).unwrap()).collect()
            })
            .collect();
        Graph::from_adjacency(self.d, adj).expect("union of valid members")
    }
}

impl NeighborOracle for LabeledUnion<'_> {
    fn vertex_count(&self) -> usize {
        self.t * self.layout.len()
    }

    fn degree_bound(&self) -> usize {
        self.d
    }

    fn neighbor(&self, v: Vertex, slot: usize) -> Option<Vertex> {
        let old = self.to_old(v) as usize;
        let (c, local) = (old / self.t, old % self.t);
        let member = &self.members[self.layout[c] as usize];
        let list = member.neighbors(local as Vertex);
        if slot >= list.len() {
            return None;
        }
        let base = (c * self.t) as Vertex;
        let mut mapped: Vec<Vertex> = list.iter().map(|&w| self.to_new(base + w)).collect();
        mapped.sort_unstable();
        Some(mapped[slot])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::graph::{disjoint_union, random_relabel};

    #[test]
    fn isolated_vertex_has_no_neighbors() {
        let g = Graph::empty(1, 3);
        let mut ledger = QueryLedger::new();
        for i in 0..3 {
            assert_eq!(neighbor_query(&g, &mut ledger, 0, i).unwrap(), None);
        }
        assert_eq!(ledger.neighbor_queries(), 3);
    }

    #[test]
    fn path_slots_in_order() {
        let g = generators::path(3, 2);
        let mut ledger = QueryLedger::new();
        assert_eq!(neighbor_query(&g, &mut ledger, 1, 0).unwrap(), Some(0));
        assert_eq!(neighbor_query(&g, &mut ledger, 1, 1).unwrap(), Some(2));
        assert_eq!(ledger.neighbor_queries(), 2);
        assert_eq!(ledger.vertices_touched(), 3);
    }

    #[test]
    fn grid_center_neighbors() {
        let g = generators::grid(3, 3, 4);
        let mut ledger = QueryLedger::new();
        let center = 4;
        let got: Vec<_> = (0..4)
            .map(|i| neighbor_query(&g, &mut ledger, center, i).unwrap().unwrap())
            .collect();
        // (0,1), (1,0), (1,2), (2,1) in row-major ids
        assert_eq!(got, vec![1, 3, 5, 7]);
    }

    #[test]
    fn usage_errors_are_distinct_from_none() {
        let g = generators::path(3, 2);
        let mut ledger = QueryLedger::new();
        assert!(matches!(
            neighbor_query(&g, &mut ledger, 3, 0),
            Err(Error::VertexOutOfRange { .. })
        ));
        assert!(matches!(
            neighbor_query(&g, &mut ledger, 0, 2),
            Err(Error::SlotOutOfRange { .. })
        ));
        assert_eq!(ledger.neighbor_queries(), 0);
    }

    #[test]
    fn explore_edge_and_overflow() {
        let g = generators::path(2, 2);
        let mut ledger = QueryLedger::new();
        let c = explore_component(&g, &mut ledger, 0, 5).unwrap();
        assert_eq!(c.size(), 2);
        assert_eq!(c.edge_count(), 1);

        let long = generators::path(10, 2);
        assert!(matches!(
            explore_component(&long, &mut QueryLedger::new(), 0, 4),
            Err(Error::ComponentOverflow { cap: 4, .. })
        ));
        assert!(explore_component(&long, &mut QueryLedger::new(), 0, 0).is_err());
    }

    #[test]
    fn explore_query_bounds() {
        let tri = generators::cycle(3, 4);
        let g = disjoint_union(&[(&tri, 2), (&generators::path(5, 4), 1)]).unwrap();
        for v in 0..g.n() as Vertex {
            let mut ledger = QueryLedger::new();
            let c = explore_component(&g, &mut ledger, v, 100).unwrap();
            let t = c.size() as u64;
            assert!(ledger.neighbor_queries() >= t);
            assert!(ledger.neighbor_queries() <= 4 * (t + 1));
        }
    }

    #[test]
    fn eager_union_matches_materialized_relabel() {
        let a = generators::cycle(4, 3);
        let b = generators::path(4, 3);
        let members = vec![a.clone(), b.clone()];
        let layout = vec![0, 0, 1, 1, 1];
        let u = LabeledUnion::eager(&members, layout, 99).unwrap();
        let direct = random_relabel(&disjoint_union(&[(&a, 2), (&b, 3)]).unwrap(), 99);
        assert_eq!(u.to_graph(), direct);
    }

    #[test]
    fn lazy_union_is_a_valid_labeling() {
        let members = vec![generators::cycle(5, 2)];
        let u = LabeledUnion::lazy(&members, vec![0; 40], 3).unwrap();
        let g = u.to_graph();
        assert_eq!(g.n(), 200);
        assert_eq!(g.edge_count(), 200);
        assert!(g.components().iter().all(|c| c.len() == 5));
    }
}

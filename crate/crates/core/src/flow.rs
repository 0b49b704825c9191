//! Small min-cost flow and unit-capacity max-flow helpers.

use std::collections::VecDeque;

use crate::graph::{Graph, Vertex};

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: i64,
    cost: i64,
}

/// Successive shortest paths with Bellman-Ford; sized for a few hundred
/// nodes.
#[derive(Debug, Clone, Default)]
pub struct MinCostFlow {
    arcs: Vec<Arc>,
    out: Vec<Vec<usize>>,
}

impl MinCostFlow {
    pub fn new(nodes: usize) -> Self {
        MinCostFlow {
            arcs: Vec::new(),
            out: vec![Vec::new(); nodes],
        }
    }

    pub fn add_edge(&mut self, from: usize, to: usize, cap: i64, cost: i64) {
        self.out[from].push(self.arcs.len());
        self.arcs.push(Arc { to, cap, cost });
        self.out[to].push(self.arcs.len());
        self.arcs.push(Arc {
            to: from,
            cap: 0,
            cost: -cost,
        });
    }

    /// Pushes up to `limit` units from `s` to `t`; returns `(flow, cost)`.
    pub fn run(&mut self, s: usize, t: usize, limit: i64) -> (i64, i64) {
        let nodes = self.out.len();
        let (mut flow, mut cost) = (0i64, 0i64);
        while flow < limit {
            let mut dist = vec![i64::MAX; nodes];
            let mut via = vec![usize::MAX; nodes];
            let mut queued = vec![false; nodes];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                queued[u] = false;
                for &a in &self.out[u] {
                    let arc = &self.arcs[a];
                    if arc.cap > 0 && dist[u] + arc.cost < dist[arc.to] {
                        dist[arc.to] = dist[u] + arc.cost;
                        via[arc.to] = a;
                        if !queued[arc.to] {
                            queued[arc.to] = true;
                            queue.push_back(arc.to);
                        }
                    }
                }
            }
            if dist[t] == i64::MAX {
                break;
            }
            let mut push = limit - flow;
            let mut v = t;
            while v != s {
                let a = via[v];
                push = push.min(self.arcs[a].cap);
                v = self.arcs[a ^ 1].to;
            }
            let mut v = t;
            while v != s {
                let a = via[v];
                self.arcs[a].cap -= push;
                self.arcs[a ^ 1].cap += push;
                v = self.arcs[a ^ 1].to;
            }
            flow += push;
            cost += push * dist[t];
        }
        (flow, cost)
    }
}

/// Unit-capacity max-flow between `s` and `t` in an undirected graph.
fn local_edge_connectivity(g: &Graph, s: Vertex, t: Vertex) -> usize {
    let n = g.n();
    // residual capacity per directed slot, indexed like the adjacency lists
    let mut cap: Vec<Vec<i32>> = (0..n).map(|v| vec![1; g.degree(v as Vertex)]).collect();
    let slot_of = |u: Vertex, w: Vertex| g.neighbors(u).iter().position(|&x| x == w).unwrap();
    let mut flow = 0;
    loop {
        let mut prev: Vec<Option<(Vertex, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[s as usize] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for (i, &w) in g.neighbors(u).iter().enumerate() {
                if cap[u as usize][i] > 0 && !seen[w as usize] {
                    seen[w as usize] = true;
                    prev[w as usize] = Some((u, i));
                    queue.push_back(w);
                }
            }
        }
        if !seen[t as usize] {
            return flow;
        }
        let mut v = t;
        while let Some((u, i)) = prev[v as usize] {
            cap[u as usize][i] -= 1;
            let back = slot_of(v, u);
            cap[v as usize][back] += 1;
            v = u;
        }
        flow += 1;
    }
}

/// Edge connectivity: the fewest edge deletions that disconnect `g`.
/// Zero for graphs on fewer than two vertices or already disconnected.
pub fn edge_connectivity(g: &Graph) -> usize {
    if g.n() < 2 || !g.is_connected() {
        return 0;
    }
    (1..g.n() as Vertex)
        .map(|v| local_edge_connectivity(g, 0, v))
        .min()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    #[test]
    fn assignment_via_flow() {
        // 2x2 assignment with costs [[4, 1], [2, 3]] -> optimum 3
        let mut f = MinCostFlow::new(6);
        let (s, t) = (4, 5);
        f.add_edge(s, 0, 1, 0);
        f.add_edge(s, 1, 1, 0);
        f.add_edge(2, t, 1, 0);
        f.add_edge(3, t, 1, 0);
        f.add_edge(0, 2, 1, 4);
        f.add_edge(0, 3, 1, 1);
        f.add_edge(1, 2, 1, 2);
        f.add_edge(1, 3, 1, 3);
        assert_eq!(f.run(s, t, 10), (2, 3));
    }

    #[test]
    fn connectivity_of_standard_graphs() {
        assert_eq!(edge_connectivity(&generators::path(5, 2)), 1);
        assert_eq!(edge_connectivity(&generators::cycle(6, 2)), 2);
        assert_eq!(edge_connectivity(&generators::complete(5, 4)), 4);
        assert_eq!(edge_connectivity(&generators::grid(4, 4, 4)), 2);
        assert_eq!(edge_connectivity(&Graph::empty(1, 1)), 0);
        assert_eq!(edge_connectivity(&Graph::empty(2, 1)), 0);
    }
}

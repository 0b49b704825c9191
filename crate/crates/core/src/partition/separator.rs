//! Balanced vertex separators: exhaustive search for small graphs, a
//! heuristic beyond the budget, and tree centroids.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// Default number of candidate subsets examined before giving up on
/// exactness.
pub const SEPARATOR_SUBSET_BUDGET: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct SeparatorResult {
    pub vertices: Vec<Vertex>,
    /// Largest remaining component as a fraction of `n`.
    pub balance: f64,
    /// True when no smaller set meets the balance bound.
    pub exact: bool,
}

impl SeparatorResult {
    pub fn size(&self) -> usize {
        self.vertices.len()
    }
}

/// Largest component of `g` after deleting `removed`.
pub fn largest_remaining_component(g: &Graph, removed: &[Vertex]) -> usize {
    let n = g.n();
    let mut gone = vec![false; n];
    for &r in removed {
        gone[r as usize] = true;
    }
    let mut best = 0;
    let mut queue = VecDeque::new();
    for s in 0..n {
        if gone[s] {
            continue;
        }
        gone[s] = true;
        queue.push_back(s as Vertex);
        let mut size = 0;
        while let Some(u) = queue.pop_front() {
            size += 1;
            for &w in g.neighbors(u) {
                if !gone[w as usize] {
                    gone[w as usize] = true;
                    queue.push_back(w);
                }
            }
        }
        best = best.max(size);
    }
    best
}

/// Largest component size allowed by `balance` on `n` vertices.
pub fn balance_limit(n: usize, balance: f64) -> usize {
    // tolerate float noise in fractions like 2/3
    ((balance * n as f64) + 1e-9).floor() as usize
}

pub fn is_balanced_separator(g: &Graph, set: &[Vertex], balance: f64) -> bool {
    largest_remaining_component(g, set) <= balance_limit(g.n(), balance)
}

fn result(g: &Graph, vertices: Vec<Vertex>, exact: bool) -> SeparatorResult {
    let balance = if g.n() == 0 {
        0.0
    } else {
        largest_remaining_component(g, &vertices) as f64 / g.n() as f64
    };
    SeparatorResult {
        vertices,
        balance,
        exact,
    }
}

/// Smallest set whose removal leaves every component at most `balance * n`
/// vertices. Subsets are tried by increasing size; once `budget` subsets
/// have been examined the heuristic answer is returned with `exact = false`.
pub fn min_balanced_separator(g: &Graph, balance: f64, budget: u64) -> Result<SeparatorResult> {
    if !(0.0..=1.0).contains(&balance) || balance.is_nan() {
        return Err(Error::Usage(format!("balance must lie in [0, 1], got {balance}")));
    }
    let n = g.n();
    let limit = balance_limit(n, balance);
    if n > 64 {
        return Ok(result(g, heuristic_separator(g, balance), false));
    }
    let masks: Vec<u64> = (0..n as Vertex)
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << w))
        .collect();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let largest = |removed: u64| -> usize {
        let mut left = full & !removed;
        let mut best = 0;
        while left != 0 {
            let start = left & left.wrapping_neg();
            let mut comp = start;
            let mut frontier = start;
            while frontier != 0 {
                let v = frontier.trailing_zeros() as usize;
                frontier &= frontier - 1;
                let fresh = masks[v] & left & !comp;
                comp |= fresh;
                frontier |= fresh;
            }
            best = best.max(comp.count_ones() as usize);
            left &= !comp;
        }
        best
    };
    let mut examined = 0u64;
    for size in 0..=n {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            examined += 1;
            if examined > budget {
                return Ok(result(g, heuristic_separator(g, balance), false));
            }
            let mask = combo.iter().fold(0u64, |m, &v| m | 1 << v);
            if largest(mask) <= limit {
                let vertices = combo.iter().map(|&v| v as Vertex).collect();
                return Ok(result(g, vertices, true));
            }
            // next combination in lexicographic order
            let Some(i) = (0..size).rev().find(|&i| combo[i] < n - size + i) else {
                break;
            };
            combo[i] += 1;
            for j in i + 1..size {
                combo[j] = combo[j - 1] + 1;
            }
        }
    }
    unreachable!("removing every vertex always balances")
}

/// BFS-layer cuts from several roots, falling back to greedily deleting
/// high-degree vertices of the largest component.
pub fn heuristic_separator(g: &Graph, balance: f64) -> Vec<Vertex> {
    let n = g.n();
    let limit = balance_limit(n, balance);
    let mut best: Option<Vec<Vertex>> = None;
    let roots: Vec<Vertex> = if n <= 64 {
        (0..n as Vertex).collect()
    } else {
        (0..16).map(|i| (i * n / 16) as Vertex).collect()
    };
    for &root in &roots {
        let mut dist = vec![usize::MAX; n];
        dist[root as usize] = 0;
        let mut queue = VecDeque::from([root]);
        let mut layers: Vec<Vec<Vertex>> = Vec::new();
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize];
            if layers.len() <= du {
                layers.push(Vec::new());
            }
            layers[du].push(u);
            for &w in g.neighbors(u) {
                if dist[w as usize] == usize::MAX {
                    dist[w as usize] = du + 1;
                    queue.push_back(w);
                }
            }
        }
        for layer in &layers {
            if best.as_ref().is_some_and(|b| b.len() <= layer.len()) {
                continue;
            }
            if largest_remaining_component(g, layer) <= limit {
                best = Some(layer.clone());
            }
        }
    }
    let mut greedy: Vec<Vertex> = Vec::new();
    loop {
        if largest_remaining_component(g, &greedy) <= limit {
            break;
        }
        let mut gone = vec![false; n];
        for &r in &greedy {
            gone[r as usize] = true;
        }
        // pick the max-degree vertex of the largest remaining component
        let comps = components_without(g, &gone);
        let big = comps.iter().max_by_key(|c| c.len()).expect("nonempty remainder");
        let pick = *big
            .iter()
            .max_by_key(|&&v| {
                let deg = g.neighbors(v).iter().filter(|&&w| !gone[w as usize]).count();
                (deg, std::cmp::Reverse(v))
            })
            .unwrap();
        greedy.push(pick);
    }
    match best {
        Some(b) if b.len() <= greedy.len() => b,
        _ => greedy,
    }
}

fn components_without(g: &Graph, gone: &[bool]) -> Vec<Vec<Vertex>> {
    let n = g.n();
    let mut seen = gone.to_vec();
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s as Vertex];
        let mut i = 0;
        while i < comp.len() {
            let u = comp[i];
            i += 1;
            for &w in g.neighbors(u) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    comp.push(w);
                }
            }
        }
        out.push(comp);
    }
    out
}

/// A vertex whose removal leaves components of at most `n / 2` vertices.
/// Exists in every tree; `None` when `g` is not a tree.
pub fn tree_centroid(g: &Graph) -> Option<Vertex> {
    let n = g.n();
    if n == 0 || g.edge_count() + 1 != n || !g.is_connected() {
        return None;
    }
    let mut parent = vec![Vertex::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut stack = vec![0 as Vertex];
    while let Some(u) = stack.pop() {
        order.push(u);
        for &w in g.neighbors(u) {
            if !seen[w as usize] {
                seen[w as usize] = true;
                parent[w as usize] = u;
                stack.push(w);
            }
        }
    }
    let mut sub = vec![1usize; n];
    for &u in order.iter().rev() {
        if parent[u as usize] != Vertex::MAX {
            sub[parent[u as usize] as usize] += sub[u as usize];
        }
    }
    order.iter().copied().find(|&u| {
        let up = n - sub[u as usize];
        let down = g
            .neighbors(u)
            .iter()
            .filter(|&&w| parent[w as usize] == u)
            .map(|&w| sub[w as usize])
            .max()
            .unwrap_or(0);
        up.max(down) <= n / 2
    })
}

/// Source of balanced separators for the recursive decomposition. Answers
/// are in the local ids of the graph passed in.
pub trait SeparatorFinder: Sync {
    fn find(&self, g: &Graph) -> Result<Vec<Vertex>>;
}

/// Single centroid vertex; valid on trees only.
#[derive(Debug, Clone, Copy, Default)]
pub struct TreeCentroid;

impl SeparatorFinder for TreeCentroid {
    fn find(&self, g: &Graph) -> Result<Vec<Vertex>> {
        tree_centroid(g)
            .map(|c| vec![c])
            .ok_or_else(|| Error::ContractViolation("centroid separator requested on a non-tree".into()))
    }
}

/// Exhaustive (1/3, 2/3) separator within the subset budget.
#[derive(Debug, Clone, Copy)]
pub struct ExactSeparator {
    pub budget: u64,
}

impl Default for ExactSeparator {
    fn default() -> Self {
        ExactSeparator {
            budget: SEPARATOR_SUBSET_BUDGET,
        }
    }
}

impl SeparatorFinder for ExactSeparator {
    fn find(&self, g: &Graph) -> Result<Vec<Vertex>> {
        Ok(min_balanced_separator(g, 2.0 / 3.0, self.budget)?.vertices)
    }
}

impl<F> SeparatorFinder for F
where
    F: Fn(&Graph) -> Result<Vec<Vertex>> + Sync,
{
    fn find(&self, g: &Graph) -> Result<Vec<Vertex>> {
        self(g)
    }
}

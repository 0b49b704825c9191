//! Small standard graphs and seeded random trees.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, Vertex};

pub fn path(n: usize, d: usize) -> Graph {
    let edges: Vec<_> = (1..n as Vertex).map(|v| (v - 1, v)).collect();
    Graph::from_edges(n, d, &edges).expect("path fits its degree bound")
}

pub fn cycle(n: usize, d: usize) -> Graph {
    assert!(n >= 3, "cycle needs at least 3 vertices");
    let mut edges: Vec<_> = (1..n as Vertex).map(|v| (v - 1, v)).collect();
    edges.push((n as Vertex - 1, 0));
    Graph::from_edges(n, d, &edges).expect("cycle fits its degree bound")
}

pub fn complete(n: usize, d: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n as Vertex {
        for v in u + 1..n as Vertex {
            edges.push((u, v));
        }
    }
    Graph::from_edges(n, d, &edges).expect("complete graph fits its degree bound")
}

pub fn star(leaves: usize, d: usize) -> Graph {
    let edges: Vec<_> = (1..=leaves as Vertex).map(|v| (0, v)).collect();
    Graph::from_edges(leaves + 1, d, &edges).expect("star fits its degree bound")
}

/// `rows x cols` grid, vertex `(i, j)` has id `i * cols + j`.
pub fn grid(rows: usize, cols: usize, d: usize) -> Graph {
    let id = |i: usize, j: usize| (i * cols + j) as Vertex;
    let mut edges = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            if j + 1 < cols {
                edges.push((id(i, j), id(i, j + 1)));
            }
            if i + 1 < rows {
                edges.push((id(i, j), id(i + 1, j)));
            }
        }
    }
    Graph::from_edges(rows * cols, d, &edges).expect("grid fits its degree bound")
}

/// Random tree where every vertex has degree at most `max_degree`: each new
/// vertex attaches to a uniformly chosen earlier vertex with spare degree.
pub fn random_tree(n: usize, max_degree: usize, seed: u64) -> Graph {
    assert!(max_degree >= 2 || n <= 2, "degree bound too small for a tree");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut degree = vec![0usize; n];
    let mut open: Vec<Vertex> = Vec::new();
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    if n > 0 {
        open.push(0);
    }
    for v in 1..n as Vertex {
        let idx = rng.random_range(0..open.len());
        let u = open[idx];
        edges.push((u, v));
        degree[u as usize] += 1;
        degree[v as usize] += 1;
        if degree[u as usize] == max_degree {
            open.swap_remove(idx);
        }
        open.push(v);
    }
    Graph::from_edges(n, max_degree, &edges).expect("random tree respects its degree bound")
}

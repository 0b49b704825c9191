//! Bounded-degree labeled graphs.
//!
//! A [`Graph`] stores one ordered adjacency list per vertex; slot `i` of
//! vertex `v` is the answer to the query "i-th neighbor of v". Graphs are
//! immutable once built, and every constructor checks symmetry, the absence
//! of loops and parallel edges, and the degree bound.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub type Vertex = u32;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    d: usize,
    adj: Vec<Vec<Vertex>>,
}

impl Graph {
    /// The graph on `n` isolated vertices.
    pub fn empty(n: usize, d: usize) -> Self {
        Graph {
            d,
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from an undirected edge list. Slots are sorted by
    /// ascending neighbor id.
    pub fn from_edges(n: usize, d: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            for x in [u, v] {
                if x as usize >= n {
                    return Err(Error::VertexOutOfRange {
                        vertex: x as usize,
                        n,
                    });
                }
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at {u}")));
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Self::from_adjacency(d, adj)
    }

    /// Builds a graph from explicit adjacency lists, keeping the given slot
    /// order.
    pub fn from_adjacency(d: usize, adj: Vec<Vec<Vertex>>) -> Result<Self> {
        let n = adj.len();
        if n > Vertex::MAX as usize {
            return Err(Error::TooLarge {
                what: "vertex count",
                n,
                limit: Vertex::MAX as usize,
            });
        }
        for (v, list) in adj.iter().enumerate() {
            if list.len() > d {
                return Err(Error::InvalidGraph(format!(
                    "vertex {v} has degree {} > {d}",
                    list.len()
                )));
            }
            for (i, &u) in list.iter().enumerate() {
                if u as usize >= n {
                    return Err(Error::VertexOutOfRange {
                        vertex: u as usize,
                        n,
                    });
                }
                if u as usize == v {
                    return Err(Error::InvalidGraph(format!("self-loop at {v}")));
                }
                if list[..i].contains(&u) {
                    return Err(Error::InvalidGraph(format!("parallel edge {v}-{u}")));
                }
                if !adj[u as usize].contains(&(v as Vertex)) {
                    return Err(Error::InvalidGraph(format!("edge {v}->{u} is not symmetric")));
                }
            }
        }
        Ok(Graph { d, adj })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v as usize].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u as usize].contains(&v)
    }

    /// Edges as `(u, v)` with `u < v`, in ascending order of `u` then slot.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .filter(move |&&v| (u as Vertex) < v)
                .map(move |&v| (u as Vertex, v))
        })
    }

    /// The same graph with a different degree bound.
    pub fn with_degree_bound(&self, d: usize) -> Result<Self> {
        Self::from_adjacency(d, self.adj.clone())
    }

    /// Connected components, each sorted, listed by smallest vertex.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            queue.push_back(s as Vertex);
            let mut comp = Vec::new();
            while let Some(u) = queue.pop_front() {
                comp.push(u);
                for &w in &self.adj[u as usize] {
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.components().len() == 1
    }

    /// Induced subgraph on `vertices`; vertex `vertices[i]` becomes `i`.
    pub fn induced_subgraph(&self, vertices: &[Vertex]) -> Graph {
        let mut local = vec![Vertex::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            local[v as usize] = i as Vertex;
        }
        let adj = vertices
            .iter()
            .map(|&v| {
                let mut list: Vec<Vertex> = self.adj[v as usize]
                    .iter()
                    .map(|&w| local[w as usize])
                    .filter(|&w| w != Vertex::MAX)
                    .collect();
                list.sort_unstable();
                list
            })
            .collect();
        Graph { d: self.d, adj }
    }

    /// Applies `perm` (old id -> new id). Slots of every vertex are re-sorted
    /// by new neighbor id.
    pub fn permuted(&self, perm: &[Vertex]) -> Graph {
        assert_eq!(perm.len(), self.n(), "permutation length");
        let mut adj = vec![Vec::new(); self.n()];
        for (old, list) in self.adj.iter().enumerate() {
            let mut mapped: Vec<Vertex> = list.iter().map(|&w| perm[w as usize]).collect();
            mapped.sort_unstable();
            adj[perm[old] as usize] = mapped;
        }
        Graph { d: self.d, adj }
    }

    /// Text form: header `n d`, then `v: u1 u2 ...` per vertex.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (hl, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let mut hdr = header.split_whitespace();
        let parse_num = |tok: Option<&str>, line: usize, what: &str| -> Result<usize> {
            tok.ok_or_else(|| Error::Parse {
                line,
                msg: format!("missing {what}"),
            })?
            .parse()
            .map_err(|e| Error::Parse {
                line,
                msg: format!("bad {what}: {e}"),
            })
        };
        let n = parse_num(hdr.next(), hl + 1, "n")?;
        let d = parse_num(hdr.next(), hl + 1, "d")?;
        let mut adj: Vec<Option<Vec<Vertex>>> = vec![None; n];
        for (ln, line) in lines {
            let (head, rest) = line.split_once(':').ok_or(Error::Parse {
                line: ln + 1,
                msg: "expected `v: neighbors`".into(),
            })?;
            let v = parse_num(Some(head.trim()), ln + 1, "vertex")?;
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            let list = rest
                .split_whitespace()
                .map(|t| {
                    t.parse::<Vertex>().map_err(|e| Error::Parse {
                        line: ln + 1,
                        msg: format!("bad neighbor: {e}"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            if adj[v].replace(list).is_some() {
                return Err(Error::Parse {
                    line: ln + 1,
                    msg: format!("vertex {v} listed twice"),
                });
            }
        }
        let adj = adj.into_iter().map(Option::unwrap_or_default).collect();
        Self::from_adjacency(d, adj)
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n(), self.d)?;
        for (v, list) in self.adj.iter().enumerate() {
            write!(f, "{v}:")?;
            for u in list {
                write!(f, " {u}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl FromStr for Graph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Graph::from_text(s)
    }
}

/// Disjoint union of `multiplicity` copies of each part, laid out block by
/// block in the given order.
pub fn disjoint_union(parts: &[(&Graph, usize)]) -> Result<Graph> {
    let d = match parts.first() {
        Some((g, _)) => g.d(),
        None => return Ok(Graph::empty(0, 0)),
    };
    if let Some((g, _)) = parts.iter().find(|(g, _)| g.d() != d) {
        return Err(Error::InvalidGraph(format!(
            "degree bounds differ in union ({} vs {d})",
            g.d()
        )));
    }
    let total: usize = parts.iter().map(|(g, m)| g.n() * m).sum();
    let mut adj = Vec::with_capacity(total);
    for &(g, m) in parts {
        for _ in 0..m {
            let base = adj.len() as Vertex;
            adj.extend(
                g.adj
                    .iter()
                    .map(|list| list.iter().map(|&w| w + base).collect::<Vec<_>>()),
            );
        }
    }
    Ok(Graph { d, adj })
}

/// A uniform permutation of `0..n` (old id -> new id) from a seeded
/// generator.
pub fn random_permutation(n: usize, seed: u64) -> Vec<Vertex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<Vertex> = (0..n as Vertex).collect();
    perm.shuffle(&mut rng);
    perm
}

/// Relabels `g` by a uniform seeded permutation.
pub fn random_relabel(g: &Graph, seed: u64) -> Graph {
    g.permuted(&random_permutation(g.n(), seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_graphs() {
        assert!(Graph::from_edges(3, 2, &[(0, 0)]).is_err());
        assert!(Graph::from_edges(3, 2, &[(0, 1), (1, 0)]).is_err());
        assert!(Graph::from_edges(4, 2, &[(0, 1), (0, 2), (0, 3)]).is_err());
        assert!(Graph::from_edges(2, 2, &[(0, 5)]).is_err());
        assert!(Graph::from_adjacency(2, vec![vec![1], vec![]]).is_err());
    }

    #[test]
    fn text_round_trip() {
        let g = Graph::from_edges(4, 3, &[(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap();
        let text = g.to_text();
        assert_eq!(text, "4 3\n0: 1 2\n1: 0 2\n2: 0 1 3\n3: 2\n");
        assert_eq!(Graph::from_text(&text).unwrap(), g);
    }

    #[test]
    fn parse_errors() {
        assert!(Graph::from_text("").is_err());
        assert!(Graph::from_text("2 1\n0: 1\n").is_err()); // asymmetric
        assert!(Graph::from_text("2 1\n0 1\n").is_err());
        assert!(Graph::from_text("2 1\n0: 1\n0: 1\n1: 0\n").is_err());
    }

    #[test]
    fn union_of_triangles() {
        let tri = Graph::from_edges(3, 2, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let u = disjoint_union(&[(&tri, 3)]).unwrap();
        assert_eq!(u.n(), 9);
        assert_eq!(u.edge_count(), 9);
        assert_eq!(u.components().len(), 3);
        assert_eq!(disjoint_union(&[(&tri, 1)]).unwrap(), tri);
    }

    #[test]
    fn union_rejects_mixed_degree_bounds() {
        let a = Graph::empty(1, 2);
        let b = Graph::empty(1, 3);
        assert!(disjoint_union(&[(&a, 1), (&b, 1)]).is_err());
    }

    #[test]
    fn relabel_is_deterministic() {
        let g = Graph::from_edges(5, 2, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        assert_eq!(random_relabel(&g, 7).to_text(), random_relabel(&g, 7).to_text());
        assert_eq!(random_relabel(&Graph::empty(0, 3), 1).n(), 0);
        let h = random_relabel(&g, 7);
        assert_eq!(h.edge_count(), 4);
        for v in 0..5 {
            assert!(h.neighbors(v).windows(2).all(|w| w[0] < w[1]));
        }
    }
}

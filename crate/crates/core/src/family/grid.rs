//! Grids with one diagonal per unit cell, optionally rigidified by corner
//! gadgets.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// Smallest side for which the four corner gadgets touch disjoint vertices.
pub const GADGET_MIN_SIDE: usize = 12;

/// Degree bound shared by every diagonal graph.
pub const DIAGONAL_DEGREE: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridParams {
    pub s: usize,
    pub gadgets: bool,
}

/// One corner gadget: the corner is joined to the two boundary vertices
/// `hops` steps away along its two boundary lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CornerGadget {
    pub corner: Vertex,
    pub ends: [Vertex; 2],
    pub hops: usize,
}

impl GridParams {
    pub fn new(s: usize) -> Result<Self> {
        if s < GADGET_MIN_SIDE {
            return Err(Error::Construction(format!(
                "corner gadgets need s >= {GADGET_MIN_SIDE}, got {s}"
            )));
        }
        Ok(GridParams { s, gadgets: true })
    }

    /// Plain grid plus diagonals, for small experiments.
    pub fn gadgetless(s: usize) -> Result<Self> {
        if s < 2 {
            return Err(Error::Construction(format!("grid side must be >= 2, got {s}")));
        }
        Ok(GridParams { s, gadgets: false })
    }

    pub fn cells(&self) -> usize {
        (self.s - 1) * (self.s - 1)
    }

    pub fn vertex_count(&self) -> usize {
        self.s * self.s
    }

    pub fn id(&self, i: usize, j: usize) -> Vertex {
        (i * self.s + j) as Vertex
    }

    /// Gadgets at (0,0), (0,s-1), (s-1,s-1), (s-1,0) reaching 2, 3, 4, 5 hops.
    pub fn corner_gadgets(&self) -> Vec<CornerGadget> {
        if !self.gadgets {
            return Vec::new();
        }
        let s = self.s;
        let l = s - 1;
        vec![
            CornerGadget {
                corner: self.id(0, 0),
                ends: [self.id(0, 2), self.id(2, 0)],
                hops: 2,
            },
            CornerGadget {
                corner: self.id(0, l),
                ends: [self.id(0, l - 3), self.id(3, l)],
                hops: 3,
            },
            CornerGadget {
                corner: self.id(l, l),
                ends: [self.id(l, l - 4), self.id(l - 4, l)],
                hops: 4,
            },
            CornerGadget {
                corner: self.id(l, 0),
                ends: [self.id(l, 5), self.id(l - 5, 0)],
                hops: 5,
            },
        ]
    }

    fn base_edges(&self) -> Vec<(Vertex, Vertex)> {
        let s = self.s;
        let mut edges = Vec::with_capacity(2 * s * (s - 1) + 8);
        for i in 0..s {
            for j in 0..s {
                if j + 1 < s {
                    edges.push((self.id(i, j), self.id(i, j + 1)));
                }
                if i + 1 < s {
                    edges.push((self.id(i, j), self.id(i + 1, j)));
                }
            }
        }
        for g in self.corner_gadgets() {
            for e in g.ends {
                edges.push((g.corner, e));
            }
        }
        edges
    }
}

/// One bit per unit cell in cell-major order: cell `(i, j)` with lower-left
/// corner `(i, j)` is bit `i * (s-1) + j`. Bit 0 selects the up diagonal
/// `(i,j)-(i+1,j+1)`, bit 1 the down diagonal `(i,j+1)-(i+1,j)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DiagonalCode {
    len: usize,
    words: Vec<u64>,
}

impl DiagonalCode {
    pub fn zeros(len: usize) -> Self {
        DiagonalCode {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    /// Low `len` bits of `value`; bit `i` of the value is cell `i`.
    pub fn from_u64(len: usize, value: u64) -> Self {
        assert!(len <= 64, "code longer than one word");
        let mut c = Self::zeros(len);
        if len > 0 {
            let mask = if len == 64 { u64::MAX } else { (1 << len) - 1 };
            c.words[0] = value & mask;
        }
        c
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut c = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            c.set(i, b);
        }
        c
    }

    pub fn random<R: Rng>(len: usize, rng: &mut R) -> Self {
        let mut c = Self::zeros(len);
        for w in c.words.iter_mut() {
            *w = rng.random();
        }
        c.trim();
        c
    }

    fn trim(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if bit {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        let b = self.get(i);
        self.set(i, !b);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn hamming(&self, other: &DiagonalCode) -> usize {
        assert_eq!(self.len, other.len, "codes of different lengths");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// Bits as '0'/'1' characters, cell 0 first.
    pub fn to_bitstring(&self) -> String {
        (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect()
    }

    pub fn from_bitstring(text: &str) -> Result<Self> {
        let bits = text
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidGraph(format!("bad code character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_bits(&bits))
    }
}

impl fmt::Debug for DiagonalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiagonalCode({})", self.to_bitstring())
    }
}

impl fmt::Display for DiagonalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bitstring())
    }
}

impl Serialize for DiagonalCode {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_bitstring())
    }
}

impl<'de> Deserialize<'de> for DiagonalCode {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        DiagonalCode::from_bitstring(&text).map_err(serde::de::Error::custom)
    }
}

/// The s x s grid plus corner gadgets (none in gadgetless mode).
pub fn build_base_graph(p: &GridParams) -> Result<Graph> {
    if p.gadgets && p.s < GADGET_MIN_SIDE {
        return Err(Error::Construction(format!(
            "corner gadgets need s >= {GADGET_MIN_SIDE}, got {}",
            p.s
        )));
    }
    Graph::from_edges(p.vertex_count(), DIAGONAL_DEGREE, &p.base_edges())
}

/// The diagonal edge a cell contributes under `bit`.
pub fn cell_diagonal(p: &GridParams, cell: usize, bit: bool) -> (Vertex, Vertex) {
    let w = p.s - 1;
    let (i, j) = (cell / w, cell % w);
    if bit {
        (p.id(i, j + 1), p.id(i + 1, j))
    } else {
        (p.id(i, j), p.id(i + 1, j + 1))
    }
}

pub fn build_diagonal_graph(p: &GridParams, code: &DiagonalCode) -> Result<Graph> {
    if code.len() != p.cells() {
        return Err(Error::CodeLength {
            expected: p.cells(),
            got: code.len(),
        });
    }
    if p.gadgets && p.s < GADGET_MIN_SIDE {
        return build_base_graph(p);
    }
    let mut edges = p.base_edges();
    edges.extend((0..p.cells()).map(|c| cell_diagonal(p, c, code.get(c))));
    Graph::from_edges(p.vertex_count(), DIAGONAL_DEGREE, &edges)
}

/// For each neighbor `w` of `v`, the distance from `v` to `w` once the edge
/// `vw` is removed (`usize::MAX` for a bridge), sorted. On the base graph
/// the four corners get distinct signatures.
pub fn gadget_signature(g: &Graph, v: Vertex) -> Vec<usize> {
    let mut sig: Vec<usize> = g
        .neighbors(v)
        .iter()
        .map(|&w| {
            let mut dist = vec![usize::MAX; g.n()];
            dist[v as usize] = 0;
            let mut queue = std::collections::VecDeque::from([v]);
            while let Some(u) = queue.pop_front() {
                for &x in g.neighbors(u) {
                    let skip = (u == v && x == w) || (u == w && x == v);
                    if !skip && dist[x as usize] == usize::MAX {
                        dist[x as usize] = dist[u as usize] + 1;
                        queue.push_back(x);
                    }
                }
            }
            dist[w as usize]
        })
        .collect();
    sig.sort_unstable();
    sig
}

/// A set of at most two vertices whose removal disconnects `g`, if any.
/// `None` certifies 3-connectivity for graphs on at least four vertices.
pub fn small_vertex_cut(g: &Graph) -> Option<Vec<Vertex>> {
    let n = g.n();
    let connected_without = |removed: &[Vertex]| -> bool {
        let mut seen = vec![false; n];
        for &r in removed {
            seen[r as usize] = true;
        }
        let Some(start) = (0..n).find(|&v| !seen[v]) else {
            return true;
        };
        let mut stack = vec![start as Vertex];
        seen[start] = true;
        let mut reached = 1 + removed.len();
        while let Some(u) = stack.pop() {
            for &w in g.neighbors(u) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        reached == n
    };
    if !connected_without(&[]) {
        return Some(Vec::new());
    }
    for u in 0..n as Vertex {
        if !connected_without(&[u]) {
            return Some(vec![u]);
        }
    }
    for u in 0..n as Vertex {
        for v in u + 1..n as Vertex {
            if !connected_without(&[u, v]) {
                return Some(vec![u, v]);
            }
        }
    }
    None
}

//! Canonical forms for small graphs.
//!
//! Individualization-refinement: color refinement to an equitable partition,
//! then branch on the first non-singleton cell, keeping the smallest
//! adjacency code over all discrete leaves. Automorphisms found at equal
//! leaves prune sibling branches in the same orbit.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// Isomorphism-invariant code of an unlabeled graph: two big-endian bytes
/// of vertex count, then the upper triangle of the adjacency matrix in
/// canonical order, packed MSB first.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    code: Vec<u8>,
}

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.code
    }

    pub fn vertex_count(&self) -> usize {
        u16::from_be_bytes([self.code[0], self.code[1]]) as usize
    }

    pub fn edge_count(&self) -> usize {
        self.code[2..].iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn to_hex(&self) -> String {
        self.code.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_hex(hex: &str) -> Result<Self> {
        let bad = || Error::Parse {
            line: 0,
            msg: format!("bad canonical form `{hex}`"),
        };
        if !hex.len().is_multiple_of(2) || hex.len() < 4 {
            return Err(bad());
        }
        let code = (0..hex.len())
            .step_by(2)
            .map(|i| u8::from_str_radix(&hex[i..i + 2], 16).map_err(|_| bad()))
            .collect::<Result<Vec<u8>>>()?;
        let form = CanonicalForm { code };
        let n = form.vertex_count();
        if form.code.len() != 2 + (n * n.saturating_sub(1) / 2).div_ceil(8) {
            return Err(bad());
        }
        Ok(form)
    }

    /// The graph in canonical labeling.
    pub fn to_graph(&self, d: usize) -> Result<Graph> {
        let n = self.vertex_count();
        let mut edges = Vec::new();
        let mut bit = 0usize;
        for i in 0..n {
            for j in i + 1..n {
                if self.code[2 + bit / 8] & (0x80 >> (bit % 8)) != 0 {
                    edges.push((i as Vertex, j as Vertex));
                }
                bit += 1;
            }
        }
        Graph::from_edges(n, d, &edges)
    }
}

impl fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalForm({})", self.to_hex())
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl Serialize for CanonicalForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for CanonicalForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        CanonicalForm::from_hex(&s).map_err(serde::de::Error::custom)
    }
}

/// Canonical form of `g`. Intended for components up to a few hundred
/// vertices; cost grows with the number of leaves the automorphism pruning
/// cannot remove.
pub fn canonical_form(g: &Graph) -> CanonicalForm {
    let n = g.n();
    assert!(n <= u16::MAX as usize, "graph too large for a canonical code");
    if n == 0 {
        return CanonicalForm { code: vec![0, 0] };
    }
    let mut search = Search {
        g,
        best: None,
        generators: Vec::new(),
    };
    let mut colors = vec![0u32; n];
    refine(g, &mut colors);
    let mut path = Vec::new();
    search.descend(colors, &mut path);
    CanonicalForm {
        code: search.best.expect("at least one leaf").0,
    }
}

/// Refines `colors` to the coarsest equitable partition below it. Colors
/// end up as dense ranks, ordered consistently with the input colors.
fn refine(g: &Graph, colors: &mut [u32]) {
    let n = colors.len();
    let mut distinct = usize::MAX;
    loop {
        let mut sigs: Vec<(u32, Vec<u32>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<u32> = g
                    .neighbors(v as Vertex)
                    .iter()
                    .map(|&w| colors[w as usize])
                    .collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        let mut uniq = sigs.clone();
        uniq.sort_unstable();
        uniq.dedup();
        for (v, sig) in sigs.drain(..).enumerate() {
            colors[v] = uniq.binary_search(&sig).expect("signature present") as u32;
        }
        if uniq.len() == distinct || uniq.len() == n {
            return;
        }
        distinct = uniq.len();
    }
}

fn is_discrete(colors: &[u32]) -> bool {
    let mut seen = vec![false; colors.len()];
    colors.iter().all(|&c| !std::mem::replace(&mut seen[c as usize], true))
}

fn leaf_code(g: &Graph, pos: &[u32]) -> Vec<u8> {
    let n = g.n();
    let bits = n * (n - 1) / 2;
    let mut code = vec![0u8; 2 + bits.div_ceil(8)];
    code[..2].copy_from_slice(&(n as u16).to_be_bytes());
    // row offsets in the packed upper triangle
    let row_start = |i: usize| i * (2 * n - i - 1) / 2;
    for (u, list) in (0..n).map(|u| (u, g.neighbors(u as Vertex))) {
        let pu = pos[u] as usize;
        for &w in list {
            let pw = pos[w as usize] as usize;
            if pu < pw {
                let bit = row_start(pu) + (pw - pu - 1);
                code[2 + bit / 8] |= 0x80 >> (bit % 8);
            }
        }
    }
    code
}

struct Search<'a> {
    g: &'a Graph,
    best: Option<(Vec<u8>, Vec<Vertex>)>,
    generators: Vec<Vec<Vertex>>,
}

const MAX_GENERATORS: usize = 256;

impl Search<'_> {
    fn descend(&mut self, colors: Vec<u32>, path: &mut Vec<Vertex>) {
        if is_discrete(&colors) {
            self.leaf(&colors);
            return;
        }
        let n = colors.len();
        let mut size = vec![0usize; n];
        for &c in &colors {
            size[c as usize] += 1;
        }
        let target = (0..n).find(|&c| size[c] > 1).expect("non-discrete") as u32;
        let cell: Vec<Vertex> = (0..n as Vertex).filter(|&v| colors[v as usize] == target).collect();
        let mut tried: Vec<Vertex> = Vec::new();
        for &v in &cell {
            if !tried.is_empty() {
                let orbit = self.orbits_fixing(path);
                if tried.iter().any(|&t| find(&orbit, t) == find(&orbit, v)) {
                    continue;
                }
            }
            tried.push(v);
            let mut child: Vec<u32> = colors.iter().map(|&c| 2 * c + 1).collect();
            child[v as usize] = 2 * colors[v as usize];
            refine(self.g, &mut child);
            path.push(v);
            self.descend(child, path);
            path.pop();
        }
    }

    fn leaf(&mut self, pos: &[u32]) {
        let code = leaf_code(self.g, pos);
        match &self.best {
            None => self.best = Some((code, pos.to_vec())),
            Some((best, best_pos)) => match code.cmp(best) {
                std::cmp::Ordering::Less => self.best = Some((code, pos.to_vec())),
                std::cmp::Ordering::Equal => {
                    if self.generators.len() >= MAX_GENERATORS {
                        return;
                    }
                    let mut inv_best = vec![0 as Vertex; pos.len()];
                    for (u, &p) in best_pos.iter().enumerate() {
                        inv_best[p as usize] = u as Vertex;
                    }
                    let sigma: Vec<Vertex> = pos.iter().map(|&p| inv_best[p as usize]).collect();
                    if sigma.iter().enumerate().any(|(v, &s)| v as Vertex != s) {
                        self.generators.push(sigma);
                    }
                }
                std::cmp::Ordering::Greater => {}
            },
        }
    }

    /// Orbit union-find of the group generated by the known automorphisms
    /// that fix `path` pointwise.
    fn orbits_fixing(&self, path: &[Vertex]) -> Vec<Vertex> {
        let n = self.g.n();
        let mut parent: Vec<Vertex> = (0..n as Vertex).collect();
        for sigma in &self.generators {
            if path.iter().any(|&p| sigma[p as usize] != p) {
                continue;
            }
            for (v, &sv) in sigma.iter().enumerate() {
                let (a, b) = (find(&parent, v as Vertex), find(&parent, sv));
                if a != b {
                    parent[a.max(b) as usize] = a.min(b);
                }
            }
        }
        parent
    }
}

fn find(parent: &[Vertex], mut v: Vertex) -> Vertex {
    while parent[v as usize] != v {
        v = parent[v as usize];
    }
    v
}

/// True when `a` and `b` are isomorphic.
pub fn isomorphic(a: &Graph, b: &Graph) -> bool {
    a.n() == b.n() && a.edge_count() == b.edge_count() && canonical_form(a) == canonical_form(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::graph::{random_permutation, random_relabel};
    use proptest::prelude::*;
    use std::collections::HashMap;

    /// Independent oracle: lexicographically smallest upper-triangle bit
    /// string over all vertex permutations.
    fn brute_key(g: &Graph) -> Vec<bool> {
        let n = g.n();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut best: Option<Vec<bool>> = None;
        loop {
            let mut key = Vec::with_capacity(n * n / 2);
            for i in 0..n {
                for j in i + 1..n {
                    key.push(g.has_edge(perm[i] as Vertex, perm[j] as Vertex));
                }
            }
            if best.as_ref().is_none_or(|b| key < *b) {
                best = Some(key);
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        best.unwrap_or_default()
    }

    fn next_permutation(p: &mut [usize]) -> bool {
        let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
            return false;
        };
        let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
        true
    }

    fn graph_from_mask(n: usize, mask: u64) -> Graph {
        let mut edges = Vec::new();
        let mut bit = 0;
        for i in 0..n as Vertex {
            for j in i + 1..n as Vertex {
                if mask >> bit & 1 == 1 {
                    edges.push((i, j));
                }
                bit += 1;
            }
        }
        Graph::from_edges(n, n.max(1), &edges).unwrap()
    }

    #[test]
    fn exhaustive_agreement_up_to_six_vertices() {
        for n in 0..=6usize {
            let pairs = n * n.saturating_sub(1) / 2;
            let mut by_brute: HashMap<Vec<bool>, CanonicalForm> = HashMap::new();
            let mut by_canon: HashMap<CanonicalForm, Vec<bool>> = HashMap::new();
            for mask in 0..1u64 << pairs {
                let g = graph_from_mask(n, mask);
                let key = brute_key(&g);
                let form = canonical_form(&g);
                assert_eq!(by_brute.entry(key.clone()).or_insert(form.clone()), &form);
                assert_eq!(by_canon.entry(form).or_insert(key.clone()), &key);
            }
            // 1, 1, 2, 4, 11, 34, 156 unlabeled graphs
            let expected = [1, 1, 2, 4, 11, 34, 156][n];
            assert_eq!(by_brute.len(), expected, "n = {n}");
        }
    }

    #[test]
    fn random_seven_and_eight_vertex_pairs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for round in 0..60 {
            let n = 7 + round % 2;
            let pairs = n * (n - 1) / 2;
            // sparse masks with equal edge counts make near-misses likely
            let m = rng.random_range(n - 1..n + 4);
            let draw = |rng: &mut rand_chacha::ChaCha8Rng| {
                let mut mask = 0u64;
                while (mask.count_ones() as usize) < m {
                    mask |= 1 << rng.random_range(0..pairs);
                }
                graph_from_mask(n, mask)
            };
            let a = draw(&mut rng);
            let b = draw(&mut rng);
            assert_eq!(
                canonical_form(&a) == canonical_form(&b),
                brute_key(&a) == brute_key(&b)
            );
        }
    }

    #[test]
    fn triangle_labelings_agree() {
        let tri = generators::cycle(3, 2);
        let f = canonical_form(&tri);
        for seed in 0..6 {
            assert_eq!(canonical_form(&random_relabel(&tri, seed)), f);
        }
        assert_eq!(f.vertex_count(), 3);
        assert_eq!(f.edge_count(), 3);
    }

    #[test]
    fn path_three_is_star_two() {
        assert_eq!(
            canonical_form(&generators::path(3, 2)),
            canonical_form(&generators::star(2, 2))
        );
    }

    #[test]
    fn symmetric_graphs_finish() {
        // large automorphism groups exercise the orbit pruning
        for g in [
            generators::complete(9, 8),
            generators::cycle(40, 2),
            generators::grid(6, 6, 4),
            Graph::empty(12, 2),
        ] {
            let f = canonical_form(&g);
            assert_eq!(canonical_form(&random_relabel(&g, 5)), f);
            assert!(isomorphic(&f.to_graph(g.d()).unwrap(), &g));
        }
    }

    #[test]
    fn hex_round_trip_and_errors() {
        let f = canonical_form(&generators::cycle(5, 2));
        assert_eq!(CanonicalForm::from_hex(&f.to_hex()).unwrap(), f);
        assert!(CanonicalForm::from_hex("zz").is_err());
        assert!(CanonicalForm::from_hex("0005").is_err());
        assert_eq!(canonical_form(&Graph::empty(0, 1)).to_hex(), "0000");
    }

    proptest! {
        #[test]
        fn relabeling_preserves_form(n in 1usize..14, mask in any::<u64>(), seed in any::<u64>()) {
            let pairs = n * (n - 1) / 2;
            let mut edges = Vec::new();
            let mut bit = 0;
            for i in 0..n as Vertex {
                for j in i + 1..n as Vertex {
                    if bit < 64 && mask >> bit & 1 == 1 { edges.push((i, j)); }
                    bit += 1;
                }
            }
            let _ = pairs;
            let g = Graph::from_edges(n, n, &edges).unwrap();
            let p = random_permutation(n, seed);
            prop_assert_eq!(canonical_form(&g), canonical_form(&g.permuted(&p)));
            let back = canonical_form(&g).to_graph(n).unwrap();
            prop_assert_eq!(canonical_form(&back), canonical_form(&g));
        }
    }
}

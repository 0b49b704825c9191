//! Unordered rooted trees with at most two children per node, and their
//! unrooted classes.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

use super::scoops::{FamilySource, SuitableFamily};

/// Largest size accepted by [`enumerate_rooted_trees`].
pub const MAX_TREE_SIZE: usize = 16;

/// Degree bound of every tree graph produced here.
pub const TREE_DEGREE: usize = 3;

/// Balanced-parenthesis code: a node is `(` + its children's codes in
/// sorted order + `)`. Equal codes mean isomorphic rooted trees.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RootedCode(Vec<u8>);

impl RootedCode {
    pub fn leaf() -> Self {
        RootedCode(b"()".to_vec())
    }

    /// Joins `children` under a new root.
    pub fn join(children: &mut [&RootedCode]) -> Self {
        children.sort();
        let mut bytes = Vec::with_capacity(2 + children.iter().map(|c| c.0.len()).sum::<usize>());
        bytes.push(b'(');
        for c in children.iter() {
            bytes.extend_from_slice(&c.0);
        }
        bytes.push(b')');
        RootedCode(bytes)
    }

    pub fn size(&self) -> usize {
        self.0.len() / 2
    }

    pub fn as_str(&self) -> &str {
        std::str::from_utf8(&self.0).expect("parenthesis code is ascii")
    }

    /// Vertex 0 is the root; vertices numbered in preorder.
    pub fn to_graph(&self, d: usize) -> Result<Graph> {
        let mut edges = Vec::new();
        let mut stack: Vec<Vertex> = Vec::new();
        let mut next: Vertex = 0;
        for &b in &self.0 {
            if b == b'(' {
                if let Some(&parent) = stack.last() {
                    edges.push((parent, next));
                }
                stack.push(next);
                next += 1;
            } else {
                stack.pop();
            }
        }
        Graph::from_edges(next as usize, d, &edges)
    }

    /// Code of `g` rooted at `root`; children unrestricted.
    pub fn of_rooted_graph(g: &Graph, root: Vertex) -> Self {
        fn rec(g: &Graph, v: Vertex, parent: Vertex) -> RootedCode {
            let kids: Vec<RootedCode> = g
                .neighbors(v)
                .iter()
                .filter(|&&w| w != parent)
                .map(|&w| rec(g, w, v))
                .collect();
            let mut refs: Vec<&RootedCode> = kids.iter().collect();
            RootedCode::join(&mut refs)
        }
        rec(g, root, Vertex::MAX)
    }
}

impl fmt::Debug for RootedCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RootedCode({})", self.as_str())
    }
}

impl fmt::Display for RootedCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Every unordered rooted tree on `s` vertices with at most two children
/// per node, sorted by code.
pub fn enumerate_rooted_trees(s: usize) -> Result<Vec<RootedCode>> {
    if s > MAX_TREE_SIZE {
        return Err(Error::TooLarge {
            what: "rooted tree enumeration size",
            n: s,
            limit: MAX_TREE_SIZE,
        });
    }
    let mut by_size: Vec<Vec<RootedCode>> = vec![Vec::new(); s.max(1) + 1];
    if s == 0 {
        return Ok(Vec::new());
    }
    by_size[1] = vec![RootedCode::leaf()];
    for n in 2..=s {
        let mut out = Vec::new();
        for c in &by_size[n - 1] {
            out.push(RootedCode::join(&mut [c]));
        }
        // two subtrees of sizes i <= j with i + j = n - 1
        for i in 1..=(n - 1) / 2 {
            let j = n - 1 - i;
            for (ai, a) in by_size[i].iter().enumerate() {
                let start = if i == j { ai } else { 0 };
                for b in &by_size[j][start..] {
                    out.push(RootedCode::join(&mut [a, b]));
                }
            }
        }
        out.sort();
        out.dedup();
        by_size[n] = out;
    }
    Ok(std::mem::take(&mut by_size[s]))
}

/// Unrooted canonical code: the code rooted at the center, or the smaller
/// of the two codes for a bicentral tree.
pub fn unrooted_code(g: &Graph) -> RootedCode {
    let centers = tree_centers(g);
    centers
        .iter()
        .map(|&c| RootedCode::of_rooted_graph(g, c))
        .min()
        .expect("a nonempty tree has a center")
}

/// One or two centers, found by peeling leaves.
pub fn tree_centers(g: &Graph) -> Vec<Vertex> {
    let n = g.n();
    if n <= 2 {
        return (0..n as Vertex).collect();
    }
    let mut degree: Vec<usize> = (0..n as Vertex).map(|v| g.degree(v)).collect();
    let mut layer: Vec<Vertex> = (0..n as Vertex).filter(|&v| degree[v as usize] <= 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &w in g.neighbors(v) {
                degree[w as usize] -= 1;
                if degree[w as usize] == 1 {
                    next.push(w);
                }
            }
        }
        layer = next;
    }
    layer.sort_unstable();
    layer
}

/// Unrooted classes of a set of rooted trees on the same size.
#[derive(Debug, Clone)]
pub struct UnrootedTrees {
    pub family: SuitableFamily,
    pub codes: Vec<RootedCode>,
    /// Rooted trees collapsing onto each class, aligned with `codes`.
    pub orbit_sizes: Vec<usize>,
    pub rooted_count: usize,
}

impl UnrootedTrees {
    pub fn max_orbit(&self) -> usize {
        self.orbit_sizes.iter().copied().max().unwrap_or(0)
    }
}

/// One representative per unrooted isomorphism class, ordered by code.
pub fn dedupe_unrooted(rooted: &[RootedCode]) -> Result<UnrootedTrees> {
    let s = rooted.first().map(RootedCode::size).ok_or(Error::EmptyPool)?;
    let mut classes: BTreeMap<RootedCode, (Graph, usize)> = BTreeMap::new();
    for r in rooted {
        if r.size() != s {
            return Err(Error::UnequalComponents {
                first: s,
                other: r.size(),
            });
        }
        let g = r.to_graph(TREE_DEGREE)?;
        let code = unrooted_code(&g);
        classes.entry(code).or_insert((g, 0)).1 += 1;
    }
    let mut codes = Vec::new();
    let mut members = Vec::new();
    let mut orbit_sizes = Vec::new();
    for (code, (g, count)) in classes {
        // relabel the representative from its own center so members do not
        // depend on which rooted tree came first
        codes.push(code.clone());
        members.push(code.to_graph(TREE_DEGREE).unwrap_or(g));
        orbit_sizes.push(count);
    }
    let family = SuitableFamily::from_members(
        members,
        FamilySource::Trees {
            s,
            rooted_count: rooted.len(),
            orbit_sizes: orbit_sizes.clone(),
        },
    )?;
    Ok(UnrootedTrees {
        family,
        codes,
        orbit_sizes,
        rooted_count: rooted.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::canonical_form;
    use std::collections::HashSet;

    /// Oracle: all parent arrays `parent[i] < i`, at most two children each,
    /// deduplicated by the graph canonical form of the tree with a K4 glued
    /// onto the root (trees contain no K4, so the root stays marked).
    fn brute_rooted(n: usize) -> usize {
        let mut forms = HashSet::new();
        let mut parent = vec![0usize; n];
        loop {
            let mut kids = vec![0; n];
            for i in 1..n {
                kids[parent[i]] += 1;
            }
            if kids.iter().all(|&k| k <= 2) {
                let mut edges: Vec<(Vertex, Vertex)> = (1..n).map(|i| (parent[i] as Vertex, i as Vertex)).collect();
                let m = n as Vertex;
                edges.extend([(0, m), (0, m + 1), (0, m + 2), (m, m + 1), (m, m + 2), (m + 1, m + 2)]);
                let g = Graph::from_edges(n + 3, 6, &edges).unwrap();
                forms.insert(canonical_form(&g));
            }
            // odometer over parent[i] in 0..i
            let mut i = n - 1;
            loop {
                if i == 0 {
                    return forms.len();
                }
                if parent[i] + 1 < i {
                    parent[i] += 1;
                    break;
                }
                parent[i] = 0;
                i -= 1;
            }
        }
    }

    #[test]
    fn small_counts_match_brute_force() {
        assert_eq!(enumerate_rooted_trees(1).unwrap().len(), 1);
        assert_eq!(enumerate_rooted_trees(3).unwrap().len(), 2);
        for n in 2..=8 {
            assert_eq!(enumerate_rooted_trees(n).unwrap().len(), brute_rooted(n), "n = {n}");
        }
        assert!(enumerate_rooted_trees(17).is_err());
        assert!(enumerate_rooted_trees(0).unwrap().is_empty());
    }

    #[test]
    fn unrooted_classes_match_graph_forms() {
        for n in 2..=10 {
            let rooted = enumerate_rooted_trees(n).unwrap();
            let un = dedupe_unrooted(&rooted).unwrap();
            let forms: HashSet<_> = rooted
                .iter()
                .map(|r| canonical_form(&r.to_graph(TREE_DEGREE).unwrap()))
                .collect();
            assert_eq!(un.family.len(), forms.len(), "n = {n}");
            assert_eq!(un.orbit_sizes.iter().sum::<usize>(), rooted.len());
            assert!(un.max_orbit() <= n);
            for g in &un.family.members {
                assert_eq!(g.n(), n);
                assert!(g.max_degree() <= 3);
                assert!(g.is_connected());
            }
        }
        assert_eq!(dedupe_unrooted(&enumerate_rooted_trees(2).unwrap()).unwrap().family.len(), 1);
    }

    #[test]
    fn code_round_trip() {
        for r in enumerate_rooted_trees(7).unwrap() {
            let g = r.to_graph(TREE_DEGREE).unwrap();
            assert_eq!(RootedCode::of_rooted_graph(&g, 0), r);
        }
    }
}

//! YES and NO instances: relabeled unions of family members.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{disjoint_union, random_relabel, Graph};
use crate::oracle::LabeledUnion;
use crate::seeds::derive_seed;

use super::scoops::SuitableFamily;

/// Member `i` repeated `copies` times, member-major.
pub fn yes_layout(members: usize, copies: usize) -> Vec<u32> {
    (0..members as u32)
        .flat_map(|i| std::iter::repeat_n(i, copies))
        .collect()
}

/// Each member of `half` repeated `2 * copies` times.
pub fn no_layout(half: &[usize], copies: usize) -> Vec<u32> {
    half.iter()
        .flat_map(|&i| std::iter::repeat_n(i as u32, 2 * copies))
        .collect()
}

/// Uniform subset of `len / 2` indices, sorted.
pub fn choose_half_set(len: usize, seed: u64) -> Result<Vec<usize>> {
    if len % 2 == 1 {
        return Err(Error::OddFamily(len));
    }
    let mut idx: Vec<usize> = (0..len).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut half = idx[..len / 2].to_vec();
    half.sort_unstable();
    Ok(half)
}

fn check_copies(copies: usize) -> Result<()> {
    if copies == 0 {
        return Err(Error::Usage("copies must be at least 1".into()));
    }
    Ok(())
}

/// `copies` of every member, uniformly relabeled. `n = copies * t * |F|`.
pub fn build_yes_instance(f: &SuitableFamily, copies: usize, seed: u64) -> Result<Graph> {
    check_copies(copies)?;
    Ok(LabeledUnion::eager(&f.members, yes_layout(f.len(), copies), seed)?.to_graph())
}

/// As [`build_yes_instance`], padded with isolated vertices up to `n`
/// before relabeling.
pub fn build_yes_instance_padded(f: &SuitableFamily, copies: usize, n: usize, seed: u64) -> Result<Graph> {
    check_copies(copies)?;
    let core = copies * f.t * f.len();
    if n < core {
        return Err(Error::Usage(format!("padding target {n} is below the union size {core}")));
    }
    let mut parts: Vec<(&Graph, usize)> = f.members.iter().map(|g| (g, copies)).collect();
    let isolated = Graph::empty(1, f.d);
    if n > core {
        parts.push((&isolated, n - core));
    }
    Ok(random_relabel(&disjoint_union(&parts)?, seed))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HardInstanceMeta {
    pub half_set: Vec<usize>,
    pub copies: usize,
    pub seed: u64,
    pub yes_seed: u64,
    pub no_seed: u64,
}

#[derive(Debug, Clone)]
pub struct HardInstancePair {
    pub yes_graph: Graph,
    pub no_graph: Graph,
    pub meta: HardInstanceMeta,
}

impl HardInstancePair {
    pub fn half_set(&self) -> &[usize] {
        &self.meta.half_set
    }
}

/// Seeds and half set used by [`build_no_instance`] for `seed`.
pub fn hard_instance_meta(family_len: usize, copies: usize, seed: u64) -> Result<HardInstanceMeta> {
    check_copies(copies)?;
    Ok(HardInstanceMeta {
        half_set: choose_half_set(family_len, derive_seed(seed, 0))?,
        copies,
        seed,
        yes_seed: derive_seed(seed, 1),
        no_seed: derive_seed(seed, 2),
    })
}

/// A uniform half `R` of the family with `2 * copies` copies of each of its
/// members, next to the YES instance of the same size.
pub fn build_no_instance(f: &SuitableFamily, copies: usize, seed: u64) -> Result<HardInstancePair> {
    let meta = hard_instance_meta(f.len(), copies, seed)?;
    let yes_graph = build_yes_instance(f, copies, meta.yes_seed)?;
    let no_graph = LabeledUnion::eager(&f.members, no_layout(&meta.half_set, copies), meta.no_seed)?.to_graph();
    Ok(HardInstancePair {
        yes_graph,
        no_graph,
        meta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::canonical_form;
    use crate::family::scoops::FamilySource;
    use crate::generators;
    use std::collections::BTreeMap;

    fn toy_family() -> SuitableFamily {
        let members = vec![
            generators::path(4, 3),
            generators::star(3, 3),
            generators::cycle(4, 3),
            {
                let mut g = generators::path(3, 3);
                g = disjoint_union(&[(&g, 1), (&Graph::empty(1, 3), 1)]).unwrap();
                g
            },
        ];
        SuitableFamily::from_members(members, FamilySource::Custom).unwrap()
    }

    fn histogram(g: &Graph) -> BTreeMap<crate::canon::CanonicalForm, usize> {
        let mut h = BTreeMap::new();
        for c in g.components() {
            *h.entry(canonical_form(&g.induced_subgraph(&c))).or_insert(0) += 1;
        }
        h
    }

    #[test]
    fn yes_instance_histogram() {
        let f = toy_family().truncated(3);
        let g = build_yes_instance(&f, 5, 11).unwrap();
        assert_eq!(g.n(), 5 * 4 * 3);
        let h = histogram(&g);
        assert_eq!(h.len(), 3);
        assert!(h.values().all(|&c| c == 5));
        let single = SuitableFamily::from_members(vec![generators::cycle(5, 2)], FamilySource::Custom).unwrap();
        let g = build_yes_instance(&single, 1, 3).unwrap();
        assert_eq!(canonical_form(&g), single.forms[0]);
    }

    #[test]
    fn no_instance_histogram() {
        let f = toy_family().truncated(3).truncated(2);
        let pair = build_no_instance(&f, 1, 4).unwrap();
        assert_eq!(pair.half_set().len(), 1);
        let h = histogram(&pair.no_graph);
        assert_eq!(h.len(), 1);
        assert_eq!(*h.values().next().unwrap(), 2);
        assert_eq!(pair.yes_graph.n(), pair.no_graph.n());
        assert!(matches!(build_no_instance(&toy_family().truncated(3), 1, 0), Err(Error::OddFamily(3))));
    }

    #[test]
    fn padding() {
        let f = toy_family().truncated(2);
        let g = build_yes_instance_padded(&f, 2, 21, 5).unwrap();
        assert_eq!(g.n(), 21);
        assert_eq!(g.components().iter().filter(|c| c.len() == 1).count(), 5);
        assert!(build_yes_instance_padded(&f, 2, 10, 5).is_err());
    }

    #[test]
    fn deterministic() {
        let f = toy_family();
        let a = build_no_instance(&f, 3, 99).unwrap();
        let b = build_no_instance(&f, 3, 99).unwrap();
        assert_eq!(a.no_graph, b.no_graph);
        assert_eq!(a.yes_graph.to_text(), b.yes_graph.to_text());
    }
}

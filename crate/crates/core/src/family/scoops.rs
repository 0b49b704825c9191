//! Greedy ball carving over diagonal codes, and the suitability checks.

use std::collections::HashSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::{canonical_form, CanonicalForm};
use crate::edit::{component_distance, component_matching_bound, DistanceCache, COMPONENT_SEARCH_BUDGET};
use crate::error::{Error, Result};
use crate::family::grid::{build_diagonal_graph, DiagonalCode, GridParams};
use crate::graph::Graph;
use crate::partition::{min_balanced_separator, SEPARATOR_SUBSET_BUDGET};

/// Pools with at most `2^POOL_EXHAUSTIVE_BITS` codes are enumerated.
pub const POOL_EXHAUSTIVE_BITS: usize = 20;

/// Pairwise normalized distance required of a suitable family.
pub const MIN_PAIRWISE_DISTANCE: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum PoolMode {
    Exhaustive,
    Sampled { size: usize, seed: u64 },
}

/// Default carving radius `ceil(0.16 s^2)`.
pub fn default_radius(s: usize) -> usize {
    // exact integer form of ceil(16 s^2 / 100)
    (16 * s * s).div_ceil(100)
}

/// Every code in increasing numeric order when `2^len <= 2^20`, else
/// `sample` seeded uniform codes.
pub fn code_pool(len: usize, sample: usize, seed: u64) -> (Vec<DiagonalCode>, PoolMode) {
    if len <= POOL_EXHAUSTIVE_BITS {
        let codes = (0..1u64 << len).map(|v| DiagonalCode::from_u64(len, v)).collect();
        return (codes, PoolMode::Exhaustive);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let codes = (0..sample).map(|_| DiagonalCode::random(len, &mut rng)).collect();
    (codes, PoolMode::Sampled { size: sample, seed })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilySource {
    Grid {
        params: GridParams,
        radius: usize,
        pool: PoolMode,
        codes: Vec<DiagonalCode>,
        /// Candidates outside every ball that duplicated an earlier
        /// member up to isomorphism.
        skipped_isomorphic: usize,
    },
    Trees {
        s: usize,
        rooted_count: usize,
        orbit_sizes: Vec<usize>,
    },
    Custom,
}

/// Equal-size graphs with certified metadata.
#[derive(Debug, Clone)]
pub struct SuitableFamily {
    pub members: Vec<Graph>,
    pub forms: Vec<CanonicalForm>,
    pub t: usize,
    pub d: usize,
    pub source: FamilySource,
    pub min_pairwise_hamming: Option<usize>,
    pub min_pairwise_edits: Option<u64>,
    pub min_separator: Option<usize>,
    pub epsilon: Option<f64>,
}

impl SuitableFamily {
    pub fn from_members(members: Vec<Graph>, source: FamilySource) -> Result<Self> {
        let first = members.first().ok_or(Error::EmptyPool)?;
        let (t, d) = (first.n(), first.d());
        for g in &members {
            if g.n() != t {
                return Err(Error::UnequalComponents {
                    first: t,
                    other: g.n(),
                });
            }
            if g.d() != d {
                return Err(Error::InvalidGraph("family members disagree on degree bound".into()));
            }
        }
        let forms = members.par_iter().map(canonical_form).collect();
        Ok(SuitableFamily {
            members,
            forms,
            t,
            d,
            source,
            min_pairwise_hamming: None,
            min_pairwise_edits: None,
            min_separator: None,
            epsilon: None,
        })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn codes(&self) -> Option<&[DiagonalCode]> {
        match &self.source {
            FamilySource::Grid { codes, .. } => Some(codes),
            _ => None,
        }
    }

    /// Keeps the first `len` members.
    pub fn truncated(&self, len: usize) -> Self {
        let mut f = self.clone();
        f.members.truncate(len);
        f.forms.truncate(len);
        if let FamilySource::Grid { codes, .. } = &mut f.source {
            codes.truncate(len);
        }
        if let FamilySource::Trees { orbit_sizes, .. } = &mut f.source {
            orbit_sizes.truncate(len);
        }
        f
    }
}

/// Smallest Hamming distance over all pairs; `None` below two codes.
pub fn min_pairwise_hamming(codes: &[DiagonalCode]) -> Option<usize> {
    (0..codes.len())
        .into_par_iter()
        .filter_map(|i| codes[i + 1..].iter().map(|c| c.hamming(&codes[i])).min())
        .min()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScoopsOptions {
    /// Skip candidates isomorphic to an earlier member. Needed without
    /// gadgets, where grid symmetries identify distinct codes.
    pub skip_isomorphic: bool,
    pub max_members: Option<usize>,
}

impl Default for ScoopsOptions {
    fn default() -> Self {
        ScoopsOptions {
            skip_isomorphic: true,
            max_members: None,
        }
    }
}

/// Scans `pool` in order and keeps every code farther than `radius` in
/// Hamming distance from all codes kept so far.
pub fn take_scoops(
    p: &GridParams,
    pool: &[DiagonalCode],
    pool_mode: PoolMode,
    radius: usize,
    options: ScoopsOptions,
) -> Result<SuitableFamily> {
    if radius == 0 {
        return Err(Error::Usage("radius must be at least 1".into()));
    }
    if pool.is_empty() {
        return Err(Error::EmptyPool);
    }
    if let Some(c) = pool.iter().find(|c| c.len() != p.cells()) {
        return Err(Error::CodeLength {
            expected: p.cells(),
            got: c.len(),
        });
    }
    let mut kept: Vec<DiagonalCode> = Vec::new();
    let mut members = Vec::new();
    let mut seen_forms: HashSet<CanonicalForm> = HashSet::new();
    let mut skipped = 0;
    for code in pool {
        if options.max_members.is_some_and(|m| kept.len() >= m) {
            break;
        }
        if kept.iter().any(|k| k.hamming(code) <= radius) {
            continue;
        }
        let g = build_diagonal_graph(p, code)?;
        if options.skip_isomorphic && !seen_forms.insert(canonical_form(&g)) {
            skipped += 1;
            continue;
        }
        kept.push(code.clone());
        members.push(g);
    }
    let hamming = min_pairwise_hamming(&kept);
    let mut family = SuitableFamily::from_members(
        members,
        FamilySource::Grid {
            params: *p,
            radius,
            pool: pool_mode,
            codes: kept,
            skipped_isomorphic: skipped,
        },
    )?;
    family.min_pairwise_hamming = hamming;
    Ok(family)
}

/// `2^len / sum_{i <= radius} C(len, i)`: the ball-packing floor on the
/// greedy family size, as a float.
pub fn ball_packing_floor(len: usize, radius: usize) -> f64 {
    let mut ball = 0.0;
    let mut binom = 1.0;
    for i in 0..=radius.min(len) {
        if i > 0 {
            binom = binom * (len - i + 1) as f64 / i as f64;
        }
        ball += binom;
    }
    2f64.powi(len as i32) / ball
}

#[derive(Debug, Clone, Copy)]
pub struct SuitabilityOptions {
    /// Separators must reach `separator_constant * eps * t`.
    pub separator_constant: f64,
    pub separator_budget: u64,
    pub distance_budget: u64,
    pub check_distances: bool,
    pub check_separators: bool,
}

impl Default for SuitabilityOptions {
    fn default() -> Self {
        SuitabilityOptions {
            separator_constant: 1.0,
            separator_budget: SEPARATOR_SUBSET_BUDGET,
            distance_budget: COMPONENT_SEARCH_BUDGET,
            check_distances: true,
            check_separators: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberSeparators {
    /// Smallest (1/3, 2/3)-balanced separator.
    pub third: usize,
    /// Smallest separator leaving components of at most `(1 - 0.01/d) t`.
    pub fine: usize,
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuitabilityReport {
    pub members: usize,
    pub t: usize,
    pub d: usize,
    pub eps: f64,
    /// The distance condition only binds when `t > 2 / eps`.
    pub distance_applicable: bool,
    pub min_pairwise_edits: Option<u64>,
    pub min_pairwise_normalized: Option<f64>,
    pub distances_exact: bool,
    pub distance_ok: bool,
    pub separator_threshold: f64,
    pub min_separator_third: Option<usize>,
    pub min_separator_fine: Option<usize>,
    pub separators_exact: bool,
    pub separator_ok: bool,
    pub per_member: Vec<MemberSeparators>,
    pub passed: bool,
}

/// Certifies the two conditions of a suitable family: pairwise normalized
/// distance at least 0.02 (by certified lower bounds) and large balanced
/// separators. Failures are reported, never thrown.
pub fn check_suitable(f: &SuitableFamily, eps: f64, d: usize, options: SuitabilityOptions) -> SuitabilityReport {
    let t = f.t;
    let distance_applicable = t as f64 > 2.0 / eps;
    let pairs: Vec<(usize, usize)> = (0..f.len())
        .flat_map(|i| (i + 1..f.len()).map(move |j| (i, j)))
        .collect();
    let mut min_edits = None;
    let mut distances_exact = true;
    if options.check_distances && !pairs.is_empty() {
        let results: Vec<(u64, bool)> = pairs
            .par_iter()
            .map(|&(i, j)| pair_lower_bound(f, i, j, options.distance_budget))
            .collect();
        min_edits = results.iter().map(|r| r.0).min();
        distances_exact = results.iter().all(|r| r.1);
    }
    let scale = (d * t) as f64;
    let min_norm = min_edits.map(|e| if scale > 0.0 { e as f64 / scale } else { 0.0 });
    let distance_ok = !options.check_distances || min_norm.is_none_or(|x| x >= MIN_PAIRWISE_DISTANCE);

    let fine_balance = 1.0 - 0.01 / d as f64;
    let per_member: Vec<MemberSeparators> = if options.check_separators {
        f.members
            .par_iter()
            .map(|g| {
                let third = min_balanced_separator(g, 2.0 / 3.0, options.separator_budget)
                    .expect("balance within range");
                let fine = min_balanced_separator(g, fine_balance, options.separator_budget)
                    .expect("balance within range");
                MemberSeparators {
                    third: third.size(),
                    fine: fine.size(),
                    exact: third.exact && fine.exact,
                }
            })
            .collect()
    } else {
        Vec::new()
    };
    let threshold = options.separator_constant * eps * t as f64;
    let min_third = per_member.iter().map(|m| m.third).min();
    let min_fine = per_member.iter().map(|m| m.fine).min();
    let separators_exact = per_member.iter().all(|m| m.exact);
    let separator_ok = !options.check_separators
        || min_third.is_some_and(|s| s as f64 >= threshold - 1e-9 && separators_exact);
    SuitabilityReport {
        members: f.len(),
        t,
        d,
        eps,
        distance_applicable,
        min_pairwise_edits: min_edits,
        min_pairwise_normalized: min_norm,
        distances_exact,
        distance_ok,
        separator_threshold: threshold,
        min_separator_third: min_third,
        min_separator_fine: min_fine,
        separators_exact,
        separator_ok,
        per_member,
        passed: distance_ok && separator_ok,
    }
}

fn pair_lower_bound(f: &SuitableFamily, i: usize, j: usize, budget: u64) -> (u64, bool) {
    let (a, b) = (&f.members[i], &f.members[j]);
    if f.forms[i] == f.forms[j] {
        return (0, true);
    }
    if a.is_connected() && b.is_connected() {
        let p = component_distance(a, b, budget).expect("members share a size");
        return (p.edits, p.exact);
    }
    let mut cache = DistanceCache::with_budget(budget);
    let m = component_matching_bound(a, b, &mut cache).expect("members share a size");
    (m.edits, m.exact)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::grid::build_base_graph;

    #[test]
    fn radius_and_floor() {
        assert_eq!(default_radius(3), 2);
        assert_eq!(default_radius(4), 3);
        assert_eq!(default_radius(5), 4);
        assert_eq!(default_radius(12), 24);
        assert!((ball_packing_floor(9, 2) - 512.0 / 46.0).abs() < 1e-9);
    }

    #[test]
    fn single_code_pool() {
        let p = GridParams::gadgetless(4).unwrap();
        let pool = vec![DiagonalCode::zeros(9)];
        let f = take_scoops(&p, &pool, PoolMode::Exhaustive, 2, ScoopsOptions::default()).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f.min_pairwise_hamming, None);
        assert!(matches!(
            take_scoops(&p, &[], PoolMode::Exhaustive, 2, ScoopsOptions::default()),
            Err(Error::EmptyPool)
        ));
    }

    #[test]
    fn greedy_family_is_far_apart() {
        let p = GridParams::gadgetless(4).unwrap();
        let (pool, mode) = code_pool(p.cells(), 0, 0);
        assert_eq!(pool.len(), 512);
        let f = take_scoops(&p, &pool, mode, 2, ScoopsOptions::default()).unwrap();
        let codes = f.codes().unwrap();
        for i in 0..codes.len() {
            for j in i + 1..codes.len() {
                assert!(codes[i].hamming(&codes[j]) > 2);
            }
            assert_eq!(f.members[i].n(), 16);
        }
        let forms: HashSet<_> = f.forms.iter().collect();
        assert_eq!(forms.len(), f.len());
    }

    #[test]
    fn duplicate_members_fail_the_distance_check() {
        let g = build_base_graph(&GridParams::gadgetless(4).unwrap()).unwrap();
        let f = SuitableFamily::from_members(vec![g.clone(), g], FamilySource::Custom).unwrap();
        let r = check_suitable(&f, 0.25, 8, SuitabilityOptions::default());
        assert_eq!(r.min_pairwise_edits, Some(0));
        assert!(!r.distance_ok);
        assert!(!r.passed);
    }
}

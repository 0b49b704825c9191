//! Component sampling and the collision distinguisher for YES/NO unions.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::{canonical_form, CanonicalForm};
use crate::error::{Error, Result};
use crate::family::{choose_half_set, no_layout, yes_layout};
use crate::graph::{Graph, Vertex};
use crate::oracle::{explore_component, LabeledUnion, NeighborOracle, QueryLedger};
use crate::seeds::derive_seed;

use super::stats::wilson_interval;

/// Redraws allowed per sample when landing on isolated padding.
const PADDING_REDRAWS: usize = 10_000;

/// A stream of component forms.
pub trait FormSource {
    fn next_form(&mut self) -> Result<CanonicalForm>;
}

impl<F: FnMut() -> Result<CanonicalForm>> FormSource for F {
    fn next_form(&mut self) -> Result<CanonicalForm> {
        self()
    }
}

/// Uniform components of a union whose non-padding components all have
/// `t` vertices. Isolated vertices count as padding when `t > 1` and are
/// redrawn.
pub struct ComponentSampler<'a, O: NeighborOracle + ?Sized> {
    graph: &'a O,
    t: usize,
    rng: ChaCha8Rng,
    ledger: QueryLedger,
    draws: usize,
}

impl<'a, O: NeighborOracle + ?Sized> ComponentSampler<'a, O> {
    pub fn new(graph: &'a O, t: usize, seed: u64) -> Result<Self> {
        if t == 0 || graph.vertex_count() == 0 {
            return Err(Error::Usage("sampler needs vertices and t >= 1".into()));
        }
        Ok(ComponentSampler {
            graph,
            t,
            rng: ChaCha8Rng::seed_from_u64(seed),
            ledger: QueryLedger::new(),
            draws: 0,
        })
    }

    pub fn ledger(&self) -> &QueryLedger {
        &self.ledger
    }

    pub fn draws(&self) -> usize {
        self.draws
    }

    pub fn draw(&mut self) -> Result<CanonicalForm> {
        let n = self.graph.vertex_count();
        let d = self.graph.degree_bound();
        for _ in 0..PADDING_REDRAWS {
            let v = self.rng.random_range(0..n) as Vertex;
            let view = match explore_component(self.graph, &mut self.ledger, v, self.t) {
                Ok(view) => view,
                Err(Error::ComponentOverflow { .. }) => {
                    return Err(Error::UnequalComponents {
                        first: self.t,
                        other: self.t + 1,
                    })
                }
                Err(e) => return Err(e),
            };
            if view.size() == self.t {
                self.draws += 1;
                return Ok(canonical_form(&view.to_graph(d)));
            }
            if view.size() > 1 {
                return Err(Error::UnequalComponents {
                    first: self.t,
                    other: view.size(),
                });
            }
        }
        Err(Error::Usage("sampler found only padding vertices".into()))
    }
}

impl<O: NeighborOracle + ?Sized> FormSource for ComponentSampler<'_, O> {
    fn next_form(&mut self) -> Result<CanonicalForm> {
        self.draw()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Guess {
    Yes,
    No,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistinguisherOutcome {
    pub guess: Guess,
    pub samples_used: usize,
    /// Number of equal pairs among the draws.
    pub collisions: u64,
    pub threshold: f64,
}

/// `3 q (q - 1) / (4 |F|)`: midway between the expected collision counts
/// under YES, `q(q-1)/(2|F|)`, and NO, `q(q-1)/|F|`.
pub fn collision_threshold(q: usize, family_size: usize) -> f64 {
    let q = q as f64;
    3.0 * q * (q - 1.0) / (4.0 * family_size.max(1) as f64)
}

/// Draws `q` forms and guesses NO iff the pairwise collision count exceeds
/// [`collision_threshold`].
pub fn collision_distinguisher<S: FormSource + ?Sized>(
    source: &mut S,
    q: usize,
    family_size: usize,
) -> Result<DistinguisherOutcome> {
    if q < 2 {
        return Err(Error::Usage("the distinguisher needs q >= 2".into()));
    }
    let mut seen: HashMap<CanonicalForm, u64> = HashMap::new();
    let mut collisions = 0;
    for _ in 0..q {
        let c = seen.entry(source.next_form()?).or_insert(0);
        collisions += *c;
        *c += 1;
    }
    let threshold = collision_threshold(q, family_size);
    Ok(DistinguisherOutcome {
        guess: if collisions as f64 > threshold { Guess::No } else { Guess::Yes },
        samples_used: q,
        collisions,
        threshold,
    })
}

/// Copies per member so that `n >= 100 q^2 t` in the YES union.
pub fn copies_for(q: usize, family_size: usize) -> usize {
    (100 * q * q).div_ceil(family_size.max(1)).max(1)
}

/// Success counts at one sample budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QCell {
    pub q: usize,
    pub trials: usize,
    pub yes_successes: usize,
    pub no_successes: usize,
}

impl QCell {
    pub fn yes_rate(&self) -> f64 {
        self.yes_successes as f64 / self.trials as f64
    }

    pub fn no_rate(&self) -> f64 {
        self.no_successes as f64 / self.trials as f64
    }

    pub fn passes(&self, target: f64) -> bool {
        self.yes_rate() >= target && self.no_rate() >= target
    }

    /// Whether either side is below `target` beyond the Wilson interval.
    pub fn clearly_fails(&self, target: f64, z: f64) -> bool {
        wilson_interval(self.yes_successes, self.trials, z).1 < target
            || wilson_interval(self.no_successes, self.trials, z).1 < target
    }
}

/// Runs `trials` YES and `trials` NO distinguishing games at budget `q`.
/// Each trial samples its own lazy relabeled union (and half set for NO)
/// from `derive_seed(seed, trial)`.
pub fn evaluate_q(members: &[Graph], q: usize, trials: usize, seed: u64) -> Result<QCell> {
    let f = members.len();
    if f < 2 || f % 2 == 1 {
        return Err(Error::Usage(format!("distinguishing needs an even family of size >= 2, got {f}")));
    }
    let t = members[0].n();
    let copies = copies_for(q, f);
    let outcomes: Result<Vec<(bool, bool)>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let base = derive_seed(seed, trial as u64);
            let yes = LabeledUnion::lazy(members, yes_layout(f, copies), derive_seed(base, 0))?;
            let mut sampler = ComponentSampler::new(&yes, t, derive_seed(base, 1))?;
            let yes_ok = collision_distinguisher(&mut sampler, q, f)?.guess == Guess::Yes;
            let half = choose_half_set(f, derive_seed(base, 2))?;
            let no = LabeledUnion::lazy(members, no_layout(&half, copies), derive_seed(base, 3))?;
            let mut sampler = ComponentSampler::new(&no, t, derive_seed(base, 4))?;
            let no_ok = collision_distinguisher(&mut sampler, q, f)?.guess == Guess::No;
            Ok((yes_ok, no_ok))
        })
        .collect();
    let outcomes = outcomes?;
    Ok(QCell {
        q,
        trials,
        yes_successes: outcomes.iter().filter(|o| o.0).count(),
        no_successes: outcomes.iter().filter(|o| o.1).count(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepOptions {
    pub trials: usize,
    pub target: f64,
    pub q_max: usize,
    /// Budgets above `q*` re-checked for a non-monotone curve.
    pub window: usize,
    /// Normal quantile for the reported intervals.
    pub z: f64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            trials: 200,
            target: 2.0 / 3.0,
            q_max: 4096,
            window: 2,
            z: 1.96,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub family_size: usize,
    pub q_star: Option<usize>,
    pub yes_rate: Option<f64>,
    pub no_rate: Option<f64>,
    pub yes_ci: Option<(f64, f64)>,
    pub no_ci: Option<(f64, f64)>,
    /// Every evaluated budget, ascending.
    pub cells: Vec<QCell>,
    pub flags: Vec<String>,
}

/// Least `q` at which both YES and NO success rates reach the target:
/// doubling from `q = 2`, then bisection, then a window check above the
/// answer. A budget in the window that fails beyond its Wilson interval
/// flags the row as non-monotone; the answer is kept as found.
pub fn empirical_sample_complexity(members: &[Graph], options: &SweepOptions, seed: u64) -> Result<SweepRow> {
    let f = members.len();
    let mut row = SweepRow {
        family_size: f,
        q_star: None,
        yes_rate: None,
        no_rate: None,
        yes_ci: None,
        no_ci: None,
        cells: Vec::new(),
        flags: Vec::new(),
    };
    if f < 2 {
        row.flags.push("degenerate: fewer than two members".into());
        return Ok(row);
    }
    if options.trials == 0 || options.q_max < 2 {
        return Err(Error::Usage("sweep needs trials >= 1 and q_max >= 2".into()));
    }
    let mut cache: HashMap<usize, QCell> = HashMap::new();
    let mut eval = |q: usize| -> Result<QCell> {
        if let Some(c) = cache.get(&q) {
            return Ok(*c);
        }
        let c = evaluate_q(members, q, options.trials, derive_seed(seed, q as u64))?;
        cache.insert(q, c);
        Ok(c)
    };

    let mut lo = 1;
    let mut hi = 2;
    loop {
        if eval(hi)?.passes(options.target) {
            break;
        }
        lo = hi;
        if hi >= options.q_max {
            row.flags.push(format!("target not reached up to q = {}", options.q_max));
            hi = 0;
            break;
        }
        hi = (hi * 2).min(options.q_max);
    }
    if hi > 0 {
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if eval(mid)?.passes(options.target) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        for q in hi + 1..=(hi + options.window).min(options.q_max) {
            let c = eval(q)?;
            if c.clearly_fails(options.target, options.z) {
                row.flags.push(format!("non-monotone: q = {q} fails above q* = {hi}"));
            }
        }
        let c = eval(hi)?;
        row.q_star = Some(hi);
        row.yes_rate = Some(c.yes_rate());
        row.no_rate = Some(c.no_rate());
        row.yes_ci = Some(wilson_interval(c.yes_successes, c.trials, options.z));
        row.no_ci = Some(wilson_interval(c.no_successes, c.trials, options.z));
    }
    let mut cells: Vec<QCell> = cache.into_values().collect();
    cells.sort_by_key(|c| c.q);
    row.cells = cells;
    Ok(row)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::graph::{disjoint_union, random_relabel};

    fn fixed(forms: Vec<CanonicalForm>) -> impl FnMut() -> Result<CanonicalForm> {
        let mut it = forms.into_iter();
        move || it.next().ok_or_else(|| Error::Usage("exhausted".into()))
    }

    #[test]
    fn single_component_is_constant() {
        let c5 = generators::cycle(5, 2);
        let mut s = ComponentSampler::new(&c5, 5, 1).unwrap();
        let f = canonical_form(&c5);
        for _ in 0..20 {
            assert_eq!(s.draw().unwrap(), f);
        }
        assert_eq!(s.draws(), 20);
    }

    #[test]
    fn padding_is_skipped_and_unequal_sizes_fail() {
        let c4 = generators::cycle(4, 2);
        let k1 = Graph::empty(1, 2);
        let g = disjoint_union(&[(&c4, 5), (&k1, 30)]).unwrap();
        let mut s = ComponentSampler::new(&g, 4, 2).unwrap();
        for _ in 0..50 {
            assert_eq!(s.draw().unwrap(), canonical_form(&c4));
        }
        let p3 = generators::path(3, 2);
        let bad = disjoint_union(&[(&c4, 5), (&p3, 5)]).unwrap();
        let mut s = ComponentSampler::new(&bad, 4, 2).unwrap();
        assert!((0..50).any(|_| matches!(s.draw(), Err(Error::UnequalComponents { .. }))));
        let big = generators::path(9, 2);
        let mut s = ComponentSampler::new(&big, 4, 2).unwrap();
        assert!(matches!(s.draw(), Err(Error::UnequalComponents { .. })));
    }

    #[test]
    fn two_identical_draws_give_statistic_one() {
        let f = canonical_form(&generators::cycle(3, 2));
        let out = collision_distinguisher(&mut fixed(vec![f.clone(), f]), 2, 1).unwrap();
        assert_eq!(out.collisions, 1);
        assert!((out.threshold - 1.5).abs() < 1e-12);
        assert!(collision_distinguisher(&mut fixed(vec![]), 1, 4).is_err());
    }

    #[test]
    fn collision_count_is_pairwise() {
        let a = canonical_form(&generators::path(3, 2));
        let b = canonical_form(&generators::cycle(3, 2));
        let forms = vec![a.clone(), b.clone(), a.clone(), a, b];
        let out = collision_distinguisher(&mut fixed(forms), 5, 10).unwrap();
        // three equal a's give 3 pairs, two b's give 1
        assert_eq!(out.collisions, 4);
        assert!((out.threshold - 1.5).abs() < 1e-12);
    }

    #[test]
    fn decision_ignores_labels() {
        let parts = [generators::path(4, 3), generators::star(3, 3), generators::cycle(4, 3)];
        let g = disjoint_union(&[(&parts[0], 3), (&parts[1], 3), (&parts[2], 3)]).unwrap();
        let h = random_relabel(&g, 99);
        let mut a = ComponentSampler::new(&g, 4, 5).unwrap();
        let mut b = ComponentSampler::new(&h, 4, 5).unwrap();
        let fa: Vec<_> = (0..30).map(|_| a.draw().unwrap()).collect();
        let fb: Vec<_> = (0..30).map(|_| b.draw().unwrap()).collect();
        let mut sorted_a = fa.clone();
        sorted_a.sort();
        let oa = collision_distinguisher(&mut fixed(fa.clone()), 30, 3).unwrap();
        let ob = collision_distinguisher(&mut fixed(sorted_a), 30, 3).unwrap();
        assert_eq!(oa, ob);
        assert!(fb.iter().all(|f| parts.iter().any(|p| canonical_form(p) == *f)));
    }

    #[test]
    fn two_member_family_needs_three_samples() {
        // |F| = 2: at q = 2 a YES game guesses YES only without a collision
        // (rate 1/2); at q = 3 the threshold 2.25 needs all three equal.
        let members = vec![generators::path(4, 3), generators::star(3, 3)];
        let row = empirical_sample_complexity(
            &members,
            &SweepOptions {
                trials: 300,
                ..SweepOptions::default()
            },
            7,
        )
        .unwrap();
        assert_eq!(row.q_star, Some(3));
        assert!(row.flags.is_empty(), "{:?}", row.flags);
    }

    #[test]
    fn degenerate_family_is_flagged() {
        let row = empirical_sample_complexity(&[generators::path(3, 2)], &SweepOptions::default(), 1).unwrap();
        assert_eq!(row.q_star, None);
        assert_eq!(row.flags.len(), 1);
    }

    #[test]
    fn evaluation_is_deterministic() {
        let members = vec![generators::path(4, 3), generators::star(3, 3)];
        assert_eq!(evaluate_q(&members, 2, 50, 3).unwrap(), evaluate_q(&members, 2, 50, 3).unwrap());
    }
}

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::canon::{canonical_form, CanonicalForm};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// Component histogram over canonical forms. Exact vectors hold integers;
/// estimates may be fractional.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CountVector {
    pub counts: BTreeMap<CanonicalForm, f64>,
    pub total_vertices: usize,
}

impl CountVector {
    pub fn new(total_vertices: usize) -> Self {
        CountVector {
            counts: BTreeMap::new(),
            total_vertices,
        }
    }

    pub fn get(&self, form: &CanonicalForm) -> f64 {
        self.counts.get(form).copied().unwrap_or(0.0)
    }

    pub fn add(&mut self, form: CanonicalForm, amount: f64) {
        *self.counts.entry(form).or_insert(0.0) += amount;
    }

    pub fn support(&self) -> usize {
        self.counts.values().filter(|&&c| c != 0.0).count()
    }

    /// Sum of counts.
    pub fn l1_mass(&self) -> f64 {
        self.counts.values().map(|c| c.abs()).sum()
    }

    /// Sum of count times form size.
    pub fn vertex_mass(&self) -> f64 {
        self.counts.iter().map(|(f, c)| c * f.vertex_count() as f64).sum()
    }

    pub fn max_form_size(&self) -> usize {
        self.counts.keys().map(CanonicalForm::vertex_count).max().unwrap_or(0)
    }

    pub fn min_form_size(&self) -> usize {
        self.counts.keys().map(CanonicalForm::vertex_count).min().unwrap_or(0)
    }

    pub fn l1_distance(&self, other: &CountVector) -> f64 {
        let mut total = 0.0;
        for (f, c) in &self.counts {
            total += (c - other.get(f)).abs();
        }
        for (f, c) in &other.counts {
            if !self.counts.contains_key(f) {
                total += c.abs();
            }
        }
        total
    }

    pub fn is_integral(&self) -> bool {
        self.counts.values().all(|c| c.fract() == 0.0 && *c >= 0.0)
    }
}

/// Exact histogram of the components of `g`, all of which must have at
/// most `k` vertices.
pub fn exact_count_vector(g: &Graph, k: usize) -> Result<CountVector> {
    let mut v = CountVector::new(g.n());
    for comp in g.components() {
        if comp.len() > k {
            return Err(Error::ComponentOverflow { start: comp[0], cap: k });
        }
        v.add(canonical_form(&g.induced_subgraph(&comp)), 1.0);
    }
    Ok(v)
}

/// Deletions that equalize two exact count vectors: for each form, the
/// graph with more instances loses the edges of the surplus. Deleted
/// instances turn into isolated vertices, so on two graphs with the same
/// vertex count both sides of the plan end at the same count vector.
#[derive(Debug, Clone, PartialEq)]
pub struct EqualizePlan {
    pub from_first: Vec<(CanonicalForm, usize)>,
    pub from_second: Vec<(CanonicalForm, usize)>,
    /// Edge deletions the plan performs.
    pub edits: usize,
    /// `||c1 - c2||_1 * k * d`.
    pub bound: f64,
}

impl EqualizePlan {
    pub fn is_empty(&self) -> bool {
        self.from_first.is_empty() && self.from_second.is_empty()
    }

    /// Applies the first (`first = true`) or second side of the plan to a
    /// materialized graph. Instances are taken in order of smallest vertex.
    pub fn apply(&self, g: &Graph, first: bool) -> Result<Graph> {
        let side = if first { &self.from_first } else { &self.from_second };
        let mut wanted: BTreeMap<&CanonicalForm, usize> = side.iter().map(|(f, c)| (f, *c)).collect();
        let mut doomed = vec![false; g.n()];
        for comp in g.components() {
            let form = canonical_form(&g.induced_subgraph(&comp));
            if let Some(left) = wanted.get_mut(&form) {
                if *left > 0 {
                    *left -= 1;
                    for &v in &comp {
                        doomed[v as usize] = true;
                    }
                }
            }
        }
        if let Some((f, left)) = wanted.iter().find(|(_, &left)| left > 0) {
            return Err(Error::ContractViolation(format!(
                "graph lacks {left} instances of form {f}"
            )));
        }
        let kept: Vec<(Vertex, Vertex)> = g.edges().filter(|&(u, _)| !doomed[u as usize]).collect();
        Graph::from_edges(g.n(), g.d(), &kept)
    }
}

pub fn equalize_edit_sequence(c1: &CountVector, c2: &CountVector, k: usize, d: usize) -> Result<EqualizePlan> {
    if !c1.is_integral() || !c2.is_integral() {
        return Err(Error::Usage("equalization needs exact (integral) count vectors".into()));
    }
    if c1.max_form_size().max(c2.max_form_size()) > k {
        return Err(Error::Usage(format!("count vectors hold forms larger than k = {k}")));
    }
    let mut from_first = Vec::new();
    let mut from_second = Vec::new();
    let mut edits = 0;
    let mut forms: Vec<&CanonicalForm> = c1.counts.keys().chain(c2.counts.keys()).collect();
    forms.sort();
    forms.dedup();
    for f in forms {
        let (a, b) = (c1.get(f) as i64, c2.get(f) as i64);
        if a == b {
            continue;
        }
        let surplus = (a - b).unsigned_abs() as usize;
        edits += surplus * f.edge_count();
        if a > b {
            from_first.push((f.clone(), surplus));
        } else {
            from_second.push((f.clone(), surplus));
        }
    }
    Ok(EqualizePlan {
        from_first,
        from_second,
        edits,
        bound: c1.l1_distance(c2) * (k * d) as f64,
    })
}

//! Vertex partitions into small connected blocks, the oracles that expose
//! them through neighbor queries, and the recursive separator
//! decomposition.

mod decompose;
mod estimate;
mod oracle;
mod separator;

pub use decompose::{decompose, treewidth_partition, DecomposeReport};
pub use estimate::{cut_edge_estimate, CutEstimate};
pub use oracle::{GlobalOracle, PartitionOracle, TrivialOracle};
pub use separator::{
    balance_limit, heuristic_separator, is_balanced_separator, largest_remaining_component,
    min_balanced_separator, tree_centroid, ExactSeparator, SeparatorFinder, SeparatorResult,
    TreeCentroid, SEPARATOR_SUBSET_BUDGET,
};

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// Blocks listed by smallest vertex, each sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    block_of: Vec<u32>,
    blocks: Vec<Vec<Vertex>>,
    cut_edges: usize,
    k: usize,
}

impl Partition {
    /// Normalizes `blocks`, checks that they partition the vertices, and
    /// counts cut edges. Connectivity and size are checked by [`verify`].
    ///
    /// [`verify`]: Partition::verify
    pub fn from_blocks(g: &Graph, mut blocks: Vec<Vec<Vertex>>, k: usize) -> Result<Self> {
        let n = g.n();
        let mut block_of = vec![u32::MAX; n];
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.retain(|b| !b.is_empty());
        blocks.sort_unstable_by_key(|b| b[0]);
        for (id, b) in blocks.iter().enumerate() {
            for &v in b {
                let slot = block_of.get_mut(v as usize).ok_or(Error::VertexOutOfRange {
                    vertex: v as usize,
                    n,
                })?;
                if *slot != u32::MAX {
                    return Err(Error::InvalidGraph(format!("vertex {v} is in two blocks")));
                }
                *slot = id as u32;
            }
        }
        if let Some(v) = block_of.iter().position(|&b| b == u32::MAX) {
            return Err(Error::InvalidGraph(format!("vertex {v} is in no block")));
        }
        let cut_edges = g
            .edges()
            .filter(|&(u, v)| block_of[u as usize] != block_of[v as usize])
            .count();
        Ok(Partition {
            block_of,
            blocks,
            cut_edges,
            k,
        })
    }

    /// Connected components as blocks, with `k` the largest component.
    pub fn components(g: &Graph) -> Self {
        let comps = g.components();
        let k = comps.iter().map(Vec::len).max().unwrap_or(0);
        Partition::from_blocks(g, comps, k).expect("components partition the graph")
    }

    pub fn block_of(&self, v: Vertex) -> usize {
        self.block_of[v as usize] as usize
    }

    pub fn blocks(&self) -> &[Vec<Vertex>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn cut_edges(&self) -> usize {
        self.cut_edges
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn max_block(&self) -> usize {
        self.blocks.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Recounts every invariant against `g`: cover, connectivity of each
    /// block, the size bound, and the cut-edge count.
    pub fn verify(&self, g: &Graph) -> Result<()> {
        if self.block_of.len() != g.n() {
            return Err(Error::SizeMismatch {
                left: self.block_of.len(),
                right: g.n(),
            });
        }
        let mut seen = HashSet::new();
        for (id, b) in self.blocks.iter().enumerate() {
            if b.len() > self.k {
                return Err(Error::ContractViolation(format!(
                    "block {id} has {} vertices, bound is {}",
                    b.len(),
                    self.k
                )));
            }
            for &v in b {
                if !seen.insert(v) || self.block_of[v as usize] as usize != id {
                    return Err(Error::ContractViolation(format!("vertex {v} misfiled")));
                }
            }
            if !g.induced_subgraph(b).is_connected() {
                return Err(Error::ContractViolation(format!("block {id} is disconnected")));
            }
        }
        if seen.len() != g.n() {
            return Err(Error::ContractViolation("blocks do not cover the graph".into()));
        }
        let recount = g
            .edges()
            .filter(|&(u, v)| self.block_of[u as usize] != self.block_of[v as usize])
            .count();
        if recount != self.cut_edges {
            return Err(Error::ContractViolation(format!(
                "cut edges recorded {} but recount gives {recount}",
                self.cut_edges
            )));
        }
        Ok(())
    }

    /// One line per block `id: v1 v2 ...`, then a footer
    /// `# cut_edges C k K`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (id, b) in self.blocks.iter().enumerate() {
            write!(out, "{id}:").unwrap();
            for v in b {
                write!(out, " {v}").unwrap();
            }
            out.push('\n');
        }
        writeln!(out, "# cut_edges {} k {}", self.cut_edges, self.k).unwrap();
        out
    }

    /// Parses [`to_text`] output and checks it against `g`.
    ///
    /// [`to_text`]: Partition::to_text
    pub fn from_text(g: &Graph, text: &str) -> Result<Self> {
        let mut blocks = Vec::new();
        let mut footer = None;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |msg: &str| Error::Parse {
                line: i + 1,
                msg: msg.to_string(),
            };
            if let Some(rest) = line.strip_prefix('#') {
                let words: Vec<&str> = rest.split_whitespace().collect();
                match words.as_slice() {
                    ["cut_edges", c, "k", k] => {
                        let c: usize = c.parse().map_err(|_| parse_err("bad cut count"))?;
                        let k: usize = k.parse().map_err(|_| parse_err("bad k"))?;
                        footer = Some((c, k));
                    }
                    _ => return Err(parse_err("unknown footer")),
                }
                continue;
            }
            let (_, rest) = line.split_once(':').ok_or_else(|| parse_err("missing ':'"))?;
            let block = rest
                .split_whitespace()
                .map(|w| w.parse::<Vertex>().map_err(|_| parse_err("bad vertex id")))
                .collect::<Result<Vec<_>>>()?;
            blocks.push(block);
        }
        let (cut, k) = footer.ok_or(Error::Parse {
            line: 0,
            msg: "missing footer".into(),
        })?;
        let p = Partition::from_blocks(g, blocks, k)?;
        if p.cut_edges != cut {
            return Err(Error::ContractViolation(format!(
                "footer says {cut} cut edges, graph has {}",
                p.cut_edges
            )));
        }
        Ok(p)
    }
}

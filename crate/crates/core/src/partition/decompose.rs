use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

use super::separator::{balance_limit, is_balanced_separator, SeparatorFinder};
use super::Partition;

#[derive(Debug, Clone)]
pub struct DecomposeReport {
    pub partition: Partition,
    /// Edges incident to separators, deleted during the recursion.
    pub removed_edges: usize,
    pub recursion_nodes: usize,
    pub leaves: usize,
    /// Leaves below `2 * tau / eps` vertices whose parent was split.
    pub leaves_below_floor: usize,
    pub separator_vertices: usize,
    /// Recursion stops below this many vertices.
    pub threshold: f64,
}

fn check_params(eps: f64, tau: usize) -> Result<()> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::Usage(format!("eps must lie in (0, 1], got {eps}")));
    }
    if tau == 0 {
        return Err(Error::Usage("tau must be at least 1".into()));
    }
    Ok(())
}

/// Recursive balanced-separator decomposition.
///
/// A piece with at least `6 tau / eps` vertices loses a (1/3, 2/3)
/// separator of its largest component (when that component is too big) and
/// its remaining components are split into two groups by largest-first
/// assignment. Smaller pieces are leaves whose components become blocks.
/// Separator vertices are then attached to the smallest adjacent block that
/// stays within `k = floor(6 tau / eps)`, or kept as singletons.
pub fn decompose(g: &Graph, eps: f64, tau: usize, finder: &dyn SeparatorFinder) -> Result<DecomposeReport> {
    check_params(eps, tau)?;
    let n = g.n();
    let threshold = 6.0 * tau as f64 / eps;
    let floor = 2.0 * tau as f64 / eps;
    let k = (threshold + 1e-9).floor() as usize;

    let mut block_of = vec![u32::MAX; n];
    let mut block_size: Vec<usize> = Vec::new();
    let mut separators: Vec<Vertex> = Vec::new();
    let mut report = DecomposeReport {
        partition: Partition::components(&Graph::empty(0, g.d())),
        removed_edges: 0,
        recursion_nodes: 0,
        leaves: 0,
        leaves_below_floor: 0,
        separator_vertices: 0,
        threshold,
    };
    let mut stack: Vec<(Vec<Vertex>, bool)> = vec![((0..n as Vertex).collect(), true)];
    while let Some((piece, is_root)) = stack.pop() {
        if piece.is_empty() {
            continue;
        }
        report.recursion_nodes += 1;
        let sub = g.induced_subgraph(&piece);
        let comps = sub.components();
        if (piece.len() as f64) < threshold {
            report.leaves += 1;
            if !is_root && (piece.len() as f64) < floor {
                report.leaves_below_floor += 1;
            }
            for comp in comps {
                let id = block_size.len() as u32;
                block_size.push(comp.len());
                for v in comp {
                    block_of[piece[v as usize] as usize] = id;
                }
            }
            continue;
        }

        let largest = comps.iter().max_by_key(|c| c.len()).expect("nonempty piece");
        let mut removed_local: Vec<Vertex> = Vec::new();
        if largest.len() > balance_limit(piece.len(), 2.0 / 3.0) {
            let comp_graph = sub.induced_subgraph(largest);
            let sep = finder.find(&comp_graph)?;
            if sep.len() > tau {
                return Err(Error::ContractViolation(format!(
                    "separator of size {} exceeds tau = {tau}",
                    sep.len()
                )));
            }
            if sep.iter().any(|&v| v as usize >= comp_graph.n())
                || !is_balanced_separator(&comp_graph, &sep, 2.0 / 3.0)
            {
                return Err(Error::ContractViolation(
                    "separator does not leave (2/3)-balanced components".into(),
                ));
            }
            removed_local = sep.iter().map(|&v| largest[v as usize]).collect();
        }

        let mut in_sep = vec![false; piece.len()];
        for &v in &removed_local {
            in_sep[v as usize] = true;
        }
        for &v in &removed_local {
            // count each deleted edge once, from its separator endpoint
            // with the smaller local id when both ends are separators
            report.removed_edges += sub
                .neighbors(v)
                .iter()
                .filter(|&&w| !in_sep[w as usize] || w > v)
                .count();
            separators.push(piece[v as usize]);
        }
        report.separator_vertices += removed_local.len();

        let keep: Vec<Vertex> = (0..piece.len() as Vertex).filter(|&v| !in_sep[v as usize]).collect();
        let rest = sub.induced_subgraph(&keep);
        let mut parts: Vec<Vec<Vertex>> = rest
            .components()
            .into_iter()
            .map(|c| c.into_iter().map(|v| piece[keep[v as usize] as usize]).collect())
            .collect();
        parts.sort_by_key(|c: &Vec<Vertex>| (std::cmp::Reverse(c.len()), c[0]));
        let mut groups: [Vec<Vertex>; 2] = [Vec::new(), Vec::new()];
        for part in parts {
            let target = if groups[0].len() <= groups[1].len() { 0 } else { 1 };
            groups[target].extend(part);
        }
        let limit = balance_limit(piece.len(), 2.0 / 3.0);
        if groups.iter().any(|grp| grp.len() > limit) {
            return Err(Error::ContractViolation("could not form (2/3)-balanced groups".into()));
        }
        let [g0, g1] = groups;
        stack.push((g1, false));
        stack.push((g0, false));
    }

    // deepest separators first: they sit inside the smallest pieces
    for &x in separators.iter().rev() {
        let mut best: Option<u32> = None;
        for &w in g.neighbors(x) {
            let b = block_of[w as usize];
            if b == u32::MAX || block_size[b as usize] + 1 > k {
                continue;
            }
            let better = match best {
                None => true,
                Some(cur) => (block_size[b as usize], b) < (block_size[cur as usize], cur),
            };
            if better {
                best = Some(b);
            }
        }
        let b = best.unwrap_or_else(|| {
            block_size.push(0);
            (block_size.len() - 1) as u32
        });
        block_size[b as usize] += 1;
        block_of[x as usize] = b;
    }

    let mut blocks: Vec<Vec<Vertex>> = vec![Vec::new(); block_size.len()];
    for v in 0..n {
        blocks[block_of[v] as usize].push(v as Vertex);
    }
    report.partition = Partition::from_blocks(g, blocks, k.max(1))?;
    Ok(report)
}

/// Two-stage partition for graphs of treewidth at most `tau`: connected
/// components first (no cut edges), then [`decompose`] with `eps / 2` on
/// every component above `30 tau / eps` vertices. Blocks stay within
/// `floor(30 tau / eps)`.
pub fn treewidth_partition(
    g: &Graph,
    eps: f64,
    tau: usize,
    finder: &dyn SeparatorFinder,
) -> Result<DecomposeReport> {
    check_params(eps, tau)?;
    let bound = 30.0 * tau as f64 / eps;
    let k = (bound + 1e-9).floor() as usize;
    let mut blocks: Vec<Vec<Vertex>> = Vec::new();
    let mut report = DecomposeReport {
        partition: Partition::components(&Graph::empty(0, g.d())),
        removed_edges: 0,
        recursion_nodes: 0,
        leaves: 0,
        leaves_below_floor: 0,
        separator_vertices: 0,
        threshold: 6.0 * tau as f64 / (eps / 2.0),
    };
    for comp in g.components() {
        if (comp.len() as f64) <= bound {
            blocks.push(comp);
            continue;
        }
        let sub = g.induced_subgraph(&comp);
        let inner = decompose(&sub, eps / 2.0, tau, finder)?;
        report.removed_edges += inner.removed_edges;
        report.recursion_nodes += inner.recursion_nodes;
        report.leaves += inner.leaves;
        report.leaves_below_floor += inner.leaves_below_floor;
        report.separator_vertices += inner.separator_vertices;
        for b in inner.partition.blocks() {
            blocks.push(b.iter().map(|&v| comp[v as usize]).collect());
        }
    }
    report.partition = Partition::from_blocks(g, blocks, k.max(1))?;
    Ok(report)
}

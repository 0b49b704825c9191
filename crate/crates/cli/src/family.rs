use std::collections::HashSet;
use std::path::PathBuf;

use clap::Args;
use planartest_core::family::archive::{read_family, write_family};
use planartest_core::family::{
    ball_packing_floor, build_base_graph, check_suitable, code_pool, default_radius, dedupe_unrooted,
    enumerate_rooted_trees, gadget_signature, small_vertex_cut, take_scoops, FamilySource, GridParams,
    PoolMode, ScoopsOptions, SuitabilityOptions, SuitableFamily,
};
use serde::Serialize;
use serde_json::json;

use crate::output::Artifact;
use crate::{check, usage, CliError, Common};

#[derive(Debug, Clone, Args, Serialize)]
pub struct BuildArgs {
    /// Grid side.
    #[arg(long)]
    pub s: usize,
    /// Carving radius; defaults to ceil(0.16 s^2).
    #[arg(long)]
    pub radius: Option<usize>,
    /// Grid and diagonals only (required below s = 12).
    #[arg(long)]
    pub gadgetless: bool,
    /// Certify that the base graph has no cut of at most two vertices and
    /// that its corners carry distinct gadget signatures.
    #[arg(long = "check-3conn")]
    pub check_3conn: bool,
    /// Pool size when 2^(cells) is too large to enumerate.
    #[arg(long, default_value_t = 256)]
    pub pool_sample: usize,
    #[arg(long)]
    pub max_members: Option<usize>,
    /// Keep codes whose graphs are isomorphic to an earlier member.
    #[arg(long)]
    pub keep_isomorphic: bool,
}

#[derive(Serialize)]
struct MemberRow {
    index: usize,
    code: String,
    nearest_hamming: Option<usize>,
    vertices: usize,
    edges: usize,
    form: String,
}

#[derive(Serialize)]
struct BuildSummary {
    members: usize,
    radius: usize,
    pool: PoolMode,
    skipped_isomorphic: usize,
    distinct_forms: usize,
    min_pairwise_hamming: Option<usize>,
    packing_floor: f64,
    three_connected: Option<bool>,
    corner_signatures: Option<Vec<Vec<usize>>>,
    failures: Vec<String>,
}

pub fn build(common: &Common, a: &BuildArgs) -> Result<(), CliError> {
    let p = if a.gadgetless {
        GridParams::gadgetless(a.s)?
    } else if a.s < planartest_core::family::GADGET_MIN_SIDE {
        return Err(usage(format!("s = {} needs --gadgetless (gadgets need s >= 12)", a.s)));
    } else {
        GridParams::new(a.s)?
    };
    if a.max_members == Some(0) {
        return Err(usage("--max-members must be at least 1"));
    }
    let radius = a.radius.unwrap_or_else(|| default_radius(a.s));
    let (pool, mode) = code_pool(p.cells(), a.pool_sample, common.seed);
    let options = ScoopsOptions {
        skip_isomorphic: !a.keep_isomorphic,
        max_members: a.max_members,
    };
    let f = take_scoops(&p, &pool, mode, radius, options)?;
    let FamilySource::Grid {
        codes,
        skipped_isomorphic,
        ..
    } = &f.source
    else {
        unreachable!("take_scoops records a grid source")
    };

    let mut failures = Vec::new();
    let distinct: HashSet<_> = f.forms.iter().collect();
    if distinct.len() != f.len() {
        failures.push(format!("{} distinct forms among {} members", distinct.len(), f.len()));
    }
    if let Some(h) = f.min_pairwise_hamming {
        if h <= radius {
            failures.push(format!("pairwise Hamming {h} <= radius {radius}"));
        }
    }
    let floor = ball_packing_floor(p.cells(), radius);
    if mode == PoolMode::Exhaustive && a.max_members.is_none() && (f.len() as f64) < floor {
        failures.push(format!("{} members below the packing floor {floor:.2}", f.len()));
    }
    let (mut three_connected, mut signatures) = (None, None);
    if a.check_3conn {
        if !p.gadgets {
            return Err(usage("--check-3conn needs corner gadgets (s >= 12, no --gadgetless)"));
        }
        let base = build_base_graph(&p)?;
        let cut = small_vertex_cut(&base);
        if let Some(c) = &cut {
            failures.push(format!("base graph has vertex cut {c:?}"));
        }
        three_connected = Some(cut.is_none());
        let sigs: Vec<Vec<usize>> = p.corner_gadgets().iter().map(|c| gadget_signature(&base, c.corner)).collect();
        if sigs.iter().collect::<HashSet<_>>().len() != sigs.len() {
            failures.push(format!("corner signatures collide: {sigs:?}"));
        }
        signatures = Some(sigs);
    }

    let rows: Vec<MemberRow> = f
        .members
        .iter()
        .enumerate()
        .map(|(i, g)| MemberRow {
            index: i,
            code: codes[i].to_bitstring(),
            nearest_hamming: codes
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, c)| c.hamming(&codes[i]))
                .min(),
            vertices: g.n(),
            edges: g.edge_count(),
            form: f.forms[i].to_hex(),
        })
        .collect();
    let summary = BuildSummary {
        members: f.len(),
        radius,
        pool: mode,
        skipped_isomorphic: *skipped_isomorphic,
        distinct_forms: distinct.len(),
        min_pairwise_hamming: f.min_pairwise_hamming,
        packing_floor: floor,
        three_connected,
        corner_signatures: signatures,
        failures: failures.clone(),
    };
    write_family(&common.out, &f, None, json!({ "seed": common.seed, "build": &summary }))?;
    Artifact {
        out: &common.out,
        name: "family_build",
        command: "family-build",
        seed: common.seed,
    }
    .write(&rows, a, &summary)?;
    println!(
        "family: {} members (s = {}, radius {radius}, {} skipped as isomorphic)",
        f.len(),
        a.s,
        skipped_isomorphic
    );
    check(true, &failures)
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TreeArgs {
    /// Tree size (at most 16).
    #[arg(long)]
    pub s: usize,
}

#[derive(Serialize)]
struct TreeRow {
    index: usize,
    code: String,
    orbit_size: usize,
    vertices: usize,
    edges: usize,
    form: String,
}

#[derive(Serialize)]
struct TreeSummary {
    rooted: usize,
    unrooted: usize,
    max_orbit: usize,
    failures: Vec<String>,
}

pub fn trees(common: &Common, a: &TreeArgs) -> Result<(), CliError> {
    if a.s == 0 {
        return Err(usage("--s must be at least 1"));
    }
    let rooted = enumerate_rooted_trees(a.s)?;
    let u = dedupe_unrooted(&rooted)?;
    let mut failures = Vec::new();
    if u.family.len() * a.s < u.rooted_count {
        failures.push(format!("{} classes * {} < {} rooted trees", u.family.len(), a.s, u.rooted_count));
    }
    if u.max_orbit() > a.s {
        failures.push(format!("orbit of size {} exceeds s = {}", u.max_orbit(), a.s));
    }
    if u.orbit_sizes.iter().sum::<usize>() != u.rooted_count {
        failures.push("orbit sizes do not sum to the rooted count".into());
    }
    let rows: Vec<TreeRow> = (0..u.family.len())
        .map(|i| TreeRow {
            index: i,
            code: u.codes[i].as_str().to_string(),
            orbit_size: u.orbit_sizes[i],
            vertices: u.family.members[i].n(),
            edges: u.family.members[i].edge_count(),
            form: u.family.forms[i].to_hex(),
        })
        .collect();
    let summary = TreeSummary {
        rooted: u.rooted_count,
        unrooted: u.family.len(),
        max_orbit: u.max_orbit(),
        failures: failures.clone(),
    };
    write_family(&common.out, &u.family, None, json!({ "seed": common.seed, "orbits": &summary }))?;
    Artifact {
        out: &common.out,
        name: "tree_family",
        command: "tree-family",
        seed: common.seed,
    }
    .write(&rows, a, &summary)?;
    println!(
        "trees: {} rooted, {} unrooted, largest orbit {} (s = {})",
        u.rooted_count,
        u.family.len(),
        u.max_orbit(),
        a.s
    );
    check(true, &failures)
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    /// Family archive directory.
    #[arg(long)]
    #[serde(skip)]
    pub family: PathBuf,
    #[arg(long, default_value_t = 0.25)]
    pub eps: f64,
    /// Degree bound for normalization; defaults to the family's.
    #[arg(long)]
    pub d: Option<usize>,
    /// Separators must reach this multiple of eps * t.
    #[arg(long, default_value_t = 1.0)]
    pub separator_constant: f64,
    #[arg(long)]
    pub skip_distances: bool,
    #[arg(long)]
    pub skip_separators: bool,
    /// Exit 1 when the family is not certified.
    #[arg(long)]
    pub assert: bool,
}

#[derive(Serialize)]
struct SeparatorRow {
    index: usize,
    third: usize,
    fine: usize,
    exact: bool,
}

pub fn load_family(dir: &std::path::Path) -> Result<SuitableFamily, CliError> {
    if !dir.join(planartest_core::family::archive::MANIFEST_FILE).exists() {
        return Err(usage(format!("no family archive at {}", dir.display())));
    }
    Ok(read_family(dir)?.0)
}

pub fn verify(common: &Common, a: &VerifyArgs) -> Result<(), CliError> {
    if !(a.eps > 0.0 && a.eps < 1.0) {
        return Err(usage(format!("--eps must lie in (0, 1), got {}", a.eps)));
    }
    let f = load_family(&a.family)?;
    let d = a.d.unwrap_or(f.d);
    let report = check_suitable(
        &f,
        a.eps,
        d,
        SuitabilityOptions {
            separator_constant: a.separator_constant,
            check_distances: !a.skip_distances,
            check_separators: !a.skip_separators,
            ..SuitabilityOptions::default()
        },
    );
    let rows: Vec<SeparatorRow> = report
        .per_member
        .iter()
        .enumerate()
        .map(|(i, m)| SeparatorRow {
            index: i,
            third: m.third,
            fine: m.fine,
            exact: m.exact,
        })
        .collect();
    Artifact {
        out: &common.out,
        name: "suitability",
        command: "verify-suitable",
        seed: common.seed,
    }
    .write(&rows, a, &report)?;
    println!(
        "suitable: {} (distance {:?} ok={}, separator {:?} vs {:.2} ok={})",
        report.passed,
        report.min_pairwise_normalized,
        report.distance_ok,
        report.min_separator_third,
        report.separator_threshold,
        report.separator_ok
    );
    let mut failures = Vec::new();
    if !report.distance_ok {
        failures.push(format!("pairwise distance {:?} below 0.02", report.min_pairwise_normalized));
    }
    if !report.separator_ok {
        failures.push(format!(
            "separator {:?} below {:.2}",
            report.min_separator_third, report.separator_threshold
        ));
    }
    check(a.assert, &failures)
}

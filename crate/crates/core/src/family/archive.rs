//! On-disk families: `manifest.json` plus one graph file per member.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::canon::CanonicalForm;
use crate::error::{Error, Result};
use crate::graph::Graph;

use super::instance::{HardInstanceMeta, HardInstancePair};
use super::scoops::{FamilySource, SuitabilityReport, SuitableFamily};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyManifest {
    pub version: String,
    pub t: usize,
    pub d: usize,
    pub source: FamilySource,
    pub forms: Vec<CanonicalForm>,
    pub member_files: Vec<String>,
    pub min_pairwise_hamming: Option<usize>,
    pub min_pairwise_edits: Option<u64>,
    pub min_separator: Option<usize>,
    pub epsilon: Option<f64>,
    pub certification: Option<SuitabilityReport>,
    /// Free-form run details, e.g. the command line seed.
    #[serde(default)]
    pub extra: serde_json::Value,
}

fn member_file(i: usize) -> String {
    format!("member_{i:05}.graph")
}

pub fn write_family(
    dir: &Path,
    f: &SuitableFamily,
    certification: Option<&SuitabilityReport>,
    extra: serde_json::Value,
) -> Result<FamilyManifest> {
    fs::create_dir_all(dir)?;
    let member_files: Vec<String> = (0..f.len()).map(member_file).collect();
    for (g, name) in f.members.iter().zip(&member_files) {
        fs::write(dir.join(name), g.to_text())?;
    }
    let manifest = FamilyManifest {
        version: env!("CARGO_PKG_VERSION").to_string(),
        t: f.t,
        d: f.d,
        source: f.source.clone(),
        forms: f.forms.clone(),
        member_files,
        min_pairwise_hamming: f.min_pairwise_hamming,
        min_pairwise_edits: f.min_pairwise_edits,
        min_separator: f.min_separator,
        epsilon: f.epsilon,
        certification: certification.cloned(),
        extra,
    };
    fs::write(dir.join(MANIFEST_FILE), serde_json::to_string_pretty(&manifest)? + "\n")?;
    Ok(manifest)
}

/// Loads a family and checks every member against its recorded form.
pub fn read_family(dir: &Path) -> Result<(SuitableFamily, FamilyManifest)> {
    let manifest: FamilyManifest = serde_json::from_str(&fs::read_to_string(dir.join(MANIFEST_FILE))?)?;
    let members = manifest
        .member_files
        .iter()
        .map(|name| Graph::from_text(&fs::read_to_string(dir.join(name))?))
        .collect::<Result<Vec<_>>>()?;
    let mut f = SuitableFamily::from_members(members, manifest.source.clone())?;
    if f.forms != manifest.forms {
        return Err(Error::InvalidGraph("member files do not match recorded forms".into()));
    }
    f.min_pairwise_hamming = manifest.min_pairwise_hamming;
    f.min_pairwise_edits = manifest.min_pairwise_edits;
    f.min_separator = manifest.min_separator;
    f.epsilon = manifest.epsilon;
    Ok((f, manifest))
}

/// `yes.graph`, `no.graph` and `pair.json` holding the half set and seeds.
pub fn write_pair(dir: &Path, pair: &HardInstancePair) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("yes.graph"), pair.yes_graph.to_text())?;
    fs::write(dir.join("no.graph"), pair.no_graph.to_text())?;
    fs::write(dir.join("pair.json"), serde_json::to_string_pretty(&pair.meta)? + "\n")?;
    Ok(())
}

pub fn read_pair(dir: &Path) -> Result<HardInstancePair> {
    let meta: HardInstanceMeta = serde_json::from_str(&fs::read_to_string(dir.join("pair.json"))?)?;
    Ok(HardInstancePair {
        yes_graph: Graph::from_text(&fs::read_to_string(dir.join("yes.graph"))?)?,
        no_graph: Graph::from_text(&fs::read_to_string(dir.join("no.graph"))?)?,
        meta,
    })
}

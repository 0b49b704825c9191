//! Property testing on bounded-degree graphs at desk scale.

pub mod canon;
pub mod edit;
pub mod error;
pub mod family;
pub mod flow;
pub mod generators;
pub mod graph;
pub mod oracle;
pub mod partition;
pub mod seeds;
pub mod tester;

pub use canon::{canonical_form, isomorphic, CanonicalForm};
pub use edit::{edit_distance, DistanceMode, EditDistanceResult};
pub use error::{Error, Result};
pub use graph::{disjoint_union, random_relabel, Graph, Vertex};
pub use oracle::{explore_component, neighbor_query, ComponentView, LabeledUnion, NeighborOracle, QueryLedger};

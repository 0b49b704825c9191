//! Hard-instance families: diagonal grids, greedy far-apart subfamilies,
//! bounded-degree trees, and the YES/NO instance distributions.

pub mod archive;
pub mod grid;
pub mod instance;
pub mod scoops;
pub mod trees;

pub use grid::{
    build_base_graph, build_diagonal_graph, cell_diagonal, gadget_signature, small_vertex_cut, CornerGadget, DiagonalCode,
    GridParams, DIAGONAL_DEGREE, GADGET_MIN_SIDE,
};
pub use instance::{
    build_no_instance, build_yes_instance, build_yes_instance_padded, choose_half_set, hard_instance_meta,
    no_layout, yes_layout, HardInstanceMeta, HardInstancePair,
};
pub use scoops::{
    ball_packing_floor, check_suitable, code_pool, default_radius, min_pairwise_hamming, take_scoops,
    FamilySource, MemberSeparators, PoolMode, ScoopsOptions, SuitabilityOptions, SuitabilityReport,
    SuitableFamily, MIN_PAIRWISE_DISTANCE, POOL_EXHAUSTIVE_BITS,
};
pub use trees::{dedupe_unrooted, enumerate_rooted_trees, unrooted_code, RootedCode, UnrootedTrees};

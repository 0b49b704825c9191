//! Fixtures shared by the benchmarks.

use planartest_core::family::{code_pool, default_radius, take_scoops, GridParams, ScoopsOptions, SuitableFamily};

/// Default-radius gadgetless family at side `s`, truncated to even size.
/// Sides above 5 draw a seeded pool of 512 codes.
pub fn grid_family(s: usize) -> SuitableFamily {
    let p = GridParams::gadgetless(s).expect("s >= 2");
    let (pool, mode) = code_pool(p.cells(), 512, 0);
    let f = take_scoops(&p, &pool, mode, default_radius(s), ScoopsOptions::default()).expect("nonempty pool");
    let len = f.len() / 2 * 2;
    f.truncated(len)
}

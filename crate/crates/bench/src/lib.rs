//! Fixtures shared by the benchmarks.

use forklat_core::corpus::grid;
use forklat_core::{insert_fork, random_sps, CorpusSpec, FiniteLattice, ForkExtension};

/// The fork of `grid(p, q)` at its top square.
pub fn top_fork(p: usize, q: usize) -> ForkExtension {
    let g = grid(p, q);
    let top = *g
        .covering_squares()
        .iter()
        .max_by_key(|s| g.height(s.i))
        .expect("grid has a square");
    insert_fork(&g, top).expect("grids are SPS")
}

/// The last lattice of a seeded three-step run from `grid(p, q)`.
pub fn seeded(p: usize, q: usize, seed: u64) -> FiniteLattice {
    let run = random_sps(&CorpusSpec::new(p, q, 3, seed)).expect("corpus run");
    run.extensions
        .last()
        .map_or(run.grid, |e| e.extended.clone())
}

//! Fixed-seed instances shared by the benchmarks.

use rainbow_core::hamilton::{random_matching_union, ColoredMultigraph};
use rainbow_core::model::{complete_colored, sample_hp_m, DEFAULT_EDGE_LIMIT};
use rainbow_core::{ColoredHypergraph, RandomnessSpec};

/// `HP_{n,m,k}` with `kappa = n`.
pub fn partite(n: usize, k: usize, m: u64, seed: u64) -> ColoredHypergraph {
    let mut rng = RandomnessSpec::new(seed, 0).rng();
    sample_hp_m(n, k, n, m, &mut rng, DEFAULT_EDGE_LIMIT).expect("valid parameters")
}

/// Complete k-partite instance with `kappa = n`.
pub fn complete(n: usize, k: usize, seed: u64) -> ColoredHypergraph {
    let mut rng = RandomnessSpec::new(seed, 0).rng();
    complete_colored(n, k, n, &mut rng, DEFAULT_EDGE_LIMIT).expect("valid parameters")
}

/// Union of `r` random perfect matchings on `n` vertices, `n` colors.
pub fn matching_union(n: usize, r: usize, seed: u64) -> ColoredMultigraph {
    random_matching_union(n, r, &mut RandomnessSpec::new(seed, 0).rng()).expect("valid parameters")
}

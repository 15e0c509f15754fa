//! Shared inputs for the criterion benches.

use kmethod_core::graph::{parse_matrix, ConceptNet};
use kmethod_core::random::random_sparse_net;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn san_diego() -> ConceptNet {
    parse_matrix(include_str!("../../core/fixtures/san_diego.csv")).expect("fixture parses")
}

/// Deterministic sparse net with mean out-degree 2 and weights in [-2, 2].
pub fn sparse(n: usize, seed: u64) -> ConceptNet {
    random_sparse_net(&mut ChaCha8Rng::seed_from_u64(seed), n, 2.0, 2.0)
}

//! Random network generators for tests, benchmarks and demonstrations.

use rand::Rng;

use crate::graph::ConceptNet;

/// Erdős–Rényi style digraph: each ordered pair `i ≠ j` gets an edge with
/// probability `edge_prob`, weight uniform in `[-weight_bound, weight_bound]`.
/// Zero draws are kept as explicit edges.
pub fn random_net<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    edge_prob: f64,
    weight_bound: f64,
) -> ConceptNet {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.gen_bool(edge_prob) {
                edges.push((i, j, rng.gen_range(-weight_bound..=weight_bound)));
            }
        }
    }
    ConceptNet::new(ConceptNet::numbered_labels(n), edges).expect("generated net is valid")
}

/// Sparse digraph with the given mean out-degree.
pub fn random_sparse_net<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    mean_out_degree: f64,
    weight_bound: f64,
) -> ConceptNet {
    let p = if n > 1 {
        (mean_out_degree / (n - 1) as f64).clamp(0.0, 1.0)
    } else {
        0.0
    };
    random_net(rng, n, p, weight_bound)
}

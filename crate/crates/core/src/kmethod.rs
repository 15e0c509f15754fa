//! Pairwise influence `K_αβ` and the full K-matrix.
//!
//! For an ordered pair the simple paths `α → β` are treated as parallel
//! chains of unit resistors, each edge carrying its weight as an EMF. With
//! `ε_m` the EMF sum and `N_m` the edge count of path `m`, the potential
//! difference across the terminals is
//!
//! ```text
//! K_αβ = Σ_m (ε_m / N_m) / Σ_m (1 / N_m)
//! ```
//!
//! and `K_αβ = 0` when there is no path. [`crate::circuit`] solves the same
//! circuit by nodal analysis and serves as an independent check.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::graph::ConceptNet;
use crate::numerics::DenseMatrix;
use crate::paths::{accumulate_pair_indexed, PairAccumulator, PathError, SearchLimits};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KError {
    #[error("pair {source_label} -> {target_label}: {error}")]
    Pair {
        source_label: String,
        target_label: String,
        #[source]
        error: PathError,
    },
    #[error("failed to start worker pool: {0}")]
    ThreadPool(String),
}

impl KError {
    pub fn path_error(&self) -> Option<&PathError> {
        match self {
            KError::Pair { error, .. } => Some(error),
            KError::ThreadPool(_) => None,
        }
    }
}

/// Closed-form influence for one pair.
pub fn k_pair(acc: &PairAccumulator) -> f64 {
    if acc.path_count == 0 {
        return 0.0;
    }
    acc.sum_emf_over_len / acc.sum_inv_len
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KMatrix {
    pub labels: Vec<String>,
    pub values: DenseMatrix,
    /// Set when a length cap cut off at least one pair's paths.
    pub truncated: bool,
}

impl KMatrix {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn get(&self, source: usize, target: usize) -> f64 {
        self.values[(source, target)]
    }

    pub fn transpose(&self) -> Self {
        Self {
            labels: self.labels.clone(),
            values: self.values.transpose(),
            truncated: self.truncated,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct KOptions {
    pub limits: SearchLimits,
    /// Worker threads; `None` uses the global rayon pool.
    pub jobs: Option<usize>,
}

/// Computes `K_ij` for every ordered pair `i ≠ j`.
///
/// Pairs are independent and may run in parallel; results are gathered in
/// row-major order, so the output does not depend on scheduling. On failure
/// the first failing pair in row-major order is reported.
pub fn k_matrix(net: &ConceptNet, opts: &KOptions) -> Result<KMatrix, KError> {
    let n = net.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();

    let compute = || -> Vec<Result<PairAccumulator, PathError>> {
        pairs
            .par_iter()
            .map(|&(i, j)| accumulate_pair_indexed(net, i, j, &opts.limits))
            .collect()
    };
    let results = match opts.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| KError::ThreadPool(e.to_string()))?
            .install(compute),
        None => compute(),
    };

    let mut values = DenseMatrix::zeros(n, n);
    let mut truncated = false;
    for (&(i, j), result) in pairs.iter().zip(results) {
        let acc = result.map_err(|error| KError::Pair {
            source_label: net.label(i).to_owned(),
            target_label: net.label(j).to_owned(),
            error,
        })?;
        truncated |= acc.truncated;
        values[(i, j)] = k_pair(&acc);
    }
    Ok(KMatrix {
        labels: net.labels().to_vec(),
        values,
        truncated,
    })
}

//! Pairwise mutual influence of nodes in directed weighted networks.
//!
//! The K-method treats every simple path `α → β` as a chain of unit
//! resistors carrying the edge weights as EMFs, connects all chains in
//! parallel between the two terminals, and reads the influence `K_αβ` off the
//! terminal potential difference. The impulse method (pulse propagation
//! through `Σ W^k`) is provided as a baseline.
//!
//! ```
//! use kmethod_core::{graph::parse_matrix, kmethod::{k_matrix, KOptions}};
//!
//! let net = parse_matrix("node,a,b,c\na,0,1,0\nb,0,0,1\nc,0,0,0\n").unwrap();
//! let k = k_matrix(&net, &KOptions::default()).unwrap();
//! assert_eq!(k.get(0, 2), 2.0);
//! ```

pub mod circuit;
pub mod format;
pub mod graph;
pub mod impulse;
pub mod kmethod;
pub mod numerics;
pub mod paths;
pub mod random;
pub mod ranking;

pub use circuit::{build_circuit, export_circuit_dot, solve_circuit_nodal, CircuitGraph, CircuitSolution};
pub use graph::{parse_edge_list, parse_matrix, ConceptNet, GraphError, NetValidationReport};
pub use impulse::{impulse_closed_form, impulse_series, ImpulseResult, ImpulseTrajectory};
pub use kmethod::{k_matrix, k_pair, KError, KMatrix, KOptions};
pub use numerics::{DenseMatrix, SpectralEstimate};
pub use paths::{accumulate_pair, count_paths, enumerate_simple_paths, PairAccumulator, PathError, PathRecord, SearchLimits};
pub use ranking::{MeasureKind, MeasureVector, RankVector};

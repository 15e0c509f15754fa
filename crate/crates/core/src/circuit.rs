//! Explicit parallel-chain circuits and their nodal-analysis solution.
//!
//! Each simple `α → β` path becomes its own chain of unit resistors between
//! the two terminals. Intermediate nodes are never shared between chains,
//! even when the underlying concept is the same. Edge directions are dropped;
//! each branch remembers the orientation of its EMF.

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::format::format_number;
use crate::graph::ConceptNet;
use crate::numerics::{solve_linear, DenseMatrix, NumericsError};
use crate::paths::{PathError, SearchLimits, SimplePaths};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CircuitError {
    #[error(transparent)]
    Path(#[from] PathError),
    #[error("circuit has no chains")]
    Empty,
    #[error("nodal system could not be solved: {0}")]
    Numerics(#[from] NumericsError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Branch {
    /// EMF raising the potential from the chain-earlier end to the later end.
    pub emf: f64,
    pub resistance: f64,
    /// Original directed edge, by node index.
    pub edge: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Chain {
    pub branches: Vec<Branch>,
}

impl Chain {
    pub fn len(&self) -> usize {
        self.branches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircuitGraph {
    pub alpha: usize,
    pub beta: usize,
    pub alpha_label: String,
    pub beta_label: String,
    /// Concept labels of the original network, for branch annotations.
    pub labels: Vec<String>,
    pub chains: Vec<Chain>,
    pub truncated: bool,
}

/// Circuit node identifier: `0` is α, `1` is β, internal nodes follow
/// chain by chain.
pub type CircuitNode = usize;

impl CircuitGraph {
    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    pub fn node_count(&self) -> usize {
        2 + self.chains.iter().map(|c| c.len() - 1).sum::<usize>()
    }

    /// Endpoints of every branch as `(tail, head)` circuit nodes, chain by chain.
    pub fn branch_endpoints(&self) -> Vec<Vec<(CircuitNode, CircuitNode)>> {
        let mut next_internal = 2;
        self.chains
            .iter()
            .map(|chain| {
                let n = chain.len();
                let mut ids = Vec::with_capacity(n + 1);
                ids.push(0);
                for _ in 1..n {
                    ids.push(next_internal);
                    next_internal += 1;
                }
                ids.push(1);
                ids.windows(2).map(|w| (w[0], w[1])).collect()
            })
            .collect()
    }

    /// DOT name of a circuit node: terminal label, or `p<m>_<k>` (1-based).
    pub fn node_names(&self) -> Vec<String> {
        let mut names = vec![self.alpha_label.clone(), self.beta_label.clone()];
        for (m, chain) in self.chains.iter().enumerate() {
            for k in 1..chain.len() {
                names.push(format!("p{}_{}", m + 1, k));
            }
        }
        names
    }
}

pub fn build_circuit(
    net: &ConceptNet,
    source: usize,
    target: usize,
    limits: &SearchLimits,
) -> Result<CircuitGraph, CircuitError> {
    let mut stream = SimplePaths::new(net, source, target, limits)?;
    let mut chains = Vec::new();
    for path in stream.by_ref() {
        let path = path?;
        let branches = path
            .nodes
            .windows(2)
            .zip(&path.edge_emfs)
            .map(|(w, &emf)| Branch {
                emf,
                resistance: 1.0,
                edge: (w[0], w[1]),
            })
            .collect();
        chains.push(Chain { branches });
    }
    Ok(CircuitGraph {
        alpha: source,
        beta: target,
        alpha_label: net.label(source).to_owned(),
        beta_label: net.label(target).to_owned(),
        labels: net.labels().to_vec(),
        chains,
        truncated: stream.truncated(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircuitSolution {
    /// Potential per circuit node; `potentials[0]` (α) is 0.
    pub potentials: Vec<f64>,
    /// Current through each branch, flowing from the chain-earlier end.
    pub currents: Vec<Vec<f64>>,
    pub k: f64,
}

/// Solves the circuit by nodal analysis with `φ_α = 0`.
///
/// A branch with EMF `ε` from `tail` to `head` carries
/// `I = (φ_tail − φ_head + ε) / R`; current conservation at every node but α
/// gives a linear system in the remaining potentials.
pub fn solve_circuit_nodal(circuit: &CircuitGraph) -> Result<CircuitSolution, CircuitError> {
    if circuit.is_empty() {
        return Err(CircuitError::Empty);
    }
    let endpoints = circuit.branch_endpoints();
    let nodes = circuit.node_count();
    // unknown u ↔ circuit node u + 1
    let unknowns = nodes - 1;
    let mut g = DenseMatrix::zeros(unknowns, unknowns);
    let mut rhs = vec![0.0; unknowns];

    for (chain, ends) in circuit.chains.iter().zip(&endpoints) {
        for (branch, &(tail, head)) in chain.branches.iter().zip(ends) {
            let c = 1.0 / branch.resistance;
            // KCL at x: Σ_branches c·(φ_x − φ_other) = Σ_in c·ε − Σ_out c·ε
            for (x, other, sign) in [(tail, head, -1.0), (head, tail, 1.0)] {
                if x == 0 {
                    continue;
                }
                let row = x - 1;
                g[(row, row)] += c;
                if other != 0 {
                    g[(row, other - 1)] -= c;
                }
                rhs[row] += sign * c * branch.emf;
            }
        }
    }

    let solved = solve_linear(&g, &rhs)?;
    let mut potentials = Vec::with_capacity(nodes);
    potentials.push(0.0);
    potentials.extend(solved);

    let currents = circuit
        .chains
        .iter()
        .zip(&endpoints)
        .map(|(chain, ends)| {
            chain
                .branches
                .iter()
                .zip(ends)
                .map(|(b, &(t, h))| (potentials[t] - potentials[h] + b.emf) / b.resistance)
                .collect()
        })
        .collect();

    Ok(CircuitSolution {
        k: potentials[1],
        potentials,
        currents,
    })
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Undirected DOT rendering; edges are labelled with their EMF and the
/// originating directed edge.
pub fn export_circuit_dot(circuit: &CircuitGraph) -> String {
    let names: Vec<String> = circuit.node_names().iter().map(|n| quote(n)).collect();
    let mut out = String::new();
    writeln!(out, "graph circuit {{").unwrap();
    writeln!(out, "  // chains: {}", circuit.chains.len()).unwrap();
    if circuit.truncated {
        writeln!(out, "  // truncated: true").unwrap();
    }
    writeln!(out, "  {} [shape=doublecircle];", names[0]).unwrap();
    writeln!(out, "  {} [shape=doublecircle];", names[1]).unwrap();
    for name in &names[2..] {
        writeln!(out, "  {name} [shape=point];").unwrap();
    }
    for (chain, ends) in circuit.chains.iter().zip(circuit.branch_endpoints()) {
        for (b, (t, h)) in chain.branches.iter().zip(ends) {
            let (s, d) = b.edge;
            let label = format!(
                "{} ({} -> {})",
                format_number(b.emf),
                circuit.labels[s],
                circuit.labels[d]
            );
            writeln!(out, "  {} -- {} [label={}];", names[t], names[h], quote(&label)).unwrap();
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_matrix;
    use crate::kmethod::k_pair;
    use crate::paths::accumulate_pair_indexed;

    fn four_node() -> ConceptNet {
        parse_matrix(include_str!("../fixtures/four_node.csv")).unwrap()
    }

    fn chain(emfs: &[f64]) -> Chain {
        Chain {
            branches: emfs
                .iter()
                .map(|&emf| Branch {
                    emf,
                    resistance: 1.0,
                    edge: (0, 1),
                })
                .collect(),
        }
    }

    fn handmade(chains: Vec<Chain>) -> CircuitGraph {
        CircuitGraph {
            alpha: 0,
            beta: 1,
            alpha_label: "a".into(),
            beta_label: "b".into(),
            labels: vec!["a".into(), "b".into()],
            chains,
            truncated: false,
        }
    }

    #[test]
    fn four_node_alpha_beta_topology() {
        let c = build_circuit(&four_node(), 0, 3, &SearchLimits::default()).unwrap();
        let mut lens: Vec<_> = c.chains.iter().map(Chain::len).collect();
        lens.sort_unstable();
        assert_eq!(lens, [2, 2, 3, 3]);
        assert_eq!(c.node_count(), 2 + 6);
    }

    #[test]
    fn four_node_one_beta_topology() {
        let c = build_circuit(&four_node(), 1, 3, &SearchLimits::default()).unwrap();
        let mut lens: Vec<_> = c.chains.iter().map(Chain::len).collect();
        lens.sort_unstable();
        assert_eq!(lens, [1, 2]);
    }

    #[test]
    fn unreachable_pair_is_empty() {
        let net = parse_matrix(include_str!("../fixtures/san_diego.csv")).unwrap();
        let c = build_circuit(&net, 3, 0, &SearchLimits::default()).unwrap();
        assert!(c.is_empty());
        assert_eq!(solve_circuit_nodal(&c), Err(CircuitError::Empty));
    }

    #[test]
    fn nodal_matches_closed_form_four_node() {
        let net = four_node();
        let c = build_circuit(&net, 0, 3, &SearchLimits::default()).unwrap();
        let sol = solve_circuit_nodal(&c).unwrap();
        assert!((sol.k - 2.4).abs() < 1e-9);
        let acc = accumulate_pair_indexed(&net, 0, 3, &SearchLimits::default()).unwrap();
        assert!((sol.k - k_pair(&acc)).abs() < 1e-9);
    }

    #[test]
    fn series_chain_carries_no_current() {
        let sol = solve_circuit_nodal(&handmade(vec![chain(&[1.0, 1.0, 1.0])])).unwrap();
        assert!((sol.k - 3.0).abs() < 1e-12);
        assert!((sol.potentials[2] - 1.0).abs() < 1e-12);
        assert!((sol.potentials[3] - 2.0).abs() < 1e-12);
        assert!(sol.currents[0].iter().all(|i| i.abs() < 1e-12));
    }

    #[test]
    fn two_parallel_single_branches() {
        let sol = solve_circuit_nodal(&handmade(vec![chain(&[1.0]), chain(&[0.0])])).unwrap();
        assert!((sol.k - 0.5).abs() < 1e-12);
        // loop current 0.5 flows α→β in the first branch and back in the second
        assert!((sol.currents[0][0] - 0.5).abs() < 1e-12);
        assert!((sol.currents[1][0] + 0.5).abs() < 1e-12);
    }

    #[test]
    fn kirchhoff_laws_hold() {
        let net = four_node();
        let c = build_circuit(&net, 0, 3, &SearchLimits::default()).unwrap();
        let sol = solve_circuit_nodal(&c).unwrap();
        let mut net_current = vec![0.0; c.node_count()];
        for (ends, currents) in c.branch_endpoints().iter().zip(&sol.currents) {
            for (&(t, h), &i) in ends.iter().zip(currents) {
                net_current[t] -= i;
                net_current[h] += i;
            }
        }
        for (node, &i) in net_current.iter().enumerate().skip(2) {
            assert!(i.abs() < 1e-9, "KCL violated at {node}: {i}");
        }
        // whatever leaves α arrives at β
        assert!((net_current[0] + net_current[1]).abs() < 1e-9);
        for ((chain, ends), currents) in c.chains.iter().zip(c.branch_endpoints()).zip(&sol.currents) {
            for ((b, (t, h)), i) in chain.branches.iter().zip(ends).zip(currents) {
                let drop = sol.potentials[h] - sol.potentials[t];
                assert!((drop - (b.emf - i * b.resistance)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn dot_export() {
        let empty = handmade(vec![]);
        let dot = export_circuit_dot(&empty);
        assert!(dot.starts_with("graph circuit {"));
        assert!(dot.contains("\"a\" [shape=doublecircle];"));
        assert!(dot.contains("\"b\" [shape=doublecircle];"));
        assert!(!dot.contains("--"));

        let c = build_circuit(&four_node(), 0, 3, &SearchLimits::default()).unwrap();
        let dot = export_circuit_dot(&c);
        let declared = dot.lines().filter(|l| l.contains("[shape=")).count();
        assert_eq!(declared, c.node_count());
        assert_eq!(dot.matches("[shape=point]").count(), 6);
        assert_eq!(dot.matches(" -- ").count(), 10);
        assert!(dot.contains("\"p1_1\""));
        assert!(dot.contains("\"p4_1\""));
        assert_eq!(dot, export_circuit_dot(&c));
    }
}

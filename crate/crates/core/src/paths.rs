//! Simple directed path enumeration between an ordered node pair.
//!
//! Two entry points share one search discipline (depth-first, neighbours in
//! label order, never extending past the target):
//!
//! * [`SimplePaths`] yields every path as a [`PathRecord`];
//! * [`accumulate_pair`] folds the same paths into a [`PairAccumulator`]
//!   while carrying only the running EMF and depth, so no path is stored.
//!
//! Both skip neighbours from which the target is unreachable. This changes
//! neither the path set nor its order; it only saves work.

use std::collections::VecDeque;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::graph::ConceptNet;

/// Default limit on visited search-tree nodes per pair.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("source and target are the same node ({0})")]
    SameNode(String),
    #[error("unknown node {0}")]
    UnknownNode(String),
    #[error("work budget of {budget} visited states exhausted")]
    BudgetExhausted { budget: u64 },
    #[error("search cancelled")]
    Cancelled,
    #[error("max_len must be positive")]
    ZeroLength,
}

/// Limits applied to a single pair search.
#[derive(Debug, Clone, Default)]
pub struct SearchLimits {
    /// Longest path (in edges) to consider. `None` means `n - 1`.
    pub max_len: Option<usize>,
    /// Maximum number of visited search-tree nodes. `None` means unlimited.
    pub budget: Option<u64>,
    /// Checked cooperatively during the search.
    pub cancel: Option<Arc<AtomicBool>>,
}

impl SearchLimits {
    pub fn with_max_len(max_len: usize) -> Self {
        Self {
            max_len: Some(max_len),
            ..Self::default()
        }
    }

    fn effective_cap(&self, n: usize) -> Result<usize, PathError> {
        match self.max_len {
            Some(0) => Err(PathError::ZeroLength),
            Some(m) => Ok(m.min(n.saturating_sub(1))),
            None => Ok(n.saturating_sub(1)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathRecord {
    pub nodes: Vec<usize>,
    pub edge_emfs: Vec<f64>,
    /// Sum of `edge_emfs`, accumulated left to right.
    pub emf: f64,
}

impl PathRecord {
    /// Number of edges.
    pub fn len(&self) -> usize {
        self.edge_emfs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edge_emfs.is_empty()
    }
}

/// Running sums for one ordered pair: `Σ ε_m/N_m`, `Σ 1/N_m` and the path count.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct PairAccumulator {
    pub sum_emf_over_len: f64,
    pub sum_inv_len: f64,
    pub path_count: u64,
    pub truncated: bool,
}

impl PairAccumulator {
    pub fn push(&mut self, emf: f64, len: usize) {
        let len = len as f64;
        self.sum_emf_over_len += emf / len;
        self.sum_inv_len += 1.0 / len;
        self.path_count += 1;
    }

    pub fn push_path(&mut self, path: &PathRecord) {
        self.push(path.emf, path.len());
    }
}

/// Resolved endpoints plus precomputed pruning data for one pair.
struct PairSearch<'a> {
    net: &'a ConceptNet,
    target: usize,
    cap: usize,
    /// `reaches[v]`: target reachable from `v` (target itself included).
    reaches: Vec<bool>,
    budget: Option<u64>,
    cancel: Option<Arc<AtomicBool>>,
    visited_states: u64,
}

impl<'a> PairSearch<'a> {
    fn new(
        net: &'a ConceptNet,
        source: usize,
        target: usize,
        limits: &SearchLimits,
    ) -> Result<Self, PathError> {
        let n = net.len();
        for node in [source, target] {
            if node >= n {
                return Err(PathError::UnknownNode(format!("#{}", node + 1)));
            }
        }
        if source == target {
            return Err(PathError::SameNode(net.label(source).to_owned()));
        }
        let cap = limits.effective_cap(n)?;
        Ok(Self {
            net,
            target,
            cap,
            reaches: reverse_reachable(net, target),
            budget: limits.budget,
            cancel: limits.cancel.clone(),
            visited_states: 0,
        })
    }

    fn visit(&mut self) -> Result<(), PathError> {
        self.visited_states += 1;
        if let Some(b) = self.budget {
            if self.visited_states > b {
                return Err(PathError::BudgetExhausted { budget: b });
            }
        }
        if self.visited_states.is_multiple_of(4096) {
            if let Some(flag) = &self.cancel {
                if flag.load(Ordering::Relaxed) {
                    return Err(PathError::Cancelled);
                }
            }
        }
        Ok(())
    }

    /// At the cap: does some unvisited neighbour still lead to the target?
    fn cap_prunes(&self, node: usize, on_path: &[bool]) -> bool {
        self.net
            .out_edges(node)
            .iter()
            .any(|&(next, _)| !on_path[next] && self.reaches[next])
    }
}

fn reverse_reachable(net: &ConceptNet, target: usize) -> Vec<bool> {
    let n = net.len();
    let mut incoming = vec![Vec::new(); n];
    for (s, t, _) in net.edges() {
        incoming[t].push(s);
    }
    let mut seen = vec![false; n];
    seen[target] = true;
    let mut queue = VecDeque::from([target]);
    while let Some(v) = queue.pop_front() {
        for &u in &incoming[v] {
            if !seen[u] {
                seen[u] = true;
                queue.push_back(u);
            }
        }
    }
    seen
}

fn resolve(net: &ConceptNet, label: &str) -> Result<usize, PathError> {
    net.index_of(label)
        .ok_or_else(|| PathError::UnknownNode(label.to_owned()))
}

/// Looks up both endpoints by label.
pub fn resolve_pair(
    net: &ConceptNet,
    source: &str,
    target: &str,
) -> Result<(usize, usize), PathError> {
    Ok((resolve(net, source)?, resolve(net, target)?))
}

/// Lazy depth-first stream of all simple paths from `source` to `target`.
///
/// Items are `Err` only for budget exhaustion or cancellation, after which
/// the stream ends. [`SimplePaths::truncated`] is final once the stream is
/// exhausted.
pub struct SimplePaths<'a> {
    search: PairSearch<'a>,
    on_path: Vec<bool>,
    nodes: Vec<usize>,
    emfs: Vec<f64>,
    running: Vec<f64>,
    /// Next out-edge index to try, one entry per node on `nodes`.
    cursor: Vec<usize>,
    truncated: bool,
    done: bool,
}

impl<'a> SimplePaths<'a> {
    pub fn new(
        net: &'a ConceptNet,
        source: usize,
        target: usize,
        limits: &SearchLimits,
    ) -> Result<Self, PathError> {
        let mut search = PairSearch::new(net, source, target, limits)?;
        let mut on_path = vec![false; net.len()];
        let done = !search.reaches[source];
        if !done {
            search.visit()?;
        }
        on_path[source] = true;
        Ok(Self {
            search,
            on_path,
            nodes: vec![source],
            emfs: Vec::new(),
            running: vec![0.0],
            cursor: vec![0],
            truncated: false,
            done,
        })
    }

    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn visited_states(&self) -> u64 {
        self.search.visited_states
    }

    fn pop(&mut self) {
        let node = self.nodes.pop().expect("non-empty path");
        self.on_path[node] = false;
        self.cursor.pop();
        self.running.pop();
        self.emfs.pop();
    }
}

impl Iterator for SimplePaths<'_> {
    type Item = Result<PathRecord, PathError>;

    fn next(&mut self) -> Option<Self::Item> {
        while !self.done {
            let depth = self.nodes.len() - 1;
            let node = *self.nodes.last().expect("non-empty path");
            let out = self.search.net.out_edges(node);

            if depth == self.search.cap {
                if self.search.cap_prunes(node, &self.on_path) {
                    self.truncated = true;
                }
                self.pop();
                if self.nodes.is_empty() {
                    self.done = true;
                }
                continue;
            }

            let cursor = self.cursor.last_mut().expect("cursor per node");
            let mut chosen = None;
            while *cursor < out.len() {
                let (next, w) = out[*cursor];
                *cursor += 1;
                if !self.on_path[next] && self.search.reaches[next] {
                    chosen = Some((next, w));
                    break;
                }
            }
            let Some((next, w)) = chosen else {
                self.pop();
                if self.nodes.is_empty() {
                    self.done = true;
                }
                continue;
            };

            if let Err(e) = self.search.visit() {
                self.done = true;
                return Some(Err(e));
            }
            let emf = self.running.last().copied().unwrap_or(0.0) + w;
            if next == self.search.target {
                let mut nodes = self.nodes.clone();
                nodes.push(next);
                let mut edge_emfs = self.emfs.clone();
                edge_emfs.push(w);
                return Some(Ok(PathRecord {
                    nodes,
                    edge_emfs,
                    emf,
                }));
            }
            self.nodes.push(next);
            self.on_path[next] = true;
            self.emfs.push(w);
            self.running.push(emf);
            self.cursor.push(0);
        }
        None
    }
}

/// Streams every simple path between two labelled nodes.
pub fn enumerate_simple_paths<'a>(
    net: &'a ConceptNet,
    source: &str,
    target: &str,
    limits: &SearchLimits,
) -> Result<SimplePaths<'a>, PathError> {
    let (s, t) = resolve_pair(net, source, target)?;
    SimplePaths::new(net, s, t, limits)
}

struct Fold<'s, 'a, F> {
    search: &'s mut PairSearch<'a>,
    on_path: Vec<bool>,
    truncated: bool,
    on_path_found: F,
}

impl<F: FnMut(f64, usize)> Fold<'_, '_, F> {
    fn dfs(&mut self, node: usize, emf: f64, depth: usize) -> Result<(), PathError> {
        if depth == self.search.cap {
            if self.search.cap_prunes(node, &self.on_path) {
                self.truncated = true;
            }
            return Ok(());
        }
        let net = self.search.net;
        for &(next, w) in net.out_edges(node) {
            if self.on_path[next] || !self.search.reaches[next] {
                continue;
            }
            self.search.visit()?;
            let next_emf = emf + w;
            if next == self.search.target {
                (self.on_path_found)(next_emf, depth + 1);
                continue;
            }
            self.on_path[next] = true;
            self.dfs(next, next_emf, depth + 1)?;
            self.on_path[next] = false;
        }
        Ok(())
    }
}

/// Runs the in-DFS fold, calling `on_path_found(emf, len)` per path.
/// Returns `(truncated, visited_states)`.
fn fold_pair(
    net: &ConceptNet,
    source: usize,
    target: usize,
    limits: &SearchLimits,
    on_path_found: impl FnMut(f64, usize),
) -> Result<(bool, u64), PathError> {
    let mut search = PairSearch::new(net, source, target, limits)?;
    if !search.reaches[source] {
        return Ok((false, 0));
    }
    search.visit()?;
    let mut on_path = vec![false; net.len()];
    on_path[source] = true;
    let mut fold = Fold {
        search: &mut search,
        on_path,
        truncated: false,
        on_path_found,
    };
    fold.dfs(source, 0.0, 0)?;
    let truncated = fold.truncated;
    Ok((truncated, search.visited_states))
}

/// Folds all simple `source → target` paths into the two running sums,
/// by node index.
pub fn accumulate_pair_indexed(
    net: &ConceptNet,
    source: usize,
    target: usize,
    limits: &SearchLimits,
) -> Result<PairAccumulator, PathError> {
    let mut acc = PairAccumulator::default();
    let (truncated, _) = fold_pair(net, source, target, limits, |emf, len| acc.push(emf, len))?;
    acc.truncated = truncated;
    Ok(acc)
}

pub fn accumulate_pair(
    net: &ConceptNet,
    source: &str,
    target: &str,
    limits: &SearchLimits,
) -> Result<PairAccumulator, PathError> {
    let (s, t) = resolve_pair(net, source, target)?;
    accumulate_pair_indexed(net, s, t, limits)
}

/// Number of simple paths and whether the length cap cut any off.
pub fn count_paths_indexed(
    net: &ConceptNet,
    source: usize,
    target: usize,
    limits: &SearchLimits,
) -> Result<(u64, bool), PathError> {
    let mut count = 0u64;
    let (truncated, _) = fold_pair(net, source, target, limits, |_, _| count += 1)?;
    Ok((count, truncated))
}

pub fn count_paths(
    net: &ConceptNet,
    source: &str,
    target: &str,
    limits: &SearchLimits,
) -> Result<(u64, bool), PathError> {
    let (s, t) = resolve_pair(net, source, target)?;
    count_paths_indexed(net, s, t, limits)
}

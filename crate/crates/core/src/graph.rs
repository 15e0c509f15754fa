//! Directed weighted concept networks.
//!
//! A [`ConceptNet`] is the only place edge weights live. Nodes are kept in
//! input order and every matrix produced downstream is indexed by that order.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::DenseMatrix;

/// 1-based position in an input document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Location {
    pub row: usize,
    pub col: usize,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "row {}, column {}", self.row, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("empty document")]
    Empty,
    #[error("malformed header: {0}")]
    BadHeader(String),
    #[error("matrix is not square: header declares {expected} nodes, {what}")]
    NotSquare { expected: usize, what: String },
    #[error("row label {found:?} at row {row} does not match column label {expected:?}")]
    LabelMismatch {
        row: usize,
        expected: String,
        found: String,
    },
    #[error("non-numeric cell {text:?} at {at}")]
    NonNumeric { text: String, at: Location },
    #[error("non-finite weight at {at}")]
    NonFinite { at: Location },
    #[error("nonzero diagonal entry for node {label:?} at {at}")]
    NonzeroDiagonal { label: String, at: Location },
    #[error("duplicate node label {0:?}")]
    DuplicateLabel(String),
    #[error("empty node label at position {0}")]
    EmptyLabel(usize),
    #[error("edge endpoint {0:?} is not a declared node")]
    UnknownNode(String),
    #[error("self-loop on node {0:?}")]
    SelfLoop(String),
    #[error("duplicate edge {from:?} -> {to:?}")]
    DuplicateEdge { from: String, to: String },
    #[error("invalid network: {0}")]
    Invalid(String),
    #[error("csv: {0}")]
    Csv(String),
    #[error("json: {0}")]
    Json(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IssueCode {
    DuplicateLabel,
    EmptyLabel,
    SelfLoop,
    DuplicateEdge,
    NonFiniteWeight,
    EndpointOutOfRange,
    IsolatedNode,
    SinkNode,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Issue {
    pub code: IssueCode,
    pub message: String,
    /// 1-based node index or edge position, whichever the issue concerns.
    pub location: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct NetValidationReport {
    pub errors: Vec<Issue>,
    pub warnings: Vec<Issue>,
}

impl NetValidationReport {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }

    pub fn warnings_with(&self, code: IssueCode) -> impl Iterator<Item = &Issue> {
        self.warnings.iter().filter(move |w| w.code == code)
    }
}

/// An edge as it appears in an unchecked draft.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DraftEdge {
    pub source: usize,
    pub target: usize,
    pub weight: f64,
}

/// Unvalidated network contents. [`NetDraft::build`] turns it into a
/// [`ConceptNet`] when [`NetDraft::validate`] reports no errors.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct NetDraft {
    pub labels: Vec<String>,
    pub edges: Vec<DraftEdge>,
}

impl NetDraft {
    pub fn new(labels: Vec<String>) -> Self {
        Self {
            labels,
            edges: Vec::new(),
        }
    }

    pub fn edge(mut self, source: usize, target: usize, weight: f64) -> Self {
        self.edges.push(DraftEdge {
            source,
            target,
            weight,
        });
        self
    }

    pub fn validate(&self) -> NetValidationReport {
        let mut report = NetValidationReport::default();
        let n = self.labels.len();

        let mut seen = HashSet::new();
        for (i, label) in self.labels.iter().enumerate() {
            if label.is_empty() {
                report.errors.push(Issue {
                    code: IssueCode::EmptyLabel,
                    message: format!("node {} has an empty label", i + 1),
                    location: Some(i + 1),
                });
            } else if !seen.insert(label.as_str()) {
                report.errors.push(Issue {
                    code: IssueCode::DuplicateLabel,
                    message: format!("label {label:?} is used more than once"),
                    location: Some(i + 1),
                });
            }
        }

        let mut pairs = HashSet::new();
        let mut out_degree = vec![0usize; n];
        let mut in_degree = vec![0usize; n];
        for (k, e) in self.edges.iter().enumerate() {
            if e.source >= n || e.target >= n {
                report.errors.push(Issue {
                    code: IssueCode::EndpointOutOfRange,
                    message: format!("edge {} references a node outside 1..={n}", k + 1),
                    location: Some(k + 1),
                });
                continue;
            }
            if e.source == e.target {
                report.errors.push(Issue {
                    code: IssueCode::SelfLoop,
                    message: format!("self-loop on {:?}", self.labels[e.source]),
                    location: Some(k + 1),
                });
            }
            if !e.weight.is_finite() {
                report.errors.push(Issue {
                    code: IssueCode::NonFiniteWeight,
                    message: format!(
                        "edge {:?} -> {:?} has a non-finite weight",
                        self.labels[e.source], self.labels[e.target]
                    ),
                    location: Some(k + 1),
                });
            }
            if !pairs.insert((e.source, e.target)) {
                report.errors.push(Issue {
                    code: IssueCode::DuplicateEdge,
                    message: format!(
                        "edge {:?} -> {:?} appears more than once",
                        self.labels[e.source], self.labels[e.target]
                    ),
                    location: Some(k + 1),
                });
            }
            out_degree[e.source] += 1;
            in_degree[e.target] += 1;
        }

        for i in 0..n {
            if out_degree[i] == 0 && in_degree[i] == 0 {
                report.warnings.push(Issue {
                    code: IssueCode::IsolatedNode,
                    message: format!("node {:?} has no edges", self.labels[i]),
                    location: Some(i + 1),
                });
            }
            if out_degree[i] == 0 {
                report.warnings.push(Issue {
                    code: IssueCode::SinkNode,
                    message: format!("node {:?} has no outgoing edges", self.labels[i]),
                    location: Some(i + 1),
                });
            }
        }
        report
    }

    pub fn build(self) -> Result<ConceptNet, GraphError> {
        let report = self.validate();
        if let Some(first) = report.errors.first() {
            let label_of = |end: usize| self.labels[end].clone();
            let edge_at = |loc: Option<usize>| loc.map(|l| self.edges[l - 1]);
            return Err(match first.code {
                IssueCode::DuplicateLabel => {
                    GraphError::DuplicateLabel(self.labels[first.location.unwrap() - 1].clone())
                }
                IssueCode::EmptyLabel => GraphError::EmptyLabel(first.location.unwrap()),
                IssueCode::SelfLoop => {
                    let e = edge_at(first.location).unwrap();
                    GraphError::SelfLoop(label_of(e.source))
                }
                IssueCode::DuplicateEdge => {
                    let e = edge_at(first.location).unwrap();
                    GraphError::DuplicateEdge {
                        from: label_of(e.source),
                        to: label_of(e.target),
                    }
                }
                _ => GraphError::Invalid(first.message.clone()),
            });
        }

        let n = self.labels.len();
        let mut adjacency = vec![Vec::new(); n];
        for e in &self.edges {
            adjacency[e.source].push((e.target, e.weight));
        }
        for list in &mut adjacency {
            list.sort_by_key(|&(t, _)| t);
        }
        let index = self
            .labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        Ok(ConceptNet {
            labels: self.labels,
            index,
            adjacency,
            edge_count: self.edges.len(),
        })
    }
}

/// Directed weighted network of concepts.
///
/// Immutable once built. Out-edges of each node are sorted by target index,
/// which fixes the depth-first order used by path enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct ConceptNet {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    adjacency: Vec<Vec<(usize, f64)>>,
    edge_count: usize,
}

impl ConceptNet {
    /// Builds a network from labels and `(source, target, weight)` triples.
    /// Zero weights are kept as explicit edges.
    pub fn new(
        labels: Vec<String>,
        edges: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self, GraphError> {
        let edges = edges
            .into_iter()
            .map(|(source, target, weight)| DraftEdge {
                source,
                target,
                weight,
            })
            .collect();
        NetDraft { labels, edges }.build()
    }

    /// Every nonzero off-diagonal entry becomes an edge; the diagonal must be zero.
    pub fn from_dense(labels: Vec<String>, weights: &DenseMatrix) -> Result<Self, GraphError> {
        let n = labels.len();
        if weights.rows() != n || weights.cols() != n {
            return Err(GraphError::NotSquare {
                expected: n,
                what: format!("matrix is {}x{}", weights.rows(), weights.cols()),
            });
        }
        let mut edges = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let w = weights[(i, j)];
                if w == 0.0 {
                    continue;
                }
                if i == j {
                    return Err(GraphError::NonzeroDiagonal {
                        label: labels[i].clone(),
                        at: Location {
                            row: i + 1,
                            col: j + 1,
                        },
                    });
                }
                edges.push((i, j, w));
            }
        }
        Self::new(labels, edges)
    }

    /// Labels `"1"..="n"`.
    pub fn numbered_labels(n: usize) -> Vec<String> {
        (1..=n).map(|i| i.to_string()).collect()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// Out-edges of `node` as `(target, weight)`, ascending by target.
    pub fn out_edges(&self, node: usize) -> &[(usize, f64)] {
        &self.adjacency[node]
    }

    pub fn weight(&self, source: usize, target: usize) -> Option<f64> {
        let list = &self.adjacency[source];
        list.binary_search_by_key(&target, |&(t, _)| t)
            .ok()
            .map(|k| list[k].1)
    }

    /// All edges as `(source, target, weight)` in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(s, list)| list.iter().map(move |&(t, w)| (s, t, w)))
    }

    pub fn has_explicit_zero(&self) -> bool {
        self.edges().any(|(_, _, w)| w == 0.0)
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.len();
        let mut m = DenseMatrix::zeros(n, n);
        for (s, t, w) in self.edges() {
            m[(s, t)] = w;
        }
        m
    }

    /// Same network with every edge reversed.
    pub fn transposed(&self) -> Self {
        Self::new(
            self.labels.clone(),
            self.edges().map(|(s, t, w)| (t, s, w)),
        )
        .expect("reversing edges preserves validity")
    }

    /// Same support with each weight replaced by `f(source, target, weight)`.
    pub fn map_weights(&self, mut f: impl FnMut(usize, usize, f64) -> f64) -> Result<Self, GraphError> {
        Self::new(
            self.labels.clone(),
            self.edges()
                .map(|(s, t, w)| (s, t, f(s, t, w)))
                .collect::<Vec<_>>(),
        )
    }

    /// Relabels nodes so that old node `i` becomes new node `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self, GraphError> {
        let n = self.len();
        let mut check = perm.to_vec();
        check.sort_unstable();
        if perm.len() != n || check.iter().enumerate().any(|(i, &p)| i != p) {
            return Err(GraphError::Invalid(format!(
                "not a permutation of 0..{n}: {perm:?}"
            )));
        }
        let mut labels = vec![String::new(); n];
        for (i, &p) in perm.iter().enumerate() {
            labels[p] = self.labels[i].clone();
        }
        Self::new(
            labels,
            self.edges().map(|(s, t, w)| (perm[s], perm[t], w)),
        )
    }

    pub fn validate(&self) -> NetValidationReport {
        NetDraft {
            labels: self.labels.clone(),
            edges: self
                .edges()
                .map(|(source, target, weight)| DraftEdge {
                    source,
                    target,
                    weight,
                })
                .collect(),
        }
        .validate()
    }
}

/// Parses the CSV adjacency format:
///
/// ```text
/// node,A,B,C
/// A,0,1,0
/// B,0,0,-0.5
/// C,0,0,0
/// ```
///
/// Zero cells mean "no edge". Lines starting with `#` are ignored.
pub fn parse_matrix(text: &str) -> Result<ConceptNet, GraphError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut records = reader.records();

    let header = match records.next() {
        Some(r) => r.map_err(|e| GraphError::Csv(e.to_string()))?,
        None => return Err(GraphError::Empty),
    };
    let mut fields = header.iter();
    match fields.next() {
        Some("node") => {}
        other => {
            return Err(GraphError::BadHeader(format!(
                "first cell must be \"node\", found {:?}",
                other.unwrap_or("")
            )))
        }
    }
    let labels: Vec<String> = fields.map(str::to_owned).collect();
    let n = labels.len();
    if n == 0 {
        return Err(GraphError::BadHeader("no node labels".into()));
    }
    let mut seen = HashSet::new();
    for (i, l) in labels.iter().enumerate() {
        if l.is_empty() {
            return Err(GraphError::EmptyLabel(i + 1));
        }
        if !seen.insert(l.as_str()) {
            return Err(GraphError::DuplicateLabel(l.clone()));
        }
    }

    let mut edges = Vec::new();
    let mut row_count = 0;
    for record in records {
        let record = record.map_err(|e| GraphError::Csv(e.to_string()))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let i = row_count;
        row_count += 1;
        if i >= n {
            return Err(GraphError::NotSquare {
                expected: n,
                what: format!("found more than {n} data rows"),
            });
        }
        if record.len() != n + 1 {
            return Err(GraphError::NotSquare {
                expected: n,
                what: format!("row {} has {} weight cells", i + 2, record.len() - 1),
            });
        }
        let row_label = &record[0];
        if row_label != labels[i] {
            return Err(GraphError::LabelMismatch {
                row: i + 2,
                expected: labels[i].clone(),
                found: row_label.to_owned(),
            });
        }
        for (j, cell) in record.iter().skip(1).enumerate() {
            let at = Location {
                row: i + 2,
                col: j + 2,
            };
            let w: f64 = cell.parse().map_err(|_| GraphError::NonNumeric {
                text: cell.to_owned(),
                at,
            })?;
            if !w.is_finite() {
                return Err(GraphError::NonFinite { at });
            }
            if w == 0.0 {
                continue;
            }
            if i == j {
                return Err(GraphError::NonzeroDiagonal {
                    label: labels[i].clone(),
                    at,
                });
            }
            edges.push((i, j, w));
        }
    }
    if row_count != n {
        return Err(GraphError::NotSquare {
            expected: n,
            what: format!("found {row_count} data rows"),
        });
    }
    ConceptNet::new(labels, edges)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeListDoc {
    nodes: Vec<String>,
    edges: Vec<EdgeDoc>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    from: String,
    to: String,
    weight: f64,
}

/// Parses the JSON edge-list format `{"nodes": [...], "edges": [{"from", "to", "weight"}]}`.
/// Explicit zero-weight edges are preserved.
pub fn parse_edge_list(text: &str) -> Result<ConceptNet, GraphError> {
    let doc: EdgeListDoc =
        serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
    let index: HashMap<&str, usize> = doc
        .nodes
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();
    let lookup = |l: &str| {
        index
            .get(l)
            .copied()
            .ok_or_else(|| GraphError::UnknownNode(l.to_owned()))
    };
    let mut edges = Vec::with_capacity(doc.edges.len());
    for e in &doc.edges {
        let (s, t) = (lookup(&e.from)?, lookup(&e.to)?);
        if !e.weight.is_finite() {
            return Err(GraphError::Invalid(format!(
                "non-finite weight on {:?} -> {:?}",
                e.from, e.to
            )));
        }
        edges.push((s, t, e.weight));
    }
    ConceptNet::new(doc.nodes, edges)
}

/// Renders the CSV adjacency format with round-trip exact numbers.
pub fn render_matrix(net: &ConceptNet) -> String {
    write_matrix_csv(net.labels(), &net.to_dense(), |x| format!("{x}"))
}

/// Writes a labelled square matrix in the adjacency CSV layout.
pub fn write_matrix_csv(
    labels: &[String],
    values: &DenseMatrix,
    fmt_cell: impl Fn(f64) -> String,
) -> String {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let header = std::iter::once("node").chain(labels.iter().map(String::as_str));
    writer.write_record(header).expect("in-memory write");
    for (i, label) in labels.iter().enumerate() {
        let row = std::iter::once(label.clone())
            .chain(values.row(i).iter().map(|&x| fmt_cell(x)));
        writer.write_record(row).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

//! Command-line front end for K-method and impulse-method analyses.
//!
//! Exit codes: 0 success, 1 input error, 2 work budget exhausted,
//! 3 numerical failure.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use kmethod_core::circuit::{build_circuit, export_circuit_dot, CircuitError};
use kmethod_core::format::format_number;
use kmethod_core::graph::{parse_edge_list, parse_matrix, write_matrix_csv, ConceptNet, GraphError};
use kmethod_core::impulse::{impulse_closed_form, impulse_series, ImpulseError, ImpulseResult};
use kmethod_core::kmethod::{k_matrix, k_pair, KError, KMatrix, KOptions};
use kmethod_core::numerics::SpectralEstimate;
use kmethod_core::paths::{
    accumulate_pair_indexed, resolve_pair, PathError, SearchLimits, SimplePaths, DEFAULT_BUDGET,
};
use kmethod_core::ranking::{
    amplitude_influence, amplitude_pressure, impulse_influence, impulse_pressure, influence,
    pressure, rank_correlation, rank_nodes, MeasureVector, RankCorrelation, RankVector,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Budget(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Budget(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<PathError> for CliError {
    fn from(e: PathError) -> Self {
        match e {
            PathError::BudgetExhausted { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<KError> for CliError {
    fn from(e: KError) -> Self {
        match e.path_error() {
            Some(PathError::BudgetExhausted { .. }) => CliError::Budget(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<ImpulseError> for CliError {
    fn from(e: ImpulseError) -> Self {
        match e {
            ImpulseError::NodeOutOfRange { .. } => CliError::Input(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<CircuitError> for CliError {
    fn from(e: CircuitError) -> Self {
        match e {
            CircuitError::Path(p) => p.into(),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "kmethod", version, about = "Pairwise influence analysis of cognitive maps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full K-matrix.
    KMatrix(CommonArgs),
    /// Influence of one node on another, optionally exporting its circuit.
    KPair {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        pair: PairArgs,
        /// Write the pair's circuit as a DOT file.
        #[arg(long, value_name = "PATH")]
        emit_circuit: Option<PathBuf>,
    },
    /// Node measures with ranks.
    Rank {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum, default_value_t = Method::K)]
        method: Method,
        #[arg(long, value_enum, default_value_t = Measure::Pressure)]
        measure: Measure,
    },
    /// Impulse-method closed form, optionally with the propagation series.
    Impulse {
        #[command(flatten)]
        common: CommonArgs,
        /// Also run the series for this many steps from unit impulses.
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Side-by-side K-method and impulse rankings with rank correlations.
    Compare(CommonArgs),
    /// List the simple paths between two nodes.
    Paths {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        pair: PairArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    MatrixCsv,
    EdgesJson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    K,
    Impulse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Measure {
    Pressure,
    Influence,
    AmplitudePressure,
    AmplitudeInfluence,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Network file: adjacency CSV or JSON edge list.
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,
    /// Input format; inferred from the extension when absent (.json is an edge list).
    #[arg(long, value_enum)]
    pub input_format: Option<InputFormat>,
    /// Output format.
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// Write the report here instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// Longest path, in edges, to enumerate.
    #[arg(long)]
    pub max_len: Option<usize>,
    /// Visited search states allowed per node pair.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Worker threads for pair computations (default: all cores).
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct PairArgs {
    #[arg(long)]
    pub from: String,
    #[arg(long)]
    pub to: String,
}

impl CommonArgs {
    fn load(&self) -> Result<ConceptNet, CliError> {
        let text = fs::read_to_string(&self.input)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", self.input.display())))?;
        let format = self.input_format.unwrap_or_else(|| infer_format(&self.input));
        let net = match format {
            InputFormat::MatrixCsv => parse_matrix(&text)?,
            InputFormat::EdgesJson => parse_edge_list(&text)?,
        };
        for w in net.validate().warnings {
            eprintln!("warning: {}", w.message);
        }
        Ok(net)
    }

    fn limits(&self) -> Result<SearchLimits, CliError> {
        if self.max_len == Some(0) {
            return Err(CliError::Input("--max-len must be positive".into()));
        }
        if self.budget == 0 {
            return Err(CliError::Input("--budget must be positive".into()));
        }
        if self.jobs == Some(0) {
            return Err(CliError::Input("--jobs must be positive".into()));
        }
        Ok(SearchLimits {
            max_len: self.max_len,
            budget: Some(self.budget),
            cancel: None,
        })
    }

    fn k_options(&self) -> Result<KOptions, CliError> {
        Ok(KOptions {
            limits: self.limits()?,
            jobs: self.jobs,
        })
    }

    fn format_or(&self, default: OutputFormat) -> OutputFormat {
        self.format.unwrap_or(default)
    }
}

fn infer_format(path: &Path) -> InputFormat {
    match path.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("json") => InputFormat::EdgesJson,
        _ => InputFormat::MatrixCsv,
    }
}

/// Rounds to the reporting precision so JSON numbers match CSV text.
fn rounded(x: f64) -> f64 {
    format_number(x).parse().unwrap_or(x)
}

fn rounded_vec(v: &[f64]) -> Vec<f64> {
    v.iter().map(|&x| rounded(x)).collect()
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialises");
    s.push('\n');
    s
}

fn csv_line<S: AsRef<str>>(cells: &[S]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(cells.iter().map(AsRef::as_ref))
        .expect("in-memory write");
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

#[derive(Serialize)]
struct KMatrixDoc<'a> {
    labels: &'a [String],
    rows: Vec<Vec<f64>>,
    truncated: bool,
}

fn render_k_matrix(k: &KMatrix, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => json(&KMatrixDoc {
            labels: &k.labels,
            rows: k.values.to_rows().iter().map(|r| rounded_vec(r)).collect(),
            truncated: k.truncated,
        }),
        OutputFormat::Csv | OutputFormat::Text => {
            let mut out = write_matrix_csv(&k.labels, &k.values, format_number);
            if k.truncated {
                out.push_str("# truncated: true\n");
            }
            out
        }
    }
}

#[derive(Serialize)]
struct PairDoc<'a> {
    from: &'a str,
    to: &'a str,
    k: f64,
    paths: u64,
    truncated: bool,
}

#[derive(Serialize)]
struct PathDoc {
    nodes: Vec<String>,
    length: usize,
    emf: f64,
}

#[derive(Serialize)]
struct PathsDoc<'a> {
    from: &'a str,
    to: &'a str,
    paths: Vec<PathDoc>,
    truncated: bool,
}

#[derive(Serialize)]
struct RankRow<'a> {
    node: &'a str,
    value: f64,
    rank: usize,
}

#[derive(Serialize)]
struct RankDoc<'a> {
    method: &'static str,
    measure: &'static str,
    nodes: Vec<RankRow<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    truncated: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    converged: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rho: Option<f64>,
}

#[derive(Serialize)]
struct SpectralDoc {
    rho: f64,
    iterations: usize,
    converged: bool,
}

impl From<SpectralEstimate> for SpectralDoc {
    fn from(s: SpectralEstimate) -> Self {
        Self {
            rho: rounded(s.rho),
            iterations: s.iterations,
            converged: s.converged,
        }
    }
}

#[derive(Serialize)]
struct SeriesDoc {
    steps: usize,
    diverging: bool,
    last: Vec<f64>,
}

#[derive(Serialize)]
struct ImpulseDoc<'a> {
    labels: &'a [String],
    omega: Vec<Vec<f64>>,
    spectral_radius: SpectralDoc,
    converged: bool,
    psi_imp: Vec<f64>,
    v_imp: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    series: Option<SeriesDoc>,
}

#[derive(Serialize)]
struct MethodColumns {
    pressure: Vec<f64>,
    pressure_rank: Vec<usize>,
    influence: Vec<f64>,
    influence_rank: Vec<usize>,
}

#[derive(Serialize)]
struct CorrelationDoc {
    spearman: Option<f64>,
    kendall: Option<f64>,
}

impl From<Option<RankCorrelation>> for CorrelationDoc {
    fn from(c: Option<RankCorrelation>) -> Self {
        let finite = |x: f64| x.is_finite().then(|| rounded(x));
        Self {
            spearman: c.and_then(|c| finite(c.spearman)),
            kendall: c.and_then(|c| finite(c.kendall)),
        }
    }
}

#[derive(Serialize)]
struct CompareDoc<'a> {
    labels: &'a [String],
    k_method: MethodColumns,
    k_truncated: bool,
    impulse: MethodColumns,
    impulse_converged: bool,
    spectral_radius: SpectralDoc,
    pressure_correlation: CorrelationDoc,
    influence_correlation: CorrelationDoc,
}

fn columns(p: &MeasureVector, v: &MeasureVector) -> MethodColumns {
    MethodColumns {
        pressure: rounded_vec(&p.values),
        pressure_rank: rank_nodes(p).0,
        influence: rounded_vec(&v.values),
        influence_rank: rank_nodes(v).0,
    }
}

fn opt_number(x: Option<f64>) -> String {
    x.map_or_else(|| "null".to_owned(), format_number)
}

/// Runs one command and returns the report text.
pub fn execute(command: &Command) -> Result<String, CliError> {
    match command {
        Command::KMatrix(common) => {
            let net = common.load()?;
            let k = k_matrix(&net, &common.k_options()?)?;
            Ok(render_k_matrix(&k, common.format_or(OutputFormat::Csv)))
        }
        Command::KPair {
            common,
            pair,
            emit_circuit,
        } => {
            let net = common.load()?;
            let limits = common.limits()?;
            let (s, t) = resolve_pair(&net, &pair.from, &pair.to)?;
            let acc = accumulate_pair_indexed(&net, s, t, &limits)?;
            if let Some(path) = emit_circuit {
                let circuit = build_circuit(&net, s, t, &limits)?;
                fs::write(path, export_circuit_dot(&circuit)).map_err(|e| {
                    CliError::Input(format!("cannot write {}: {e}", path.display()))
                })?;
            }
            let k = k_pair(&acc);
            Ok(match common.format_or(OutputFormat::Csv) {
                OutputFormat::Json => json(&PairDoc {
                    from: &pair.from,
                    to: &pair.to,
                    k: rounded(k),
                    paths: acc.path_count,
                    truncated: acc.truncated,
                }),
                _ => {
                    let mut out = csv_line(&["from", "to", "k", "paths", "truncated"]);
                    out.push_str(&csv_line(&[
                        pair.from.clone(),
                        pair.to.clone(),
                        format_number(k),
                        acc.path_count.to_string(),
                        acc.truncated.to_string(),
                    ]));
                    out
                }
            })
        }
        Command::Paths { common, pair } => {
            let net = common.load()?;
            let limits = common.limits()?;
            let (s, t) = resolve_pair(&net, &pair.from, &pair.to)?;
            let mut stream = SimplePaths::new(&net, s, t, &limits)?;
            let mut paths = Vec::new();
            for p in stream.by_ref() {
                let p = p?;
                paths.push(PathDoc {
                    nodes: p.nodes.iter().map(|&i| net.label(i).to_owned()).collect(),
                    length: p.len(),
                    emf: p.emf,
                });
            }
            let truncated = stream.truncated();
            Ok(match common.format_or(OutputFormat::Csv) {
                OutputFormat::Json => json(&PathsDoc {
                    from: &pair.from,
                    to: &pair.to,
                    paths: paths
                        .into_iter()
                        .map(|p| PathDoc {
                            emf: rounded(p.emf),
                            ..p
                        })
                        .collect(),
                    truncated,
                }),
                _ => {
                    let mut out = csv_line(&["path", "length", "emf"]);
                    for p in &paths {
                        out.push_str(&csv_line(&[
                            p.nodes.join(" -> "),
                            p.length.to_string(),
                            format_number(p.emf),
                        ]));
                    }
                    if truncated {
                        out.push_str("# truncated: true\n");
                    }
                    out
                }
            })
        }
        Command::Rank {
            common,
            method,
            measure,
        } => {
            let net = common.load()?;
            let (values, truncated, impulse) = match method {
                Method::K => {
                    let k = k_matrix(&net, &common.k_options()?)?;
                    let m = match measure {
                        Measure::Pressure => pressure(&k.values),
                        Measure::Influence => influence(&k.values),
                        Measure::AmplitudePressure => amplitude_pressure(&k.values),
                        Measure::AmplitudeInfluence => amplitude_influence(&k.values),
                    }
                    .expect("K-matrix is square");
                    (m, Some(k.truncated), None)
                }
                Method::Impulse => {
                    let r = impulse_closed_form(&net.to_dense())?;
                    let m = match measure {
                        Measure::Pressure => impulse_pressure(&r),
                        Measure::Influence => impulse_influence(&r),
                        Measure::AmplitudePressure | Measure::AmplitudeInfluence => {
                            return Err(CliError::Input(
                                "amplitude measures are only defined for the K-method".into(),
                            ))
                        }
                    };
                    (m, None, Some(r))
                }
            };
            let ranks = rank_nodes(&values);
            let method_name = match method {
                Method::K => "k",
                Method::Impulse => "impulse",
            };
            Ok(render_rank(
                &net,
                method_name,
                values.kind.name(),
                &values,
                &ranks,
                truncated,
                impulse.as_ref(),
                common.format_or(OutputFormat::Csv),
            ))
        }
        Command::Impulse { common, steps } => {
            let net = common.load()?;
            let w = net.to_dense();
            let r = impulse_closed_form(&w)?;
            let series = match steps {
                Some(steps) => {
                    let n = net.len();
                    let t = impulse_series(&w, &vec![1.0; n], &vec![0.0; n], *steps)?;
                    Some(SeriesDoc {
                        steps: *steps,
                        diverging: t.diverging,
                        last: rounded_vec(t.last()),
                    })
                }
                None => None,
            };
            Ok(render_impulse(&net, &r, series, common.format_or(OutputFormat::Csv)))
        }
        Command::Compare(common) => {
            let net = common.load()?;
            let k = k_matrix(&net, &common.k_options()?)?;
            let r = impulse_closed_form(&net.to_dense())?;
            let kp = pressure(&k.values).expect("square");
            let kv = influence(&k.values).expect("square");
            let ip = impulse_pressure(&r);
            let iv = impulse_influence(&r);
            let pc = rank_correlation(&rank_nodes(&kp), &rank_nodes(&ip)).ok();
            let vc = rank_correlation(&rank_nodes(&kv), &rank_nodes(&iv)).ok();
            let doc = CompareDoc {
                labels: net.labels(),
                k_method: columns(&kp, &kv),
                k_truncated: k.truncated,
                impulse: columns(&ip, &iv),
                impulse_converged: r.converged,
                spectral_radius: r.rho.into(),
                pressure_correlation: pc.into(),
                influence_correlation: vc.into(),
            };
            Ok(match common.format_or(OutputFormat::Text) {
                OutputFormat::Json => json(&doc),
                OutputFormat::Csv => render_compare_csv(&doc),
                OutputFormat::Text => render_compare_text(&doc),
            })
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn render_rank(
    net: &ConceptNet,
    method: &'static str,
    measure: &'static str,
    values: &MeasureVector,
    ranks: &RankVector,
    truncated: Option<bool>,
    impulse: Option<&ImpulseResult>,
    format: OutputFormat,
) -> String {
    match format {
        OutputFormat::Json => json(&RankDoc {
            method,
            measure,
            nodes: net
                .labels()
                .iter()
                .zip(&values.values)
                .zip(&ranks.0)
                .map(|((node, &value), &rank)| RankRow {
                    node,
                    value: rounded(value),
                    rank,
                })
                .collect(),
            truncated,
            converged: impulse.map(|r| r.converged),
            rho: impulse.map(|r| rounded(r.rho.rho)),
        }),
        _ => {
            let mut out = String::new();
            if let Some(r) = impulse {
                writeln!(out, "# converged: {}", r.converged).unwrap();
                writeln!(out, "# spectral radius: {}", format_number(r.rho.rho)).unwrap();
            }
            out.push_str(&csv_line(&["node", "value", "rank"]));
            for ((node, &value), &rank) in net.labels().iter().zip(&values.values).zip(&ranks.0) {
                out.push_str(&csv_line(&[node.clone(), format_number(value), rank.to_string()]));
            }
            if truncated == Some(true) {
                out.push_str("# truncated: true\n");
            }
            out
        }
    }
}

fn render_impulse(
    net: &ConceptNet,
    r: &ImpulseResult,
    series: Option<SeriesDoc>,
    format: OutputFormat,
) -> String {
    match format {
        OutputFormat::Json => json(&ImpulseDoc {
            labels: net.labels(),
            omega: r.omega.to_rows().iter().map(|row| rounded_vec(row)).collect(),
            spectral_radius: r.rho.into(),
            converged: r.converged,
            psi_imp: rounded_vec(&r.psi_imp),
            v_imp: rounded_vec(&r.v_imp),
            series,
        }),
        _ => {
            let mut out = String::new();
            writeln!(out, "# converged: {}", r.converged).unwrap();
            writeln!(out, "# spectral radius: {}", format_number(r.rho.rho)).unwrap();
            if let Some(s) = &series {
                writeln!(out, "# series steps: {}, diverging: {}", s.steps, s.diverging).unwrap();
            }
            out.push_str(&csv_line(
                &["node", "psi_imp", "psi_imp_rank", "v_imp", "v_imp_rank"],
            ));
            let pr = rank_nodes(&impulse_pressure(r));
            let vr = rank_nodes(&impulse_influence(r));
            for (i, node) in net.labels().iter().enumerate() {
                out.push_str(&csv_line(&[
                    node.clone(),
                    format_number(r.psi_imp[i]),
                    pr.0[i].to_string(),
                    format_number(r.v_imp[i]),
                    vr.0[i].to_string(),
                ]));
            }
            out
        }
    }
}

fn compare_rows(doc: &CompareDoc) -> (Vec<&'static str>, Vec<Vec<String>>) {
    let header = vec![
        "node",
        "psi",
        "psi_rank",
        "psi_imp",
        "psi_imp_rank",
        "v",
        "v_rank",
        "v_imp",
        "v_imp_rank",
    ];
    let rows = doc
        .labels
        .iter()
        .enumerate()
        .map(|(i, node)| {
            vec![
                node.clone(),
                format_number(doc.k_method.pressure[i]),
                doc.k_method.pressure_rank[i].to_string(),
                format_number(doc.impulse.pressure[i]),
                doc.impulse.pressure_rank[i].to_string(),
                format_number(doc.k_method.influence[i]),
                doc.k_method.influence_rank[i].to_string(),
                format_number(doc.impulse.influence[i]),
                doc.impulse.influence_rank[i].to_string(),
            ]
        })
        .collect();
    (header, rows)
}

fn compare_footer(doc: &CompareDoc) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "# impulse converged: {} (spectral radius {})",
        doc.impulse_converged,
        format_number(doc.spectral_radius.rho)
    )
    .unwrap();
    if doc.k_truncated {
        writeln!(out, "# truncated: true").unwrap();
    }
    writeln!(
        out,
        "# pressure ranks: spearman {}, kendall {}",
        opt_number(doc.pressure_correlation.spearman),
        opt_number(doc.pressure_correlation.kendall)
    )
    .unwrap();
    writeln!(
        out,
        "# influence ranks: spearman {}, kendall {}",
        opt_number(doc.influence_correlation.spearman),
        opt_number(doc.influence_correlation.kendall)
    )
    .unwrap();
    out
}

fn render_compare_csv(doc: &CompareDoc) -> String {
    let (header, rows) = compare_rows(doc);
    let mut out = csv_line(&header);
    for row in rows {
        out.push_str(&csv_line(&row));
    }
    out.push_str(&compare_footer(doc));
    out
}

fn render_compare_text(doc: &CompareDoc) -> String {
    let (header, rows) = compare_rows(doc);
    let widths: Vec<usize> = (0..header.len())
        .map(|c| {
            rows.iter()
                .map(|r| r[c].len())
                .chain(std::iter::once(header[c].len()))
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    let line = |cells: Vec<&str>| {
        cells
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(c, (cell, &w))| {
                if c == 0 {
                    format!("{cell:<w$}")
                } else {
                    format!("{cell:>w$}")
                }
            })
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_owned()
    };
    writeln!(out, "{}", line(header.clone())).unwrap();
    for row in &rows {
        writeln!(out, "{}", line(row.iter().map(String::as_str).collect())).unwrap();
    }
    out.push_str(&compare_footer(doc));
    out
}

/// Runs a parsed command line, writing the report to `--output` or `stdout`.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    let (report, output) = match &cli.command {
        Command::KMatrix(c) | Command::Compare(c) => (execute(&cli.command)?, c.output.as_ref()),
        Command::KPair { common, .. }
        | Command::Rank { common, .. }
        | Command::Impulse { common, .. }
        | Command::Paths { common, .. } => (execute(&cli.command)?, common.output.as_ref()),
    };
    match output {
        Some(path) => fs::write(path, report)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?,
        None => stdout.write_all(report.as_bytes())?,
    }
    Ok(())
}

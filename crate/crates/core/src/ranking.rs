//! Node-level measures derived from an influence matrix, and rankings.

use std::cmp::Ordering;

use serde::Serialize;
use thiserror::Error;

use crate::impulse::ImpulseResult;
use crate::numerics::DenseMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RankError {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("rank vectors differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("rank correlation needs at least two nodes")]
    TooShort,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeasureKind {
    Pressure,
    Influence,
    AmplitudePressure,
    AmplitudeInfluence,
    ImpulsePressure,
    ImpulseInfluence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatrixSource {
    KMethod,
    Impulse,
}

impl MeasureKind {
    pub fn source(self) -> MatrixSource {
        match self {
            MeasureKind::ImpulsePressure | MeasureKind::ImpulseInfluence => MatrixSource::Impulse,
            _ => MatrixSource::KMethod,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MeasureKind::Pressure => "pressure",
            MeasureKind::Influence => "influence",
            MeasureKind::AmplitudePressure => "amplitude-pressure",
            MeasureKind::AmplitudeInfluence => "amplitude-influence",
            MeasureKind::ImpulsePressure => "impulse-pressure",
            MeasureKind::ImpulseInfluence => "impulse-influence",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureVector {
    pub kind: MeasureKind,
    pub values: Vec<f64>,
}

impl MeasureVector {
    pub fn new(kind: MeasureKind, values: Vec<f64>) -> Self {
        Self { kind, values }
    }

    pub fn source(&self) -> MatrixSource {
        self.kind.source()
    }
}

fn check_square(m: &DenseMatrix) -> Result<usize, RankError> {
    if m.is_square() {
        Ok(m.rows())
    } else {
        Err(RankError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        })
    }
}

/// Off-diagonal column (`by_column`) or row sums of `f(entry)`.
fn line_sums(m: &DenseMatrix, by_column: bool, f: impl Fn(f64) -> f64) -> Result<Vec<f64>, RankError> {
    let n = check_square(m)?;
    Ok((0..n)
        .map(|a| {
            (0..n)
                .filter(|&b| b != a)
                .map(|b| if by_column { f(m[(b, a)]) } else { f(m[(a, b)]) })
                .sum()
        })
        .collect())
}

/// `ψ_β = Σ_α K_αβ`: total effect of all other nodes on β.
pub fn pressure(k: &DenseMatrix) -> Result<MeasureVector, RankError> {
    Ok(MeasureVector::new(MeasureKind::Pressure, line_sums(k, true, |x| x)?))
}

/// `v_α = Σ_β K_αβ`: total effect of α on all other nodes.
pub fn influence(k: &DenseMatrix) -> Result<MeasureVector, RankError> {
    Ok(MeasureVector::new(MeasureKind::Influence, line_sums(k, false, |x| x)?))
}

pub fn amplitude_pressure(k: &DenseMatrix) -> Result<MeasureVector, RankError> {
    Ok(MeasureVector::new(
        MeasureKind::AmplitudePressure,
        line_sums(k, true, f64::abs)?,
    ))
}

pub fn amplitude_influence(k: &DenseMatrix) -> Result<MeasureVector, RankError> {
    Ok(MeasureVector::new(
        MeasureKind::AmplitudeInfluence,
        line_sums(k, false, f64::abs)?,
    ))
}

pub fn impulse_pressure(result: &ImpulseResult) -> MeasureVector {
    MeasureVector::new(MeasureKind::ImpulsePressure, result.psi_imp.clone())
}

pub fn impulse_influence(result: &ImpulseResult) -> MeasureVector {
    MeasureVector::new(MeasureKind::ImpulseInfluence, result.v_imp.clone())
}

/// `ranks[i]` is the 1-based rank of node `i`; 1 is the largest value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankVector(pub Vec<usize>);

impl RankVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

/// Descending by value; equal values go to the lower node index first.
pub fn rank_values(values: &[f64]) -> RankVector {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    let mut ranks = vec![0; values.len()];
    for (r, &i) in order.iter().enumerate() {
        ranks[i] = r + 1;
    }
    RankVector(ranks)
}

pub fn rank_nodes(m: &MeasureVector) -> RankVector {
    rank_values(&m.values)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ElementRank {
    pub source: usize,
    pub target: usize,
    pub value: f64,
}

/// Nonzero off-diagonal entries, descending by signed value, ties by
/// `(row, column)`.
pub fn element_ranking(k: &DenseMatrix) -> Result<Vec<ElementRank>, RankError> {
    let n = check_square(k)?;
    let mut out: Vec<ElementRank> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j && k[(i, j)] != 0.0)
        .map(|(i, j)| ElementRank {
            source: i,
            target: j,
            value: k[(i, j)],
        })
        .collect();
    out.sort_by(|a, b| {
        b.value
            .total_cmp(&a.value)
            .then_with(|| (a.source, a.target).cmp(&(b.source, b.target)))
    });
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RankCorrelation {
    pub spearman: f64,
    pub kendall: f64,
}

/// Spearman ρ (Pearson correlation of the ranks) and Kendall τ-b.
pub fn rank_correlation(a: &RankVector, b: &RankVector) -> Result<RankCorrelation, RankError> {
    if a.len() != b.len() {
        return Err(RankError::LengthMismatch(a.len(), b.len()));
    }
    let n = a.len();
    if n < 2 {
        return Err(RankError::TooShort);
    }
    let x: Vec<f64> = a.0.iter().map(|&r| r as f64).collect();
    let y: Vec<f64> = b.0.iter().map(|&r| r as f64).collect();
    let mean = |v: &[f64]| v.iter().sum::<f64>() / n as f64;
    let (mx, my) = (mean(&x), mean(&y));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (xi, yi) in x.iter().zip(&y) {
        sxy += (xi - mx) * (yi - my);
        sxx += (xi - mx).powi(2);
        syy += (yi - my).powi(2);
    }
    let spearman = if sxx == 0.0 || syy == 0.0 {
        f64::NAN
    } else {
        sxy / (sxx * syy).sqrt()
    };

    let (mut concordant, mut discordant, mut ties_a, mut ties_b) = (0i64, 0i64, 0i64, 0i64);
    for i in 0..n {
        for j in i + 1..n {
            let da = a.0[i].cmp(&a.0[j]);
            let db = b.0[i].cmp(&b.0[j]);
            match (da, db) {
                (Ordering::Equal, Ordering::Equal) => {}
                (Ordering::Equal, _) => ties_a += 1,
                (_, Ordering::Equal) => ties_b += 1,
                _ if da == db => concordant += 1,
                _ => discordant += 1,
            }
        }
    }
    let denom = (((concordant + discordant + ties_a) * (concordant + discordant + ties_b)) as f64).sqrt();
    let kendall = if denom == 0.0 {
        f64::NAN
    } else {
        (concordant - discordant) as f64 / denom
    };
    Ok(RankCorrelation { spearman, kendall })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn printed_four_node_k() -> DenseMatrix {
        DenseMatrix::from_rows(&[
            [0.0, 1.6, 1.3, 2.4],
            [2.0, 0.0, 1.0, 1.3],
            [1.0, 1.5, 0.0, 1.64],
            [3.0, 1.0, 2.0, 0.0],
        ])
        .unwrap()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn pressure_and_influence_of_printed_matrix() {
        let k = printed_four_node_k();
        let p = pressure(&k).unwrap();
        let v = influence(&k).unwrap();
        assert!(close(&p.values, &[6.0, 4.1, 4.3, 5.34], 1e-12), "{:?}", p.values);
        assert!(close(&v.values, &[5.3, 4.3, 4.14, 6.0], 1e-12), "{:?}", v.values);
        // non-negative matrix: amplitudes coincide
        assert_eq!(amplitude_pressure(&k).unwrap().values, p.values);
        assert_eq!(amplitude_influence(&k).unwrap().values, v.values);
    }

    #[test]
    fn zero_matrix_measures() {
        let z = DenseMatrix::zeros(3, 3);
        assert_eq!(pressure(&z).unwrap().values, vec![0.0; 3]);
        assert_eq!(influence(&z).unwrap().values, vec![0.0; 3]);
        assert_eq!(rank_nodes(&pressure(&z).unwrap()), RankVector(vec![1, 2, 3]));
    }

    #[test]
    fn global_balance() {
        let k = printed_four_node_k();
        let total: f64 = k.as_slice().iter().sum();
        let sp: f64 = pressure(&k).unwrap().values.iter().sum();
        let sv: f64 = influence(&k).unwrap().values.iter().sum();
        assert!((sp - total).abs() < 1e-12 && (sv - total).abs() < 1e-12);
    }

    #[test]
    fn amplitude_examples() {
        let k = DenseMatrix::from_rows(&[[0.0, -2.0], [0.0, 0.0]]).unwrap();
        assert_eq!(pressure(&k).unwrap().values[1], -2.0);
        assert_eq!(amplitude_pressure(&k).unwrap().values[1], 2.0);

        let k = DenseMatrix::from_rows(&[[0.0, 0.0, 1.0], [0.0, 0.0, -1.0], [0.0, 0.0, 0.0]])
            .unwrap();
        assert_eq!(pressure(&k).unwrap().values[2], 0.0);
        assert_eq!(amplitude_pressure(&k).unwrap().values[2], 2.0);
    }

    #[test]
    fn non_square_rejected() {
        let m = DenseMatrix::zeros(2, 3);
        assert_eq!(
            pressure(&m),
            Err(RankError::NotSquare { rows: 2, cols: 3 })
        );
        assert!(element_ranking(&m).is_err());
    }

    #[test]
    fn ranking_examples() {
        assert_eq!(rank_values(&[3.0, 1.0, 2.0]), RankVector(vec![1, 3, 2]));
        assert_eq!(rank_values(&[0.0, 0.0, 1.0]), RankVector(vec![2, 3, 1]));
    }

    #[test]
    fn element_ranking_examples() {
        let k = printed_four_node_k();
        let r = element_ranking(&k).unwrap();
        assert_eq!((r[0].source, r[0].target, r[0].value), (3, 0, 3.0));
        assert_eq!((r[1].source, r[1].target, r[1].value), (0, 3, 2.4));
        assert_eq!(r.len(), 12);

        let single = DenseMatrix::from_rows(&[[0.0, 0.4], [0.0, 0.0]]).unwrap();
        assert_eq!(element_ranking(&single).unwrap().len(), 1);
    }

    #[test]
    fn correlation_examples() {
        let a = RankVector(vec![1, 2, 3, 4]);
        let c = rank_correlation(&a, &a).unwrap();
        assert_eq!((c.spearman, c.kendall), (1.0, 1.0));

        let rev = RankVector(vec![4, 3, 2, 1]);
        let c = rank_correlation(&a, &rev).unwrap();
        assert!((c.spearman + 1.0).abs() < 1e-12 && (c.kendall + 1.0).abs() < 1e-12);

        assert_eq!(
            rank_correlation(&a, &RankVector(vec![1, 2])),
            Err(RankError::LengthMismatch(4, 2))
        );
        assert_eq!(
            rank_correlation(&RankVector(vec![1]), &RankVector(vec![1])),
            Err(RankError::TooShort)
        );
    }

    #[test]
    fn table_rows_correlation() {
        let v = RankVector(vec![2, 9, 1, 4, 3, 5, 6, 8, 7]);
        let v_imp = RankVector(vec![2, 9, 1, 5, 8, 6, 7, 3, 4]);
        // independent recount of Σd² for permutations
        let d2: i64 = v
            .0
            .iter()
            .zip(&v_imp.0)
            .map(|(&x, &y)| (x as i64 - y as i64).pow(2))
            .sum();
        assert_eq!(d2, 62);
        let c = rank_correlation(&v, &v_imp).unwrap();
        let expected = 1.0 - 6.0 * 62.0 / (9.0 * 80.0);
        assert!((c.spearman - expected).abs() < 1e-12);
        assert!((c.spearman - 0.4833).abs() < 5e-5);
    }
}

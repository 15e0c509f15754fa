//! The impulse method: pulse propagation through the weight matrix and its
//! closed form `Ω = (I − W)^-1`.
//!
//! `W[(i, j)]` is the weight of edge `i → j`, so a pulse moves along edge
//! direction as `p(n) = Wᵀ·p(n−1)`. The steady state of the series is then
//! `V(∞) = V_init + Ωᵀ·p0`.

use serde::Serialize;
use thiserror::Error;

use crate::numerics::{invert, spectral_radius, DenseMatrix, NumericsError, SpectralEstimate};

/// Consecutive non-shrinking increments that mark a series as diverging.
pub const DIVERGENCE_WINDOW: usize = 10;

const RHO_TOL: f64 = 1e-10;
const RHO_MAX_ITER: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ImpulseError {
    #[error("I - W is singular; the impulse method has no closed form for this network")]
    Singular,
    #[error(transparent)]
    Numerics(NumericsError),
    #[error("node index {index} out of range for {n} nodes")]
    NodeOutOfRange { index: usize, n: usize },
}

impl From<NumericsError> for ImpulseError {
    fn from(e: NumericsError) -> Self {
        match e {
            NumericsError::Singular { .. } => ImpulseError::Singular,
            other => ImpulseError::Numerics(other),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImpulseTrajectory {
    /// `states[n] = V(n)` for `n = 0..=steps`.
    pub states: Vec<Vec<f64>>,
    pub p0: Vec<f64>,
    pub v_init: Vec<f64>,
    pub diverging: bool,
}

impl ImpulseTrajectory {
    pub fn last(&self) -> &[f64] {
        self.states.last().expect("at least V(0)")
    }
}

fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Propagates the pulse: `p(0) = p0`, `p(n) = Wᵀ·p(n−1)`, `V(0) = V_init + p0`,
/// `V(n) = V(n−1) + p(n)`.
///
/// `diverging` is set when the last [`DIVERGENCE_WINDOW`] increments
/// `‖V(n) − V(n−1)‖∞` never shrink and are nonzero, or when a state stops
/// being finite.
pub fn impulse_series(
    w: &DenseMatrix,
    p0: &[f64],
    v_init: &[f64],
    steps: usize,
) -> Result<ImpulseTrajectory, ImpulseError> {
    let n = w.rows();
    if !w.is_square() || p0.len() != n || v_init.len() != n {
        return Err(ImpulseError::Numerics(NumericsError::DimensionMismatch {
            expected: format!("{n}x{n} matrix with length-{n} vectors"),
            actual: format!(
                "{}x{} matrix, p0 of {}, V_init of {}",
                w.rows(),
                w.cols(),
                p0.len(),
                v_init.len()
            ),
        }));
    }
    let mut states = Vec::with_capacity(steps + 1);
    let mut v: Vec<f64> = v_init.iter().zip(p0).map(|(a, b)| a + b).collect();
    states.push(v.clone());
    let wt = w.transpose();
    let mut pulse = p0.to_vec();
    let mut increments = Vec::with_capacity(steps);
    for _ in 0..steps {
        pulse = wt.mul_vec(&pulse)?;
        for (vi, pi) in v.iter_mut().zip(&pulse) {
            *vi += pi;
        }
        increments.push(norm_inf(&pulse));
        states.push(v.clone());
    }

    let non_finite = states.iter().flatten().any(|x| !x.is_finite());
    let growing = increments.len() > DIVERGENCE_WINDOW && {
        let tail = &increments[increments.len() - DIVERGENCE_WINDOW - 1..];
        tail.windows(2).all(|d| d[1] >= d[0]) && tail[tail.len() - 1] > 0.0
    };
    Ok(ImpulseTrajectory {
        states,
        p0: p0.to_vec(),
        v_init: v_init.to_vec(),
        diverging: non_finite || growing,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImpulseResult {
    pub omega: DenseMatrix,
    pub rho: SpectralEstimate,
    /// The series converges (ρ(W) < 1); otherwise `omega` is only formal.
    pub converged: bool,
    pub psi_imp: Vec<f64>,
    pub v_imp: Vec<f64>,
}

/// `Ω = (I − W)^-1` with impulse pressure (column sums of Ω without the
/// diagonal) and impulse influence (row sums without the diagonal).
pub fn impulse_closed_form(w: &DenseMatrix) -> Result<ImpulseResult, ImpulseError> {
    let n = w.rows();
    let rho = spectral_radius(w, RHO_TOL, RHO_MAX_ITER)?;
    let omega = invert(&DenseMatrix::identity(n).sub(w)?)?;
    let psi_imp = (0..n)
        .map(|b| (0..n).filter(|&k| k != b).map(|k| omega[(k, b)]).sum())
        .collect();
    let v_imp = (0..n)
        .map(|a| (0..n).filter(|&k| k != a).map(|k| omega[(a, k)]).sum())
        .collect();
    Ok(ImpulseResult {
        converged: rho.rho < 1.0 && omega.is_finite(),
        omega,
        rho,
        psi_imp,
        v_imp,
    })
}

/// Impulse pressure on `beta` by direct simulation of the steady state:
/// unit impulses on every node except `beta`, propagated along edge
/// direction (`V = Ωᵀ·p0`), read off at `beta`.
pub fn impulse_pressure_single(omega: &DenseMatrix, beta: usize) -> Result<f64, ImpulseError> {
    let n = omega.rows();
    if beta >= n {
        return Err(ImpulseError::NodeOutOfRange { index: beta, n });
    }
    let mut p0 = vec![1.0; n];
    p0[beta] = 0.0;
    Ok(omega.transpose().mul_vec(&p0)?[beta])
}

/// Impulse influence of `alpha`: the response of `alpha` when every other
/// node is probed, `[Ω·(1 − e_alpha)]_alpha`.
pub fn impulse_influence_single(omega: &DenseMatrix, alpha: usize) -> Result<f64, ImpulseError> {
    let n = omega.rows();
    if alpha >= n {
        return Err(ImpulseError::NodeOutOfRange { index: alpha, n });
    }
    let mut p0 = vec![1.0; n];
    p0[alpha] = 0.0;
    Ok(omega.mul_vec(&p0)?[alpha])
}

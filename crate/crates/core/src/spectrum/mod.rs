//! First Dirichlet eigenvalue of the weighted p-Laplacian: the model problem
//! on `[0, D]`, an independent finite-difference oracle, radial estimates on
//! compact instances and the ladder of lower bounds.

pub mod fd;
pub mod ladder;
pub mod radial;
pub mod shooting;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use fd::{fd_eigenvalue_oracle, fd_solve, EndCondition, FdSolution};
pub use ladder::{
    ball_bound, bound_ladder, check_eigen_theorems, classify_equational_model, constant_bound, exponential_bound, kasue_estimate,
    model_bound, BoundLadder, EquationalModel, KasueReport, LadderEntry,
};
pub use radial::{radial_eigen_estimate, RADIAL_CELLS};
pub use shooting::model_eigenvalue;

use crate::comparison::ComparisonError;
use crate::geometry::{GeometryError, Topology};
use crate::model::{Dims, ModelError};
use crate::numeric::ode::OdeError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectrumError {
    #[error("p = {0} must lie in ]1,∞[")]
    InvalidExponent(f64),
    #[error("length D = {0} must be positive and finite")]
    InvalidLength(f64),
    #[error("D = {d} lies beyond C_{{κ,λ}} = {barrier}")]
    BeyondBarrier { d: f64, barrier: f64 },
    #[error("{method} did not converge within {iterations} iterations")]
    NoConvergence { method: &'static str, iterations: usize },
    #[error("eigenvalue estimates need a compact instance, found {0:?}")]
    NotCompact(Topology),
    #[error("interval [{a}, {b}] must lie strictly inside ]0, τ[ with τ = {tau}")]
    InvalidInterval { a: f64, b: f64, tau: f64 },
    #[error("the statement needs (κ,λ) to satisfy the {0}")]
    Condition(&'static str),
    #[error(transparent)]
    Ode(#[from] OdeError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Comparison(#[from] ComparisonError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenMethod {
    Shooting,
    FiniteDifference,
    RayleighGrid,
}

/// Coefficient `k` of the drift term `k 𝔰'/𝔰` in the model eigenvalue
/// equation, equivalently the exponent of the weight `𝔰^k`. The two choices
/// agree when `c⁻¹ = n - 1`, i.e. for `N ∈ {1, n}` or `ε = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OdeCoefficient {
    /// `k = n - 1`. Also accepted as `paper`.
    #[serde(rename = "n-minus-one", alias = "paper")]
    NMinusOne,
    /// `k = c⁻¹`, the exponent of the model volume element.
    #[default]
    Cinv,
}

impl OdeCoefficient {
    pub fn exponent(self, dims: &Dims) -> f64 {
        match self {
            OdeCoefficient::NMinusOne => dims.n_minus_1(),
            OdeCoefficient::Cinv => dims.cinv(),
        }
    }

    pub fn id(self) -> &'static str {
        match self {
            OdeCoefficient::NMinusOne => "n-minus-one",
            OdeCoefficient::Cinv => "cinv",
        }
    }
}

impl std::str::FromStr for OdeCoefficient {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "n-minus-one" | "paper" => Ok(OdeCoefficient::NMinusOne),
            "cinv" => Ok(OdeCoefficient::Cinv),
            other => Err(format!("unknown ODE coefficient mode {other:?}, expected n-minus-one (or paper) or cinv")),
        }
    }
}

/// A first eigenvalue with its eigenfunction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenResult {
    pub value: f64,
    pub method: EigenMethod,
    /// Shooting: the flux `|φ'|^{p-2}φ'` left at `D`. Finite differences:
    /// the relative change of the last iteration.
    pub residual: f64,
    /// Size of the last extrapolation correction.
    pub error_estimate: f64,
    /// False when the value is only an upper estimate of the infimum it
    /// stands for.
    pub exact: bool,
    /// Eigenfunction samples `(s, φ(s))`, normalized to `max φ = 1`.
    pub profile: Vec<(f64, f64)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

pub(crate) fn check_exponent(p: f64) -> Result<(), SpectrumError> {
    if p > 1.0 && p.is_finite() {
        Ok(())
    } else {
        Err(SpectrumError::InvalidExponent(p))
    }
}

/// `sign(x)|x|^e`.
pub(crate) fn signed_pow(x: f64, e: f64) -> f64 {
    x.signum() * x.abs().powf(e)
}

/// Keep at most `max` evenly spaced entries, always including the last.
pub(crate) fn thin<T: Copy>(v: &[T], max: usize) -> Vec<T> {
    if v.len() <= max || max < 2 {
        return v.to_vec();
    }
    let step = (v.len() - 1) as f64 / (max - 1) as f64;
    (0..max).map(|i| v[((i as f64 * step).round() as usize).min(v.len() - 1)]).collect()
}

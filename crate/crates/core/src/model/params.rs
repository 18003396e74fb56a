//! Admissible `(n, N, ε)` triples and the constant `c`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::ext::ExtReal;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParamError {
    #[error("dimension n = {0} must be at least 2")]
    DimensionTooSmall(usize),
    #[error("N in ]1,n[ forbidden (n = {n}, N = {big_n})")]
    ForbiddenN { n: usize, big_n: f64 },
    #[error("ε must be finite, got {0}")]
    NonFiniteEpsilon(f64),
    #[error("ε must be 0 when N = 1, got {0}")]
    EpsilonForNOne(f64),
    #[error("ε = {eps} outside the open range ]-{bound},{bound}[ for n = {n}, N = {big_n}")]
    EpsilonOutOfRange { eps: f64, bound: f64, n: usize, big_n: ExtReal },
    #[error("{name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },
}

/// Which of the three structural regimes of `N` the triple falls into.
/// They differ in how the density enters the rigidity metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `N = n`: the density must be constant.
    DimensionEqual,
    /// `N ∉ {1, n}`.
    Generic,
    /// `N = 1`: forces `ε = 0`.
    One,
}

/// A validated `(n, N, ε)` triple with its derived constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Dims {
    pub n: usize,
    pub big_n: ExtReal,
    pub eps: f64,
    /// `(N-1)/(N-n)`, present only in the generic regime (1 for `N = +∞`).
    pub eps0: Option<f64>,
    pub c: f64,
    pub regime: Regime,
}

/// Check `(n, N, ε)` against the ε-range and compute `ε₀` and `c`.
pub fn validate_params(n: usize, big_n: ExtReal, eps: f64) -> Result<Dims, ParamError> {
    if n < 2 {
        return Err(ParamError::DimensionTooSmall(n));
    }
    if !eps.is_finite() {
        return Err(ParamError::NonFiniteEpsilon(eps));
    }
    let nf = n as f64;
    let m = nf - 1.0;
    let regime = match big_n {
        ExtReal::Finite(x) if !x.is_finite() => return Err(ParamError::NonFinite { name: "N", value: x }),
        ExtReal::Finite(x) if x > 1.0 && x < nf => return Err(ParamError::ForbiddenN { n, big_n: x }),
        ExtReal::Finite(x) if x == 1.0 => Regime::One,
        ExtReal::Finite(x) if x == nf => Regime::DimensionEqual,
        _ => Regime::Generic,
    };
    match regime {
        Regime::One => {
            if eps != 0.0 {
                return Err(ParamError::EpsilonForNOne(eps));
            }
            Ok(Dims { n, big_n, eps, eps0: None, c: 1.0 / m, regime })
        }
        Regime::DimensionEqual => Ok(Dims { n, big_n, eps, eps0: None, c: 1.0 / m, regime }),
        Regime::Generic => {
            let (eps0, k) = match big_n {
                ExtReal::PosInf => (1.0, 1.0),
                ExtReal::Finite(x) => ((x - 1.0) / (x - nf), (x - nf) / (x - 1.0)),
            };
            let bound = eps0.sqrt();
            if eps.abs() >= bound {
                return Err(ParamError::EpsilonOutOfRange { eps, bound, n, big_n });
            }
            let c = (1.0 - eps * eps * k) / m;
            Ok(Dims { n, big_n, eps, eps0: Some(eps0), c, regime })
        }
    }
}

impl Dims {
    pub fn cinv(&self) -> f64 {
        1.0 / self.c
    }

    pub fn n_minus_1(&self) -> f64 {
        self.n as f64 - 1.0
    }

    /// Exponent rate `2(1-ε)/(n-1)`: the density enters every bound as
    /// `e^{-a f}`.
    pub fn a(&self) -> f64 {
        2.0 * (1.0 - self.eps) / self.n_minus_1()
    }

    /// `(N-n)/(N-1)`, which is 1 at `N = +∞` and 0 at `N = n`. `None` for `N = 1`.
    pub fn k(&self) -> Option<f64> {
        match (self.regime, self.big_n) {
            (Regime::One, _) => None,
            (Regime::DimensionEqual, _) => Some(0.0),
            (_, ExtReal::PosInf) => Some(1.0),
            (_, ExtReal::Finite(x)) => Some((x - self.n as f64) / (x - 1.0)),
        }
    }

    /// Coefficient of `df⊗df` in the weighted Ricci tensor, `1/(N-n)`.
    /// `None` when `N = n` (only constant densities are allowed there).
    pub fn df2_coeff(&self) -> Option<f64> {
        match (self.regime, self.big_n) {
            (Regime::DimensionEqual, _) => None,
            (_, ExtReal::PosInf) => Some(0.0),
            (_, ExtReal::Finite(x)) => Some(1.0 / (x - self.n as f64)),
        }
    }
}

/// `(n, N, ε)` together with the curvature scales `κ`, `λ` and an optional
/// density bound `δ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureParams {
    pub dims: Dims,
    pub kappa: f64,
    pub lambda: f64,
    pub delta: Option<f64>,
}

impl CurvatureParams {
    pub fn new(dims: Dims, kappa: f64, lambda: f64, delta: Option<f64>) -> Result<Self, ParamError> {
        for (name, value) in [("κ", kappa), ("λ", lambda), ("δ", delta.unwrap_or(0.0))] {
            if !value.is_finite() {
                return Err(ParamError::NonFinite { name, value });
            }
        }
        Ok(Self { dims, kappa, lambda, delta })
    }
}

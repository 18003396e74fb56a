//! Hypothesis certificates and pointwise verification of the comparison
//! inequalities on warped-product instances.
//!
//! Every check takes [`Hypotheses`] obtained from
//! [`certify_hypotheses`], so the constants it is checked against are ones
//! the instance provably satisfies on the sampling grid.

pub mod certificate;
pub mod laplacian;
pub mod radii;
pub mod report;
pub mod volume;

use thiserror::Error;

pub use certificate::{certify_hypotheses, HypothesisCertificate, Hypotheses};
pub use laplacian::{check_bounded_density, check_boundary_laplacian, check_p_laplacian, check_point_laplacian, check_riccati};
pub use radii::{check_cut_bounds, check_inradius, check_splitting_model, check_two_boundary_distance, SplittingSetup};
pub use report::{classify, run_refined, CheckOptions, ComparisonReport, Constants, Rigidity, Sample, Statement, Verdict};
pub use volume::{check_volume_comparisons, check_volume_elements};

use crate::geometry::{Component, GeometryError, Topology, WarpedManifold};
use crate::model::{barrier_c, ModelError, Regime};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ComparisonError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("requested {what} = {requested} is not implied by the certified value {certified}")]
    NotCertified { what: &'static str, requested: f64, certified: f64 },
    #[error("instance dimension {manifold} differs from parameter dimension {params}")]
    DimensionMismatch { manifold: usize, params: usize },
    #[error("the statement needs a boundary mean-curvature constant λ")]
    MissingLambda,
    #[error("p = {0} must lie in ]1,∞[")]
    InvalidExponent(f64),
    #[error("ψ must be increasing: ψ'({at}) = {slope}")]
    NonIncreasingPsi { at: f64, slope: f64 },
    #[error("radii must satisfy 0 < r ≤ R, got r = {r}, R = {big_r}")]
    InvalidRadii { r: f64, big_r: f64 },
    #[error("splitting case {case:?} does not match the parameter regime {regime:?}")]
    CaseMismatch { case: Regime, regime: Regime },
    #[error("splitting models need κ ≤ 0, got κ = {0}")]
    PositiveKappa(f64),
}

/// Label separating the components of a two-ended instance.
pub(crate) fn component_label(m: &WarpedManifold, comp: Component) -> Option<&'static str> {
    match (m.topology, comp) {
        (Topology::TwoEnded, Component::Inner) => Some("inner"),
        (Topology::TwoEnded, Component::Outer) => Some("outer"),
        _ => None,
    }
}

/// `base` or `base:component`.
pub(crate) fn part_name(base: &str, label: Option<&str>) -> String {
    match label {
        Some(l) => format!("{base}:{l}"),
        None => base.to_owned(),
    }
}

/// Largest usable argument of `H_{κ,λ}`: `C_{κ,λ}` minus the exclusion zone.
pub(crate) fn barrier_cap(kappa: f64, lambda: f64, exclusion: f64) -> f64 {
    match barrier_c(kappa, lambda).finite() {
        Some(c) => c - exclusion * c.max(1.0),
        None => f64::INFINITY,
    }
}

//! Warped-product test manifolds `dt² + w(t)² g_F` with radial density
//! `f = φ(t)`, their weighted geometry, and the equality metrics.

pub mod equality;
pub mod evaluators;
pub mod expr;
pub mod frame;
pub mod manifold;
pub mod profile;

use thiserror::Error;

pub use equality::{
    build_equality_model, build_model_ball, build_model_collar, build_model_cylinder, mirror_collar, EqualityModel, Extent,
};
pub use evaluators::{
    boundary_measure, fiber_ricci, inradius, inradius_conformal, inradius_f, laplacian_distance, laplacian_distance_point,
    p_laplacian_radial, radial_ricci, reparam_s, reparam_t, tau_f, theta_f, theta_hat, tube_volume, weighted_mean_curvature,
    Radius,
};
pub use expr::{Expr, ExprError};
pub use frame::GeodesicFrame;
pub use manifold::{Component, Fiber, Topology, View, WarpedManifold};
pub use profile::{Curve, RadialProfile};

use crate::model::{ModelError, ParamError};
use crate::numeric::ode::OdeError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("{what} undefined at {t}: {reason}")]
    Domain { what: &'static str, t: f64, reason: &'static str },
    #[error("N = n requires a constant density")]
    NonConstantDensity,
    #[error("instance has no boundary")]
    NoBoundary,
    #[error("instance has no {0:?} boundary component")]
    NoSuchComponent(Component),
    #[error("operation needs topology {expected}, found {found:?}")]
    WrongTopology { expected: &'static str, found: Topology },
    #[error("(κ,λ) = ({kappa},{lambda}) does not satisfy the ball condition")]
    NotBall { kappa: f64, lambda: f64 },
    #[error("s = {s} reaches the barrier C_{{κ,λ}} = {barrier}")]
    BarrierExceeded { s: f64, barrier: f64 },
    #[error("construction error: {0}")]
    Construction(String),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("ODE integration failed: {0}")]
    Ode(#[from] OdeError),
}

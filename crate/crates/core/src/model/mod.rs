//! Parameter algebra and closed-form model functions of the space forms.

pub mod ext;
pub mod functions;
pub mod params;
pub mod volume;

use thiserror::Error;

pub use ext::ExtReal;
pub use functions::{
    barrier_c, barrier_c_bisect, barrier_d, barrier_d_bisect, classify_pair, h_boundary, h_boundary_deriv, h_point,
    sn_boundary, sn_boundary_logderiv, sn_point, ModelPair,
};
pub use params::{validate_params, CurvatureParams, Dims, ParamError, Regime};
pub use volume::{s_volume, sn_power, spectrum_constant, tail_ratio, tail_ratio_sup};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("{what} undefined at {arg}: {reason}")]
    Domain { what: &'static str, arg: f64, reason: &'static str },
}

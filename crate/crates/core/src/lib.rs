//! Numerical verification of comparison geometry for weighted manifolds with
//! boundary under ε-range curvature bounds.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`]: parameter validation, the comparison functions `𝔰_{κ,λ}`,
//!   `H_{κ,λ}` and their barriers.
//! * [`geometry`]: warped products `dt² + w(t)² g_F` with radial density,
//!   their weighted curvature and Laplacian evaluators, and the equality
//!   metrics.
//! * [`comparison`]: hypothesis certificates and pointwise checks of each
//!   comparison inequality.
//! * [`spectrum`]: the model p-Laplacian eigenvalue, an independent finite
//!   difference oracle and the eigenvalue lower-bound ladder.
//! * [`scenario`]: JSON scenarios, randomized suites and report tables.

pub mod comparison;
pub mod geometry;
pub mod model;
pub mod numeric;
pub mod scenario;
pub mod spectrum;

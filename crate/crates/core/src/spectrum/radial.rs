//! Radial Rayleigh-quotient minimization on compact warped-product instances.

use super::fd::{extrapolated, EndCondition};
use super::{check_exponent, EigenMethod, EigenResult, SpectrumError};
use crate::geometry::{Topology, WarpedManifold};

/// Cells of the coarse mesh; the fine mesh has twice as many.
pub const RADIAL_CELLS: usize = 2000;

/// Estimate of `ν_{αf,p}(M) = inf R_{αf,p}` over radial functions vanishing
/// on `∂M`, with 1-D weight `e^{-αφ(t)} w(t)^{n-1}`.
///
/// A ball closes smoothly at its apex (natural condition there); a
/// two-ended instance carries Dirichlet conditions at both ends. For `p = 2`
/// the radial value is the eigenvalue itself because non-radial fiber modes
/// only add to the quotient; for `p ≠ 2` the result is flagged as an upper
/// estimate.
pub fn radial_eigen_estimate(m: &WarpedManifold, p: f64, alpha: f64) -> Result<EigenResult, SpectrumError> {
    check_exponent(p)?;
    let end = match m.topology {
        Topology::BallApex => EndCondition::Natural,
        Topology::TwoEnded => EndCondition::Dirichlet,
        other => return Err(SpectrumError::NotCompact(other)),
    };
    let k = m.n as i32 - 1;
    let (w0, phi0) = (m.profile.w.value(0.0), m.profile.phi.value(0.0));
    // Normalized at t = 0; constant factors cancel in the quotient.
    let weight = |t: f64| (-alpha * (m.profile.phi.value(t) - phi0)).exp() * (m.profile.w.value(t) / w0).max(0.0).powi(k);
    let mut r = extrapolated(p, &weight, m.t_max(), RADIAL_CELLS, end)?;
    r.method = EigenMethod::RayleighGrid;
    if p != 2.0 {
        r.exact = false;
        r.notes.push("radial minimization: upper estimate of the infimum over all test functions".to_owned());
    }
    Ok(r)
}

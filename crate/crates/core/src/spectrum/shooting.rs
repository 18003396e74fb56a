//! Model eigenvalue `ν_{p,κ,λ,D}` by shooting.
//!
//! With `v = |φ'|^{p-2}φ'` the equation
//! `v' + k (𝔰'/𝔰) v + ν |φ|^{p-2}φ = 0`, `φ(0) = 0`, `φ'(D) = 0`
//! becomes the regular first-order system
//! `φ' = sign(v)|v|^{1/(p-1)}`, `v' = -k(𝔰'/𝔰)v - ν sign(φ)|φ|^{p-1}`.
//! For `ν` below the ground state `v` stays positive on `[0, D]`; above it
//! `v` vanishes before `D`. The eigenvalue is the bisection point.

use super::{check_exponent, signed_pow, thin, EigenMethod, EigenResult, SpectrumError};
use crate::model::{barrier_c, sn_boundary_logderiv};
use crate::numeric::ode::{integrate, Flow, OdeOptions};

const ODE: OdeOptions = OdeOptions { rtol: 1e-12, atol: 1e-14, h_init: 1e-6, h_max: f64::INFINITY, max_steps: 400_000 };
/// Relative bisection width.
const WIDTH: f64 = 1e-13;
/// Distance from `C_{κ,λ}` at which a singular endpoint is replaced by a
/// Neumann condition, relative to `max(1, C)`.
const SINGULAR_GAP: f64 = 1e-6;
const PROFILE_POINTS: usize = 257;

struct Problem {
    p: f64,
    k: f64,
    kappa: f64,
    lambda: f64,
}

impl Problem {
    fn rhs(&self, nu: f64) -> impl Fn(f64, &[f64; 2]) -> [f64; 2] + '_ {
        let q = 1.0 / (self.p - 1.0);
        move |s, y| {
            let drift = if self.k == 0.0 { 0.0 } else { self.k * sn_boundary_logderiv(self.kappa, self.lambda, s) * y[1] };
            [signed_pow(y[1], q), -drift - nu * signed_pow(y[0], self.p - 1.0)]
        }
    }

    /// True when `v` vanishes somewhere in `]0, end]`.
    fn overshoots(&self, nu: f64, end: f64) -> Result<bool, SpectrumError> {
        let out = integrate(self.rhs(nu), 0.0, [0.0, 1.0], end, ODE, |_, y| if y[1] <= 0.0 { Flow::Stop } else { Flow::Continue })?;
        Ok(out.stopped)
    }

    /// Ground-state eigenvalue of the Neumann problem on `[0, end]`.
    fn bisect(&self, end: f64) -> Result<f64, SpectrumError> {
        let mut lo = 0.0;
        let mut hi = self.p * (std::f64::consts::PI / end).powf(self.p);
        let mut grown = 0;
        while !self.overshoots(hi, end)? {
            lo = hi;
            hi *= 2.0;
            grown += 1;
            if grown > 200 {
                return Err(SpectrumError::NoConvergence { method: "shooting bracket", iterations: grown });
            }
        }
        let mut iterations = 0;
        while hi - lo > WIDTH * hi {
            let mid = 0.5 * (lo + hi);
            if self.overshoots(mid, end)? {
                hi = mid;
            } else {
                lo = mid;
            }
            iterations += 1;
            if iterations > 400 {
                return Err(SpectrumError::NoConvergence { method: "shooting bisection", iterations });
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Integrate at `nu` to `end`, returning the final flux and the
    /// normalized eigenfunction samples.
    fn profile(&self, nu: f64, end: f64) -> Result<(f64, Vec<(f64, f64)>), SpectrumError> {
        let mut nodes = Vec::new();
        let out = integrate(self.rhs(nu), 0.0, [0.0, 1.0], end, ODE, |s, y| {
            nodes.push((s, y[0]));
            Flow::Continue
        })?;
        let top = nodes.iter().map(|n| n.1).fold(0.0, f64::max);
        let scaled: Vec<(f64, f64)> = nodes.iter().map(|&(s, y)| (s, if top > 0.0 { y / top } else { y })).collect();
        Ok((out.y[1], thin(&scaled, PROFILE_POINTS)))
    }
}

/// First eigenvalue of
/// `(|φ'|^{p-2}φ')' + k (𝔰'_{κ,λ}/𝔰_{κ,λ}) |φ'|^{p-2}φ' + ν|φ|^{p-2}φ = 0`
/// on `[0, D]` with `φ(0) = 0`, `φ'(D) = 0`.
///
/// `k` is the drift coefficient (see [`super::OdeCoefficient`]). When `D`
/// equals `C_{κ,λ}` the coefficient is singular at `D`: the Neumann
/// condition is imposed at `D - g` for `g = 10⁻⁶·max(1, C)` and `2g`, and
/// the value is extrapolated in `g`.
pub fn model_eigenvalue(p: f64, k: f64, kappa: f64, lambda: f64, d: f64) -> Result<EigenResult, SpectrumError> {
    check_exponent(p)?;
    if !(d > 0.0) || !d.is_finite() {
        return Err(SpectrumError::InvalidLength(d));
    }
    let prob = Problem { p, k, kappa, lambda };
    let barrier = barrier_c(kappa, lambda).finite();
    let singular = match barrier {
        Some(c) if d > c * (1.0 + 1e-12) => return Err(SpectrumError::BeyondBarrier { d, barrier: c }),
        Some(c) => (c - d).abs() <= 1e-9 * c.max(1.0),
        None => false,
    };
    if !singular {
        let nu = prob.bisect(d)?;
        let (flux, profile) = prob.profile(nu, d)?;
        return Ok(EigenResult {
            value: nu,
            method: EigenMethod::Shooting,
            residual: flux.abs(),
            error_estimate: WIDTH * nu,
            exact: true,
            profile,
            notes: Vec::new(),
        });
    }
    let c = barrier.unwrap_or(d);
    let g = SINGULAR_GAP * c.max(1.0);
    let (nu1, nu2) = (prob.bisect(c - g)?, prob.bisect(c - 2.0 * g)?);
    // The truncated region carries weight of order g^{k+1}.
    let factor = 2f64.powf(k + 1.0) - 1.0;
    let nu = nu1 + (nu1 - nu2) / factor;
    let (flux, profile) = prob.profile(nu1, c - g)?;
    Ok(EigenResult {
        value: nu,
        method: EigenMethod::Shooting,
        residual: flux.abs(),
        error_estimate: (nu1 - nu2).abs(),
        exact: true,
        profile,
        notes: vec![format!("singular coefficient at D = C = {c}: Neumann condition imposed at C - {g:e} and extrapolated")],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn flat_problem_closed_forms() {
        let r = model_eigenvalue(2.0, 2.0, 0.0, 0.0, PI / 2.0).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10, "{}", r.value);
        let r = model_eigenvalue(2.0, 1.0, 0.0, 0.0, 1.0).unwrap();
        assert!((r.value - PI * PI / 4.0).abs() < 1e-9);
        assert!(r.residual < 1e-9);
        assert!(r.profile.iter().skip(1).all(|&(_, y)| y > 0.0));
    }

    #[test]
    fn generalized_sine_for_p3() {
        let p = 3.0;
        let pi_p = 2.0 * PI / (p * (PI / p).sin());
        let exact = (p - 1.0) * (pi_p / 2.0).powf(p);
        let r = model_eigenvalue(p, 2.0, 0.0, 0.0, 1.0).unwrap();
        assert!((r.value - exact).abs() < 1e-8 * exact, "{} {exact}", r.value);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(model_eigenvalue(1.0, 1.0, 0.0, 0.0, 1.0), Err(SpectrumError::InvalidExponent(_))));
        assert!(matches!(model_eigenvalue(2.0, 1.0, 0.0, 1.0, 1.5), Err(SpectrumError::BeyondBarrier { .. })));
        assert!(matches!(model_eigenvalue(2.0, 1.0, 0.0, 0.0, 0.0), Err(SpectrumError::InvalidLength(_))));
    }
}

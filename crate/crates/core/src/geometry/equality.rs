//! Metrics realizing equality in the boundary Laplacian comparison, and the
//! model balls `B^n_{κ,λ}`.
//!
//! In every regime the reparametrization `s(t)` solves
//! `s' = e^{-2(1-ε)f/(n-1)}`, `s(0) = 0`:
//!
//! * `N = n`: `f ≡ f0`, so `s = e^{-af0} t` and `w = 𝔰_{κ,λ}(s)`.
//! * `N ∉ {1, n}`: `f = f0 - εkc⁻¹ log 𝔰_{κ,λ}(s)` with `k = (N-n)/(N-1)`,
//!   hence the autonomous ODE `s' = e^{-af0} 𝔰(s)^{aεkc⁻¹}`, and
//!   `w = 𝔰(s)^{c⁻¹(1-εk)/(n-1)}`.
//! * `N = 1` (`ε = 0`): `f` is free, `s = ∫ e^{-af}` and
//!   `w = e^{(f-f0)/(n-1)} 𝔰(s)`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::expr::Expr;
use super::manifold::{Fiber, Topology, WarpedManifold};
use super::profile::{Curve, RadialProfile};
use super::GeometryError;
use crate::model::{barrier_c, barrier_d, classify_pair, sn_boundary, Dims, Regime};
use crate::numeric::ode::{DenseScalar, OdeOptions};
use crate::numeric::roots::bisect;
use crate::numeric::Jet;

/// How far along the model the equality metric is built.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Extent {
    /// Radial length `T` in the metric `g`.
    Length { t: f64 },
    /// Stop where `s(T) = fraction · C_{κ,λ}` (ball pairs only).
    SFraction { fraction: f64 },
    /// Stop just short of `C_{κ,λ}` (ball pairs only).
    ToBarrier,
}

/// Gap kept from `C_{κ,λ}`, in `s`.
pub fn barrier_margin(c_barrier: f64) -> f64 {
    1e-8 * c_barrier.max(1.0)
}

/// An equality metric together with its reparametrization.
#[derive(Clone)]
pub struct EqualityModel {
    pub manifold: WarpedManifold,
    pub regime: Regime,
    pub kappa: f64,
    pub lambda: f64,
    pub f0: f64,
    pub t_end: f64,
    pub s_end: f64,
    s_of_t: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl std::fmt::Debug for EqualityModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EqualityModel")
            .field("regime", &self.regime)
            .field("kappa", &self.kappa)
            .field("lambda", &self.lambda)
            .field("t_end", &self.t_end)
            .field("s_end", &self.s_end)
            .finish()
    }
}

impl EqualityModel {
    /// The builder's own `s(t)`.
    pub fn s_at(&self, t: f64) -> f64 {
        (self.s_of_t)(t)
    }
}

const ODE: OdeOptions = OdeOptions { rtol: 1e-12, atol: 1e-14, h_init: 1e-4, h_max: f64::INFINITY, max_steps: 400_000 };

/// Target `s` for an extent, or `None` when only a length is given.
fn target_s(extent: Extent, kappa: f64, lambda: f64) -> Result<Option<f64>, GeometryError> {
    let cb = barrier_c(kappa, lambda).finite();
    match (extent, cb) {
        (Extent::Length { t }, _) => {
            if !(t > 0.0) || !t.is_finite() {
                return Err(GeometryError::Construction(format!("length must be positive and finite, got {t}")));
            }
            Ok(None)
        }
        (Extent::SFraction { fraction }, Some(c)) => {
            if !(fraction > 0.0 && fraction < 1.0) {
                return Err(GeometryError::Construction(format!("fraction must lie in ]0,1[, got {fraction}")));
            }
            Ok(Some(fraction * c))
        }
        (Extent::ToBarrier, Some(c)) => Ok(Some(c - barrier_margin(c))),
        (_, None) => Err(GeometryError::Construction(format!(
            "(κ,λ) = ({kappa},{lambda}) has no barrier; give an explicit length"
        ))),
    }
}

/// Solve `s' = g(t, s)` up to either length `T` or the first `t` where
/// `s = s_target`. Returns the dense solution and `(T, s(T))`.
fn solve_reparam<G>(g: G, extent: Extent, s_target: Option<f64>, c_barrier: Option<f64>) -> Result<(Arc<DenseScalar>, f64, f64), GeometryError>
where
    G: Fn(f64, f64) -> f64 + Send + Sync + 'static,
{
    let limit = c_barrier.map(|c| c - barrier_margin(c));
    let stop_at = s_target.or(limit).unwrap_or(f64::INFINITY);
    let t_cap = match extent {
        Extent::Length { t } => t,
        _ => 1e6,
    };
    let sol = DenseScalar::solve(g, 0.0, 0.0, t_cap, ODE, |_, s| s >= stop_at)?;
    let (ts, ss) = sol.nodes();
    let (t_last, s_last) = (*ts.last().expect("nodes"), *ss.last().expect("nodes"));
    if s_last < stop_at {
        if s_target.is_some() {
            return Err(GeometryError::Construction(format!("s only reached {s_last} by t = {t_last}")));
        }
        return Ok((Arc::new(sol), t_last, s_last));
    }
    if s_target.is_none() {
        return Err(GeometryError::BarrierExceeded { s: s_last, barrier: c_barrier.unwrap_or(f64::INFINITY) });
    }
    let t_prev = if ts.len() >= 2 { ts[ts.len() - 2] } else { 0.0 };
    let t_end = bisect(|t| sol.eval(t) - stop_at, t_prev, t_last, 1e-14).unwrap_or(t_last);
    let s_end = sol.eval(t_end);
    Ok((Arc::new(sol), t_end, s_end))
}

/// Jet of `𝔰_{κ,λ}(s(t))` given `s, s', s''`.
fn sn_of(kappa: f64, lambda: f64, s: Jet) -> Jet {
    let (v, d) = sn_boundary(kappa, lambda, s.v);
    Jet::new(v, d * s.d1, -kappa * v * s.d1 * s.d1 + d * s.d2)
}

/// Build the equality metric for the given regime.
///
/// `density` is only used for `N = 1`, where the density is free; it then
/// determines `f0 = f(0)` and the `f0` argument is ignored.
#[allow(clippy::too_many_arguments)]
pub fn build_equality_model(
    regime: Regime,
    dims: &Dims,
    kappa: f64,
    lambda: f64,
    fiber: Fiber,
    f0: f64,
    extent: Extent,
    density: Option<Expr>,
) -> Result<EqualityModel, GeometryError> {
    if dims.regime != regime {
        return Err(GeometryError::Construction(format!("parameters are in regime {:?}, not {:?}", dims.regime, regime)));
    }
    if density.is_some() && regime != Regime::One {
        return Err(GeometryError::Construction("a free density is only allowed when N = 1".into()));
    }
    let n = dims.n;
    let m1 = dims.n_minus_1();
    let a = dims.a();
    let cinv = dims.cinv();
    let c_barrier = barrier_c(kappa, lambda).finite();
    let s_target = target_s(extent, kappa, lambda)?;

    let (w, phi, t_end, s_end, f0, s_of_t): (Curve, Curve, f64, f64, f64, Arc<dyn Fn(f64) -> f64 + Send + Sync>) =
        match regime {
            Regime::DimensionEqual => {
                let sigma = (-a * f0).exp();
                let t_end = match (extent, s_target) {
                    (Extent::Length { t }, _) => t,
                    (_, Some(s)) => s / sigma,
                    _ => unreachable!("target_s rejects other combinations"),
                };
                let s_end = sigma * t_end;
                if let Some(cb) = c_barrier {
                    if s_end > cb - barrier_margin(cb) * (1.0 - 1e-9) {
                        return Err(GeometryError::BarrierExceeded { s: s_end, barrier: cb });
                    }
                }
                (
                    Curve::Sn { kappa, lambda, scale: sigma },
                    Curve::constant(f0),
                    t_end,
                    s_end,
                    f0,
                    Arc::new(move |t| sigma * t),
                )
            }
            Regime::Generic => {
                let k = dims.k().expect("generic regime has k");
                let eps = dims.eps;
                let gamma = a * eps * k * cinv;
                let beta = cinv * (1.0 - eps * k) / m1;
                let sigma = (-a * f0).exp();
                let log_coeff = eps * k * cinv;
                if gamma == 0.0 {
                    let t_end = match (extent, s_target) {
                        (Extent::Length { t }, _) => t,
                        (_, Some(s)) => s / sigma,
                        _ => unreachable!("target_s rejects other combinations"),
                    };
                    let s_end = sigma * t_end;
                    if let Some(cb) = c_barrier {
                        if s_end > cb - barrier_margin(cb) * (1.0 - 1e-9) {
                            return Err(GeometryError::BarrierExceeded { s: s_end, barrier: cb });
                        }
                    }
                    let w = Curve::custom(format!("sn[{kappa},{lambda}]({sigma}*t)^{beta}"), move |t| {
                        sn_of(kappa, lambda, Jet::new(sigma * t, sigma, 0.0)).powf(beta)
                    });
                    // γ = 0 with ε ≠ 0 happens at ε = 1, where a = 0 but f still varies.
                    let phi = if log_coeff == 0.0 {
                        Curve::constant(f0)
                    } else {
                        Curve::custom(format!("{f0} - {log_coeff}·log 𝔰(t)"), move |t| {
                            Jet::constant(f0) - sn_of(kappa, lambda, Jet::new(sigma * t, sigma, 0.0)).ln() * log_coeff
                        })
                    };
                    (w, phi, t_end, s_end, f0, Arc::new(move |t| sigma * t))
                } else {
                    let rhs = move |_: f64, s: f64| {
                        let v = sn_boundary(kappa, lambda, s).0;
                        if v > 0.0 {
                            sigma * v.powf(gamma)
                        } else {
                            f64::NAN
                        }
                    };
                    let (sol, t_end, s_end) = solve_reparam(rhs, extent, s_target, c_barrier)?;
                    let s_jet = {
                        let sol = sol.clone();
                        move |t: f64| {
                            let s = sol.eval(t);
                            let (v, d) = sn_boundary(kappa, lambda, s);
                            let s1 = sigma * v.powf(gamma);
                            let s2 = sigma * gamma * v.powf(gamma - 1.0) * d * s1;
                            Jet::new(s, s1, s2)
                        }
                    };
                    let sj = s_jet.clone();
                    let w = Curve::custom(format!("equality warp N≠1,n (β = {beta})"), move |t| {
                        sn_of(kappa, lambda, sj(t)).powf(beta)
                    });
                    let sj = s_jet.clone();
                    let phi = Curve::custom(format!("{f0} - {log_coeff}·log 𝔰(s)"), move |t| {
                        Jet::constant(f0) - sn_of(kappa, lambda, sj(t)).ln() * log_coeff
                    });
                    let sol2 = sol.clone();
                    (w, phi, t_end, s_end, f0, Arc::new(move |t| sol2.eval(t)))
                }
            }
            Regime::One => {
                let phi_expr = density.unwrap_or_else(|| Expr::constant(f0));
                let f0 = phi_expr.value(0.0);
                let pe = phi_expr.clone();
                let rhs = move |t: f64, _s: f64| (-a * pe.value(t)).exp();
                let (sol, t_end, s_end) = solve_reparam(rhs, extent, s_target, c_barrier)?;
                let pe = phi_expr.clone();
                let s2 = sol.clone();
                let w = Curve::custom(format!("e^(({phi_expr}) - f0)/(n-1))·𝔰(s)"), move |t| {
                    let p = pe.jet(t);
                    let e = (-p * a).exp();
                    let s = Jet::new(s2.eval(t), e.v, e.d1);
                    ((p + (-f0)) * (1.0 / m1)).exp() * sn_of(kappa, lambda, s)
                });
                let sol2 = sol.clone();
                (w, Curve::Expr(phi_expr), t_end, s_end, f0, Arc::new(move |t| sol2.eval(t)))
            }
        };

    let profile = RadialProfile::new(w, phi, t_end)?;
    let manifold = WarpedManifold::new(n, fiber, profile, Topology::Collar)?;
    Ok(EqualityModel { manifold, regime, kappa, lambda, f0, t_end, s_end, s_of_t })
}

/// Independent reference for the `N ∉ {1, n}` reparametrization:
/// `t(s) = e^{af0} ∫₀^s 𝔰^{-γ}`, inverted by bisection.
pub fn generic_s_reference(dims: &Dims, kappa: f64, lambda: f64, f0: f64, t: f64, s_hi: f64) -> f64 {
    let k = dims.k().unwrap_or(0.0);
    let gamma = dims.a() * dims.eps * k * dims.cinv();
    let scale = (dims.a() * f0).exp();
    let t_of = |s: f64| {
        scale
            * crate::numeric::quad::quad(|x| sn_boundary(kappa, lambda, x).0.powf(-gamma), 0.0, s, 1e-14)
    };
    bisect(|s| t_of(s) - t, 0.0, s_hi, 1e-15).unwrap_or(s_hi)
}

/// The closed ball `B^n_{κ,λ}`: `w = 𝔰_{κ,λ}`, `f ≡ 0`, radius `C_{κ,λ}`,
/// over a round sphere of curvature `λ² + κ` so the apex is smooth.
pub fn build_model_ball(n: usize, kappa: f64, lambda: f64) -> Result<WarpedManifold, GeometryError> {
    let pair = classify_pair(kappa, lambda);
    let cb = match (pair.ball, pair.c.finite()) {
        (true, Some(c)) => c,
        _ => return Err(GeometryError::NotBall { kappa, lambda }),
    };
    let profile = RadialProfile::new(Curve::Sn { kappa, lambda, scale: 1.0 }, Curve::constant(0.0), cb)?;
    WarpedManifold::new(n, Fiber::Sphere { curvature: lambda * lambda + kappa }, profile, Topology::BallApex)
}

/// The collar `{ρ < T}` inside `B^n_{κ,λ}` for `T < C_{κ,λ}`, or the
/// corresponding collar of a non-ball pair.
pub fn build_model_collar(n: usize, kappa: f64, lambda: f64, t: f64, fiber: Fiber) -> Result<WarpedManifold, GeometryError> {
    if let Some(cb) = barrier_c(kappa, lambda).finite() {
        if t >= cb {
            return Err(GeometryError::BarrierExceeded { s: t, barrier: cb });
        }
    }
    let profile = RadialProfile::new(Curve::Sn { kappa, lambda, scale: 1.0 }, Curve::constant(0.0), t)?;
    WarpedManifold::new(n, fiber, profile, Topology::Collar)
}

/// Close a collar `[0, T]` into the two-ended instance `[0, 2T]` by
/// reflecting `w` and `φ` across `t = T`. The result is `C²` when
/// `w'(T) = φ'(T) = 0`, as at `s = D_{κ,λ}` on an equality metric.
pub fn mirror_collar(m: &WarpedManifold) -> Result<WarpedManifold, GeometryError> {
    if m.topology != Topology::Collar {
        return Err(GeometryError::WrongTopology { expected: "collar", found: m.topology });
    }
    let half = m.t_max();
    let reflect = |c: Curve| {
        let label = format!("mirror[{}]", c.describe());
        Curve::custom(label, move |t| {
            if t <= half {
                c.jet(t)
            } else {
                let j = c.jet(2.0 * half - t);
                Jet::new(j.v, -j.d1, j.d2)
            }
        })
    };
    let profile = RadialProfile::new(reflect(m.profile.w.clone()), reflect(m.profile.phi.clone()), 2.0 * half)?;
    WarpedManifold::new(m.n, m.fiber, profile, Topology::TwoEnded)
}

/// The warped cylinder `[0, 2D_{κ,λ}] × F` with warping `𝔰_{κ,λ}` mirrored
/// at `D_{κ,λ}` and `f ≡ 0`, for a model-condition pair with finite
/// `D_{κ,λ}`.
pub fn build_model_cylinder(n: usize, kappa: f64, lambda: f64, fiber: Fiber) -> Result<WarpedManifold, GeometryError> {
    let d = match (classify_pair(kappa, lambda).model, barrier_d(kappa, lambda).finite()) {
        (true, Some(d)) => d,
        _ => {
            return Err(GeometryError::Construction(format!(
                "(κ,λ) = ({kappa},{lambda}) has no finite critical point of 𝔰_{{κ,λ}}"
            )))
        }
    };
    mirror_collar(&build_model_collar(n, kappa, lambda, d, fiber)?)
}

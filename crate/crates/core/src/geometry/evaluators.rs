//! Weighted curvature, Laplacians, reparametrizations and volumes on
//! warped products.
//!
//! Sign conventions: `Δ = -div ∘ grad`, and the inner unit normal at a
//! boundary component is `+∂_t` in that component's [`View`]. With these the
//! boundary of a model ball has mean curvature `+(n-1)λ`.

use serde::{Deserialize, Serialize};

use super::manifold::{Component, Topology, View, WarpedManifold};
use super::GeometryError;
use crate::model::Dims;
use crate::numeric::quad::{integrate, QuadOptions};
use crate::numeric::roots::bisect;
use crate::numeric::Jet;

pub(crate) const QUAD: QuadOptions = QuadOptions { abs_tol: 1e-12, rel_tol: 1e-12, max_panels: 4000 };

fn domain(what: &'static str, t: f64, reason: &'static str) -> GeometryError {
    GeometryError::Domain { what, t, reason }
}

fn check_open(what: &'static str, t: f64, hi: f64) -> Result<(), GeometryError> {
    if !(t > 0.0) {
        return Err(domain(what, t, "t must be positive"));
    }
    if t > hi * (1.0 + 1e-12) {
        return Err(domain(what, t, "t beyond the cut value"));
    }
    Ok(())
}

fn check_density(view: &View, dims: &Dims, phi: Jet) -> Result<Option<f64>, GeometryError> {
    match dims.df2_coeff() {
        Some(k) => Ok(Some(k)),
        None if view.m.profile.phi.is_constant() || (phi.d1 == 0.0 && phi.d2 == 0.0) => Ok(None),
        None => Err(GeometryError::NonConstantDensity),
    }
}

/// `Ric_f^N(∂_t, ∂_t) = -(n-1) w''/w + φ'' - φ'²/(N-n)`.
pub fn radial_ricci(view: &View, dims: &Dims, t: f64) -> Result<f64, GeometryError> {
    let (w, phi) = view.jets(t);
    let m = view.n() as f64 - 1.0;
    let base = -m * w.d2 / w.v + phi.d2;
    Ok(match check_density(view, dims, phi)? {
        Some(k) => base - k * phi.d1 * phi.d1,
        None => base,
    })
}

/// `Ric_f^N(X, X)` for a unit vector `X` tangent to the fiber, when the
/// fiber's Einstein constant is known.
pub fn fiber_ricci(view: &View, dims: &Dims, t: f64) -> Result<Option<f64>, GeometryError> {
    let (w, phi) = view.jets(t);
    check_density(view, dims, phi)?;
    let n = view.n() as f64;
    Ok(view.m.fiber.ricci(view.n()).map(|rho| {
        let r = w.d1 / w.v;
        rho / (w.v * w.v) - w.d2 / w.v - (n - 2.0) * r * r + phi.d1 * r
    }))
}

/// `H_{f,z} = H_z + g(∇f, u_z)` at a boundary component.
pub fn weighted_mean_curvature(m: &WarpedManifold, component: Component) -> Result<f64, GeometryError> {
    let v = m.view(component)?;
    let (w, phi) = v.jets(0.0);
    Ok(-(m.n as f64 - 1.0) * w.d1 / w.v + phi.d1)
}

/// Same as [`laplacian_distance`] on an explicit view, without the domain check.
pub fn laplacian_at(view: &View, t: f64) -> f64 {
    let (w, phi) = view.jets(t);
    -(view.n() as f64 - 1.0) * w.d1 / w.v + phi.d1
}

/// `Δ_f ρ_{∂M}` at distance `t` from the inner component.
pub fn laplacian_distance(m: &WarpedManifold, t: f64) -> Result<f64, GeometryError> {
    let v = m.view(Component::Inner)?;
    check_open("Δ_f ρ_{∂M}", t, v.tau)?;
    Ok(laplacian_at(&v, t))
}

/// `Δ_f ρ_x` at distance `t` from the pole of a point-symmetric instance.
pub fn laplacian_distance_point(m: &WarpedManifold, t: f64) -> Result<f64, GeometryError> {
    let v = m.pole_view()?;
    check_open("Δ_f ρ_x", t, v.tau)?;
    Ok(laplacian_at(&v, t))
}

/// `Δ_{f,p}` with density weight `b·f` applied to `ψ(t)`:
/// `-[((ψ')^{p-1})' + (ψ')^{p-1}((n-1)w'/w - bφ')]`.
pub fn p_laplacian_at(view: &View, p: f64, b: f64, psi: Jet, t: f64) -> Result<f64, GeometryError> {
    if !(psi.d1 > 0.0) {
        return Err(domain("Δ_{f,p}", t, "ψ' must be positive"));
    }
    let (w, phi) = view.jets(t);
    let v = psi.d1.powf(p - 1.0);
    let dv = (p - 1.0) * psi.d1.powf(p - 2.0) * psi.d2;
    Ok(-(dv + v * ((view.n() as f64 - 1.0) * w.d1 / w.v - b * phi.d1)))
}

/// `Δ_{f,p}(ψ ∘ ρ_{∂M})` at distance `t` from the inner component.
pub fn p_laplacian_radial(m: &WarpedManifold, p: f64, psi: &dyn Fn(f64) -> Jet, t: f64) -> Result<f64, GeometryError> {
    if !(p > 1.0) {
        return Err(domain("Δ_{f,p}", p, "p must exceed 1"));
    }
    let v = m.view(Component::Inner)?;
    check_open("Δ_{f,p}", t, v.tau)?;
    p_laplacian_at(&v, p, 1.0, psi(t), t)
}

/// `s(t) = ∫₀ᵗ e^{-a φ}` along a view, with `a = 2(1-ε)/(n-1)`.
pub fn reparam_s_at(view: &View, a: f64, t: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    integrate(|x| (-a * view.jets(x).1.v).exp(), 0.0, t, QUAD).value
}

/// Inverse of [`reparam_s_at`] by bisection on `[0, T]`.
pub fn reparam_t_at(view: &View, a: f64, s: f64) -> Result<f64, GeometryError> {
    if s <= 0.0 {
        return Ok(0.0);
    }
    let t_max = view.m.t_max();
    if s > reparam_s_at(view, a, t_max) * (1.0 + 1e-12) {
        return Err(domain("t_{f,z}", s, "s beyond the radial extent"));
    }
    Ok(bisect(|t| reparam_s_at(view, a, t) - s, 0.0, t_max, 1e-13).unwrap_or(t_max))
}

pub fn reparam_s(m: &WarpedManifold, dims: &Dims, t: f64) -> Result<f64, GeometryError> {
    let v = m.view(Component::Inner)?;
    Ok(reparam_s_at(&v, dims.a(), t))
}

pub fn reparam_t(m: &WarpedManifold, dims: &Dims, s: f64) -> Result<f64, GeometryError> {
    let v = m.view(Component::Inner)?;
    reparam_t_at(&v, dims.a(), s)
}

/// `θ_f(t) = e^{-φ(t)} (w(t)/w(0))^{n-1}`.
pub fn theta_at(view: &View, t: f64) -> f64 {
    let (w, phi) = view.jets(t);
    (-phi.v).exp() * (w.v / view.w0()).max(0.0).powi(view.n() as i32 - 1)
}

pub fn theta_f(m: &WarpedManifold, t: f64) -> Result<f64, GeometryError> {
    let v = m.view(Component::Inner)?;
    check_open("θ_f", t, v.tau)?;
    Ok(theta_at(&v, t))
}

/// `θ̂_f(s) = θ_f(t_{f,z}(s))`.
pub fn theta_hat(m: &WarpedManifold, dims: &Dims, s: f64) -> Result<f64, GeometryError> {
    let v = m.view(Component::Inner)?;
    let t = reparam_t_at(&v, dims.a(), s)?;
    check_open("θ̂_f", t, v.tau)?;
    Ok(theta_at(&v, t))
}

/// Which radius a tube is measured in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Radius {
    /// `B_r(∂M) = {ρ_{∂M} < r}`.
    Distance,
    /// `B^f_r(∂M) = {ρ_{∂M,f} < r}`.
    Reparametrized,
}

/// `m_{αf}` of the tube of radius `r` around `∂M`, summed over components.
pub fn tube_volume(m: &WarpedManifold, dims: &Dims, alpha: f64, r: f64, radius: Radius) -> Result<f64, GeometryError> {
    if !(r > 0.0) {
        return Err(domain("tube volume", r, "r must be positive"));
    }
    let mut total = 0.0;
    for comp in m.components() {
        let v = m.view(comp)?;
        let t_r = match radius {
            Radius::Distance => r.min(v.tau),
            Radius::Reparametrized => {
                let s_tau = reparam_s_at(&v, dims.a(), v.tau);
                if r >= s_tau {
                    v.tau
                } else {
                    reparam_t_at(&v, dims.a(), r)?
                }
            }
        };
        total += m.component_area(comp)? * tube_integral(&v, alpha, 0.0, t_r);
    }
    Ok(total)
}

/// `∫_{t0}^{t1} e^{-αφ} (w/w(0))^{n-1} dt` along a view.
pub fn tube_integral(view: &View, alpha: f64, t0: f64, t1: f64) -> f64 {
    let w0 = view.w0();
    let k = view.n() as i32 - 1;
    integrate(
        |t| {
            let (w, phi) = view.jets(t);
            (-alpha * phi.v).exp() * (w.v / w0).max(0.0).powi(k)
        },
        t0,
        t1,
        QUAD,
    )
    .value
}

/// `m_{f,∂M}(∂M)`: boundary area weighted by `e^{-f}`.
pub fn boundary_measure(m: &WarpedManifold) -> Result<f64, GeometryError> {
    if m.topology == Topology::PointSymmetric {
        return Err(GeometryError::NoBoundary);
    }
    let mut total = 0.0;
    for comp in m.components() {
        let v = m.view(comp)?;
        total += (-v.phi0()).exp() * m.component_area(comp)?;
    }
    Ok(total)
}

/// `InRad M = sup ρ_{∂M}`.
pub fn inradius(m: &WarpedManifold) -> Result<f64, GeometryError> {
    if m.topology == Topology::PointSymmetric {
        return Err(GeometryError::NoBoundary);
    }
    Ok(m.tau())
}

/// `τ_f(z) = s_{f,z}(τ(z))` for one component.
pub fn tau_f(m: &WarpedManifold, dims: &Dims, comp: Component) -> Result<f64, GeometryError> {
    let v = m.view(comp)?;
    Ok(reparam_s_at(&v, dims.a(), v.tau))
}

/// `InRad_f M = sup ρ_{∂M,f}`, the largest `τ_f` over components.
pub fn inradius_f(m: &WarpedManifold, dims: &Dims) -> Result<f64, GeometryError> {
    if m.topology == Topology::PointSymmetric {
        return Err(GeometryError::NoBoundary);
    }
    let mut best: f64 = 0.0;
    for comp in m.components() {
        best = best.max(tau_f(m, dims, comp)?);
    }
    Ok(best)
}

/// Inscribed radius for the conformal metric `g_f = e^{-2aφ} g` (with
/// `a = 2(1-ε)/(n-1)`). Radial curves are `g_f`-minimizing on these
/// symmetric instances, so the distance to a component is `s_{f,z}`; on a
/// two-ended instance the point where both distances agree is found by
/// bisection.
pub fn inradius_conformal(m: &WarpedManifold, dims: &Dims) -> Result<f64, GeometryError> {
    let a = dims.a();
    match m.topology {
        Topology::PointSymmetric => Err(GeometryError::NoBoundary),
        Topology::TwoEnded => {
            let inner = m.view(Component::Inner)?;
            let t_max = m.t_max();
            let gap = |t: f64| reparam_s_at(&inner, a, t) - (reparam_s_at(&inner, a, t_max) - reparam_s_at(&inner, a, t));
            let t = bisect(gap, 0.0, t_max, 1e-13).unwrap_or(0.5 * t_max);
            Ok(reparam_s_at(&inner, a, t))
        }
        _ => {
            let v = m.view(Component::Inner)?;
            Ok(reparam_s_at(&v, a, v.tau))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::manifold::Fiber;
    use crate::geometry::profile::{Curve, RadialProfile};
    use crate::model::{sn_boundary, validate_params, ExtReal};

    fn inst(w: &str, phi: &str, t: f64, top: Topology) -> WarpedManifold {
        let p = RadialProfile::new(Curve::parse(w).unwrap(), Curve::parse(phi).unwrap(), t).unwrap();
        WarpedManifold::new(3, Fiber::Torus { volume: 2.0 }, p, top).unwrap()
    }

    fn dims(big_n: f64, eps: f64) -> Dims {
        validate_params(3, ExtReal::Finite(big_n), eps).unwrap()
    }

    #[test]
    fn ricci_examples() {
        let d = validate_params(3, ExtReal::PosInf, 0.0).unwrap();
        let cyl = inst("1", "0", 1.0, Topology::Collar);
        let v = cyl.view(Component::Inner).unwrap();
        assert_eq!(radial_ricci(&v, &d, 0.5).unwrap(), 0.0);
        let m = inst("1", "t^2", 1.0, Topology::Collar);
        let v = m.view(Component::Inner).unwrap();
        assert_eq!(radial_ricci(&v, &d, 0.5).unwrap(), 2.0);
        assert!(radial_ricci(&v, &dims(3.0, 0.0), 0.5).is_err());
    }

    #[test]
    fn mean_curvature_signs() {
        let m = inst("1", "0.7*t", 2.0, Topology::TwoEnded);
        assert!((weighted_mean_curvature(&m, Component::Inner).unwrap() - 0.7).abs() < 1e-15);
        assert!((weighted_mean_curvature(&m, Component::Outer).unwrap() + 0.7).abs() < 1e-15);
        let ball = inst("1 - t", "0", 1.0, Topology::BallApex);
        assert!((weighted_mean_curvature(&ball, Component::Inner).unwrap() - 2.0).abs() < 1e-15);
        assert!(weighted_mean_curvature(&ball, Component::Outer).is_err());
    }

    #[test]
    fn laplacians() {
        let e = inst("t", "t^2", 1.0, Topology::PointSymmetric);
        assert!((laplacian_distance_point(&e, 0.5).unwrap() - (-4.0 + 1.0)).abs() < 1e-14);
        let m = inst("exp(0.2*t)", "sin(t)", 1.0, Topology::Collar);
        for &t in &[0.1, 0.5, 0.9] {
            let l = laplacian_distance(&m, t).unwrap();
            let p = p_laplacian_radial(&m, 2.0, &Jet::var, t).unwrap();
            assert!((l - p).abs() < 1e-14);
        }
        assert!(laplacian_distance(&m, 1.5).is_err());
        let flat = inst("1", "0", 1.0, Topology::Collar);
        assert_eq!(p_laplacian_radial(&flat, 3.0, &Jet::var, 0.3).unwrap(), 0.0);
        assert!(p_laplacian_radial(&flat, 3.0, &|t| -Jet::var(t), 0.3).is_err());
    }

    #[test]
    fn reparametrization() {
        let d = dims(1.0, 0.0);
        let m = inst("1", "t", 3.0, Topology::Collar);
        for &t in &[0.2, 1.0, 2.5] {
            let s = reparam_s(&m, &d, t).unwrap();
            assert!((s - (1.0 - (-t).exp())).abs() < 1e-12);
            assert!((reparam_t(&m, &d, s).unwrap() - t).abs() < 1e-10);
        }
        let d = dims(5.0, 0.5);
        let delta: f64 = 0.3;
        let phi = format!("{}", 2.0 * delta / (1.0 - 0.5));
        let m = inst("1", &phi, 2.0, Topology::Collar);
        assert!((inradius_f(&m, &d).unwrap() - (-2.0 * delta).exp() * 2.0).abs() < 1e-12);
    }

    #[test]
    fn volumes_and_measures() {
        let d = dims(1.0, 0.0);
        let cyl = inst("1", "0", 3.0, Topology::Collar);
        assert!((tube_volume(&cyl, &d, 1.0, 1.2, Radius::Distance).unwrap() - 2.4).abs() < 1e-12);
        assert!((boundary_measure(&cyl).unwrap() - 2.0).abs() < 1e-15);
        let shifted = inst("1", "log(2)", 3.0, Topology::Collar);
        assert!((boundary_measure(&shifted).unwrap() - 1.0).abs() < 1e-15);
        let two = inst("1", "0", 2.0, Topology::TwoEnded);
        assert!((boundary_measure(&two).unwrap() - 4.0).abs() < 1e-15);
        assert!((inradius(&two).unwrap() - 1.0).abs() < 1e-15);
        assert!((theta_f(&inst("1", "t", 3.0, Topology::Collar), 0.7).unwrap() - (-0.7f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn tube_volume_against_riemann_sum() {
        let d = dims(5.0, 0.3);
        let m = inst("exp(0.3*t - 0.2*t^2)", "0.4*t^3 - 0.1*t", 1.5, Topology::Collar);
        let v = m.view(Component::Inner).unwrap();
        let r = 1.1;
        let got = tube_volume(&m, &d, 1.0, r, Radius::Distance).unwrap();
        let steps = 1_000_000;
        let h = r / steps as f64;
        let sum: f64 = (0..steps).map(|i| theta_at(&v, (i as f64 + 0.5) * h)).sum::<f64>() * h;
        let expect = sum * m.component_area(Component::Inner).unwrap();
        assert!(((got - expect) / expect).abs() < 1e-7);
    }

    #[test]
    fn conformal_inradius_two_ended() {
        let d = dims(1.0, 0.0);
        let m = inst("1", "0", 2.0, Topology::TwoEnded);
        assert!((inradius_conformal(&m, &d).unwrap() - 1.0).abs() < 1e-12);
        let lopsided = inst("1", "t", 2.0, Topology::TwoEnded);
        let r = inradius_conformal(&lopsided, &d).unwrap();
        // s(t) = 1 - e^{-t}; total 1 - e^{-2}; meeting point halves the total.
        assert!((r - 0.5 * (1.0 - (-2f64).exp())).abs() < 1e-10);
    }

    #[test]
    fn model_ball_theta() {
        let (k, l) = (1.0, 0.5);
        let cb = crate::model::barrier_c(k, l).as_f64();
        let p = RadialProfile::new(Curve::Sn { kappa: k, lambda: l, scale: 1.0 }, Curve::constant(0.0), cb).unwrap();
        let m = WarpedManifold::new(3, Fiber::Sphere { curvature: k + l * l }, p, Topology::BallApex).unwrap();
        let t = 0.4;
        assert!((theta_f(&m, t).unwrap() - sn_boundary(k, l, t).0.powi(2)).abs() < 1e-14);
    }
}

//! Cut-value and inscribed-radius bounds, the two-boundary distance bound and
//! the splitting models, with their rigidity metrics.

use serde::{Deserialize, Serialize};

use super::certificate::{certify_hypotheses, Hypotheses};
use super::laplacian::boundary_samples;
use super::report::{CheckOptions, ComparisonReport, Constants, Rigidity, Sample, Statement};
use super::{component_label, part_name, ComparisonError};
use crate::geometry::equality::generic_s_reference;
use crate::geometry::evaluators::{inradius, inradius_conformal, tau_f};
use crate::geometry::{build_equality_model, Component, Expr, Extent, Fiber, GeodesicFrame, Topology, WarpedManifold};
use crate::model::{barrier_c, barrier_d, classify_pair, sn_boundary, sn_point, Dims, Regime};
use crate::numeric::linspace;
use crate::numeric::quad::quad;

/// Tolerance on rigidity metrics.
pub const RIGIDITY_TOL: f64 = 1e-6;
const RIGIDITY_POINTS: usize = 256;

fn constants(h: &Hypotheses) -> Constants {
    Constants { kappa: h.kappa, lambda: h.lambda, delta: Some(h.delta) }
}

fn ball_or_skip(h: &Hypotheses, statement: Statement, opts: &CheckOptions) -> Result<Result<f64, ComparisonReport>, ComparisonError> {
    let lambda = h.lambda.ok_or(ComparisonError::MissingLambda)?;
    if classify_pair(h.kappa, lambda).ball {
        Ok(Ok(lambda))
    } else {
        Ok(Err(ComparisonReport::skipped(
            statement,
            constants(h),
            opts.tol,
            format!("(κ,λ) = ({}, {lambda}) does not satisfy the ball condition", h.kappa),
        )))
    }
}

/// `τ_f(z) ≤ C_{κ,λ}` (part `tau-f`) and `τ(z) ≤ C_{κe^{-4δ},λe^{-2δ}}` (part
/// `tau`) on every boundary component.
pub fn check_cut_bounds(m: &WarpedManifold, h: &Hypotheses, opts: &CheckOptions) -> Result<ComparisonReport, ComparisonError> {
    let lambda = match ball_or_skip(h, Statement::CutBound, opts)? {
        Ok(l) => l,
        Err(r) => return Ok(r),
    };
    let (ks, ls) = h.rescaled(lambda);
    let c = barrier_c(h.kappa, lambda).as_f64();
    let c_scaled = barrier_c(ks, ls).as_f64();
    let mut samples = Vec::new();
    for comp in m.components() {
        let label = component_label(m, comp);
        let view = m.view(comp)?;
        samples.push(Sample::le(Some(&part_name("tau-f", label)), 0.0, tau_f(m, &h.dims, comp)?, c));
        samples.push(Sample::le(Some(&part_name("tau", label)), 0.0, view.tau, c_scaled));
    }
    Ok(ComparisonReport::from_samples(Statement::CutBound, constants(h), samples, opts.tol, 1, false))
}

/// Largest deviation of `w/√K` from `form(r)` in geodesic polar
/// coordinates around the apex of a ball instance (fiber curvature `K`).
fn apex_deviation(m: &WarpedManifold, form: impl Fn(f64) -> f64) -> f64 {
    let curvature = match (m.topology, m.fiber) {
        (Topology::BallApex, Fiber::Sphere { curvature }) => curvature,
        _ => return f64::INFINITY,
    };
    let t_max = m.t_max();
    linspace(0.0, t_max, RIGIDITY_POINTS)
        .into_iter()
        .skip(1)
        .map(|r| (m.profile.w.value(t_max - r) / curvature.sqrt() - form(r)).abs())
        .fold(0.0, f64::max)
}

fn max_over_t(m: &WarpedManifold, f: impl Fn(f64) -> f64) -> f64 {
    linspace(0.0, m.t_max(), RIGIDITY_POINTS).into_iter().map(|t| f(t).abs()).fold(0.0, f64::max)
}

/// Rigidity metric for `InRad_{g_f} M = C_{κ,λ}`, in polar coordinates
/// around the apex `x0`.
fn conformal_rigidity(m: &WarpedManifold, dims: &Dims, kappa: f64) -> Rigidity {
    let t_max = m.t_max();
    let phi = |t: f64| m.profile.phi.value(t);
    let phi_x0 = phi(t_max);
    let nm1 = dims.n_minus_1();
    match dims.regime {
        Regime::DimensionEqual | Regime::Generic => {
            if dims.regime == Regime::Generic && dims.eps != 0.0 {
                return Rigidity::new("ball around x0 (N ≠ 1,n forces ε = 0)", f64::INFINITY, RIGIDITY_TOL);
            }
            let ks = kappa * (-2.0 * dims.a() * phi_x0).exp();
            let shape = apex_deviation(m, |r| sn_point(ks, r).0);
            let constant = max_over_t(m, |t| phi(t) - phi_x0);
            Rigidity::new("ball around x0 with constant density", shape.max(constant), RIGIDITY_TOL)
        }
        Regime::One => {
            let a = dims.a();
            let s_of = |r: f64| quad(|u| (-a * phi(t_max - u)).exp(), 0.0, r, 1e-13);
            let shape = apex_deviation(m, |r| ((phi(t_max - r) + phi_x0) / nm1).exp() * sn_point(kappa, s_of(r)).0);
            Rigidity::new("ball around x0 with radial density", shape, RIGIDITY_TOL)
        }
    }
}

/// Rigidity metric for `InRad M = C_{κe^{-4δ},λe^{-2δ}}`: constant density
/// at the bound and an isometric model ball.
fn bounded_rigidity(m: &WarpedManifold, dims: &Dims, delta: f64, ks: f64, ls: f64) -> Rigidity {
    if dims.regime != Regime::DimensionEqual && dims.eps != 0.0 {
        return Rigidity::new("model ball (N ≠ n forces ε = 0)", f64::INFINITY, RIGIDITY_TOL);
    }
    let density = max_over_t(m, |t| (1.0 - dims.eps) * m.profile.phi.value(t) - dims.n_minus_1() * delta);
    let shape = match m.fiber {
        Fiber::Sphere { curvature } => {
            let k_model = (ls * ls + ks).sqrt();
            max_over_t(m, |t| m.profile.w.value(t) / curvature.sqrt() - sn_boundary(ks, ls, t).0 / k_model)
        }
        _ => f64::INFINITY,
    };
    Rigidity::new("model ball with (1-ε)f = (n-1)δ", density.max(shape), RIGIDITY_TOL)
}

/// `InRad_{g_f} M ≤ C_{κ,λ}` (part `conformal`) and
/// `InRad M ≤ C_{κe^{-4δ},λe^{-2δ}}` (part `bounded`); equality cases are
/// compared with their rigidity metrics.
pub fn check_inradius(m: &WarpedManifold, h: &Hypotheses, opts: &CheckOptions) -> Result<ComparisonReport, ComparisonError> {
    let lambda = match ball_or_skip(h, Statement::Inradius, opts)? {
        Ok(l) => l,
        Err(r) => return Ok(r),
    };
    let (ks, ls) = h.rescaled(lambda);
    let c = barrier_c(h.kappa, lambda).as_f64();
    let c_scaled = barrier_c(ks, ls).as_f64();
    let conformal = Sample::le(Some("conformal"), 0.0, inradius_conformal(m, &h.dims)?, c);
    let bounded = Sample::le(Some("bounded"), 0.0, inradius(m)?, c_scaled);
    let mut rigidity = Vec::new();
    if conformal.margin.abs() <= opts.tol {
        rigidity.push(conformal_rigidity(m, &h.dims, h.kappa));
    }
    if bounded.margin.abs() <= opts.tol {
        rigidity.push(bounded_rigidity(m, &h.dims, h.delta, ks, ls));
    }
    let mut rep = ComparisonReport::from_samples(Statement::Inradius, constants(h), vec![conformal, bounded], opts.tol, 1, false);
    rep.rigidity = rigidity;
    Ok(rep)
}

/// On a two-ended instance with `κ > 0`: `λ < 0` (part `lambda-sign`) and
/// `d(∂M₁, ∂M₂) ≤ 2D_{κe^{-4δ},λe^{-2δ}}` (part `distance`).
pub fn check_two_boundary_distance(m: &WarpedManifold, h: &Hypotheses, opts: &CheckOptions) -> Result<ComparisonReport, ComparisonError> {
    if m.topology != Topology::TwoEnded {
        return Err(crate::geometry::GeometryError::WrongTopology { expected: "two_ended", found: m.topology }.into());
    }
    let lambda = h.lambda.ok_or(ComparisonError::MissingLambda)?;
    if !(h.kappa > 0.0) {
        return Ok(ComparisonReport::skipped(
            Statement::TwoBoundaryDistance,
            constants(h),
            opts.tol,
            format!("κ = {} is not positive", h.kappa),
        ));
    }
    let (ks, ls) = h.rescaled(lambda);
    let mut samples = vec![Sample::le(Some("lambda-sign"), 0.0, lambda, 0.0)];
    let mut rep_notes = Vec::new();
    let mut rigidity = Vec::new();
    match barrier_d(ks, ls).finite() {
        Some(d) => {
            let dist = Sample::le(Some("distance"), 0.0, m.t_max(), 2.0 * d);
            if dist.margin.abs() <= opts.tol {
                let dims = &h.dims;
                let density = max_over_t(m, |t| (1.0 - dims.eps) * m.profile.phi.value(t) - dims.n_minus_1() * h.delta);
                let w0 = m.profile.w.value(0.0);
                let shape = max_over_t(m, |t| m.profile.w.value(t) - w0 * sn_boundary(ks, ls, t).0);
                rigidity.push(Rigidity::new("product over ∂M₁ with (1-ε)f = (n-1)δ", density.max(shape), RIGIDITY_TOL));
            }
            samples.push(dist);
        }
        None => rep_notes.push("D_{κe^{-4δ},λe^{-2δ}} is infinite; distance bound vacuous".to_owned()),
    }
    let mut rep = ComparisonReport::from_samples(Statement::TwoBoundaryDistance, constants(h), samples, opts.tol, 1, false);
    rep.notes = rep_notes;
    rep.rigidity = rigidity;
    Ok(rep)
}

/// Parameters of the half-infinite splitting models, built on the
/// truncations `[0, T]` for each `T` in `lengths`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplittingSetup {
    pub case: Regime,
    pub kappa: f64,
    #[serde(default)]
    pub f0: f64,
    pub lengths: Vec<f64>,
    /// Density for `N = 1`; defaults to `0.25·sin(t)`.
    #[serde(default)]
    pub density: Option<Expr>,
    pub fiber: Fiber,
}

/// Build the splitting model with `λ = √|κ|` for increasing truncation
/// lengths and certify that hypotheses, Laplacian comparison and the
/// metric (and, for `N ∉ {1, n}`, the density formula) hold with equality.
pub fn check_splitting_model(dims: &Dims, setup: &SplittingSetup, opts: &CheckOptions) -> Result<ComparisonReport, ComparisonError> {
    let kappa = setup.kappa;
    if kappa > 0.0 {
        return Err(ComparisonError::PositiveKappa(kappa));
    }
    if setup.case != dims.regime {
        return Err(ComparisonError::CaseMismatch { case: setup.case, regime: dims.regime });
    }
    let lambda = (-kappa).sqrt();
    let density = match (&setup.density, dims.regime) {
        (Some(e), _) => Some(e.clone()),
        (None, Regime::One) => Some(Expr::parse("0.25*sin(t)").expect("literal expression")),
        (None, _) => None,
    };
    let a = dims.a();
    let nm1 = dims.n_minus_1();
    let mut samples = Vec::new();
    let mut density_dev: f64 = 0.0;
    let mut metric_dev: f64 = 0.0;
    for &t_len in &setup.lengths {
        let eq = build_equality_model(dims.regime, dims, kappa, lambda, setup.fiber, setup.f0, Extent::Length { t: t_len }, density.clone())?;
        let m = &eq.manifold;
        let label = format!("T={t_len}");
        let label = Some(label.as_str());
        let cert = certify_hypotheses(m, dims, opts.points)?;
        let ricci = part_name("ricci", label);
        for (t, margin) in cert.grid.iter().zip(&cert.ricci_margins) {
            samples.push(Sample::identity(Some(&ricci), *t, cert.kappa_eff + margin, kappa));
        }
        let lam = cert.lambda_eff.ok_or(ComparisonError::MissingLambda)?;
        samples.push(Sample::identity(Some(&part_name("mean-curvature", label)), 0.0, lam, lambda));
        let view = m.view(Component::Inner)?;
        samples.extend(boundary_samples(&view, dims, kappa, lambda, opts.points, opts.exclusion, label)?);

        let phi = |t: f64| m.profile.phi.value(t);
        let w = |t: f64| m.profile.w.value(t);
        let (phi0, w0) = (phi(0.0), w(0.0));
        let frame = GeodesicFrame::build(&view, a, 0.0, eq.t_end, 64);
        let metric = part_name("metric", label);
        for (i, &t) in frame.ts.iter().enumerate() {
            let expected = match dims.regime {
                Regime::DimensionEqual => {
                    let sigma = (-a * phi0).exp();
                    w0 * sn_boundary(kappa * sigma * sigma, lambda * sigma, t).0
                }
                Regime::Generic => {
                    let k = dims.k().unwrap_or(0.0);
                    let s_ref = generic_s_reference(dims, kappa, lambda, phi0, t, eq.s_end * (1.0 + 1e-6) + 1e-9);
                    let formula = phi0 - dims.eps * k * dims.cinv() * sn_boundary(kappa, lambda, s_ref).0.ln();
                    let dev = (phi(t) - formula).abs();
                    density_dev = density_dev.max(dev);
                    samples.push(Sample::identity(Some(&part_name("density", label)), t, phi(t), formula));
                    let beta = dims.cinv() * (1.0 - dims.eps * k) / nm1;
                    w0 * sn_boundary(kappa, lambda, s_ref).0.powf(beta)
                }
                Regime::One => w0 * ((phi(t) - phi0) / nm1).exp() * sn_boundary(kappa, lambda, frame.ss[i]).0,
            };
            metric_dev = metric_dev.max((w(t) - expected).abs());
            samples.push(Sample::identity(Some(&metric), t, w(t), expected));
            if dims.regime == Regime::DimensionEqual {
                samples.push(Sample::identity(Some(&part_name("constant-density", label)), t, phi(t), phi0));
            }
        }
        // The builder's own reparametrization against the quadrature one.
        let s_dev = frame.ts.iter().zip(&frame.ss).map(|(&t, &s)| (eq.s_at(t) - s).abs()).fold(0.0, f64::max);
        metric_dev = metric_dev.max(s_dev);
    }
    let constants = Constants { kappa, lambda: Some(lambda), delta: None };
    let mut rep = ComparisonReport::from_samples(Statement::SplittingModel, constants, samples, opts.tol, opts.points, false);
    rep.rigidity.push(Rigidity::new("splitting metric", metric_dev, RIGIDITY_TOL));
    if dims.regime == Regime::Generic {
        rep.rigidity.push(Rigidity::new("density formula", density_dev, 1e-8));
    }
    Ok(rep)
}

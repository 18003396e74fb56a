//! Laplacian comparisons: from a point, from the boundary, the Riccati
//! inequality behind them, bounded-density variants and the
//! p-Laplacian.

use super::certificate::Hypotheses;
use super::report::{run_refined, CheckOptions, ComparisonReport, Constants, Sample, Statement};
use super::{barrier_cap, component_label, part_name, ComparisonError};
use crate::geometry::evaluators::{laplacian_at, p_laplacian_at, radial_ricci};
use crate::geometry::{Expr, GeodesicFrame, View, WarpedManifold};
use crate::model::{classify_pair, h_boundary, h_point, sn_boundary, Dims};
use crate::numeric::Jet;

fn constants(h: &Hypotheses) -> Constants {
    Constants { kappa: h.kappa, lambda: h.lambda, delta: Some(h.delta) }
}

fn lambda_of(h: &Hypotheses) -> Result<f64, ComparisonError> {
    h.lambda.ok_or(ComparisonError::MissingLambda)
}

fn report(statement: Statement, h: &Hypotheses, opts: &CheckOptions, run: (Vec<Sample>, usize, bool)) -> ComparisonReport {
    ComparisonReport::from_samples(statement, constants(h), run.0, opts.tol, run.1, run.2)
}

/// `Δ_f ρ_x ≥ H_κ(s_{f,v}(t)) e^{-aφ}` and `Δ_f ρ_x ≥ H_κ(e^{-2δ}t) e^{-aφ}`
/// along geodesics from the pole of a point-symmetric instance.
pub fn check_point_laplacian(m: &WarpedManifold, h: &Hypotheses, opts: &CheckOptions) -> Result<ComparisonReport, ComparisonError> {
    let view = m.pole_view()?;
    let dims = h.dims;
    let a = dims.a();
    let cap = if h.kappa > 0.0 { std::f64::consts::PI / h.kappa.sqrt() * (1.0 - opts.exclusion) } else { f64::INFINITY };
    let run = run_refined(opts, |points| -> Result<_, ComparisonError> {
        let frame = GeodesicFrame::interior(&view, a, points, opts.exclusion);
        let mut out = Vec::with_capacity(2 * frame.len());
        for i in 0..frame.len() {
            let (t, s) = (frame.ts[i], frame.ss[i]);
            let lap = laplacian_at(&view, t);
            let weight = (-a * frame.phi[i].v).exp();
            if s < cap {
                out.push(Sample::ge(Some("reparametrized"), t, lap, h_point(dims.c, h.kappa, s)? * weight));
            }
            let r = (-2.0 * h.delta).exp() * t;
            if r < cap {
                out.push(Sample::ge(Some("bounded"), t, lap, h_point(dims.c, h.kappa, r)? * weight));
            }
        }
        Ok(out)
    })?;
    Ok(report(Statement::PointLaplacian, h, opts, run))
}

/// `(e^{aφ}Δ_fρ)' ≥ e^{aφ}Ric_f^N(∂_t,∂_t) + c e^{-aφ}(e^{aφ}Δ_fρ)²` with the
/// derivative taken analytically from the profile jets.
pub fn check_riccati(m: &WarpedManifold, h: &Hypotheses, opts: &CheckOptions) -> Result<ComparisonReport, ComparisonError> {
    let dims = h.dims;
    let a = dims.a();
    let nm1 = dims.n_minus_1();
    let run = run_refined(opts, |points| -> Result<_, ComparisonError> {
        let mut out = Vec::new();
        for comp in m.components() {
            let view = m.view(comp)?;
            let part = component_label(m, comp);
            let frame = GeodesicFrame::interior(&view, a, points, opts.exclusion);
            for i in 0..frame.len() {
                let t = frame.ts[i];
                let (w, phi) = (frame.w[i], frame.phi[i]);
                let r = w.d1 / w.v;
                let lap = -nm1 * r + phi.d1;
                let dlap = -nm1 * (w.d2 / w.v - r * r) + phi.d2;
                let ea = (a * phi.v).exp();
                let f = ea * lap;
                let df = ea * (a * phi.d1 * lap + dlap);
                let ric = radial_ricci(&view, &dims, t)?;
                out.push(Sample::ge(part, t, df, ea * ric + dims.c / ea * f * f));
            }
        }
        Ok(out)
    })?;
    Ok(report(Statement::Riccati, h, opts, run))
}

/// Samples of `Δ_fρ ≥ H_{κ,λ}(s) e^{-aφ}` along one view, together with the
/// monotonicity of `G = 𝔰²_{κ,λ}(e^{aφ}Δ_fρ - H_{κ,λ})` in `s`.
pub(crate) fn boundary_samples(
    view: &View,
    dims: &Dims,
    kappa: f64,
    lambda: f64,
    points: usize,
    exclusion: f64,
    label: Option<&str>,
) -> Result<Vec<Sample>, ComparisonError> {
    let a = dims.a();
    let frame = GeodesicFrame::interior(view, a, points, exclusion);
    let cap = barrier_cap(kappa, lambda, exclusion);
    let lap_part = part_name("laplacian", label);
    let g_part = part_name("g-monotone", label);
    let mut out = Vec::with_capacity(2 * frame.len());
    let mut prev: Option<f64> = None;
    for i in 0..frame.len() {
        let (t, s) = (frame.ts[i], frame.ss[i]);
        if s >= cap {
            break;
        }
        let phi = frame.phi[i];
        let lap = laplacian_at(view, t);
        let hb = h_boundary(dims.c, kappa, lambda, s)?;
        out.push(Sample::ge(Some(&lap_part), t, lap, hb * (-a * phi.v).exp()));
        let sn = sn_boundary(kappa, lambda, s).0;
        let g = sn * sn * ((a * phi.v).exp() * lap - hb);
        if let Some(pg) = prev {
            out.push(Sample::ge(Some(&g_part), s, g, pg));
        }
        prev = Some(g);
    }
    Ok(out)
}

/// `Δ_fρ_{∂M} ≥ H_{κ,λ}(s_{f,z}(t)) e^{-aφ(t)}` for `s < min(τ_f, C_{κ,λ})`,
/// on every boundary component, with the `G`-monotonicity diagnostic.
pub fn check_boundary_laplacian(m: &WarpedManifold, h: &Hypotheses, opts: &CheckOptions) -> Result<ComparisonReport, ComparisonError> {
    let lambda = lambda_of(h)?;
    let run = run_refined(opts, |points| -> Result<_, ComparisonError> {
        let mut out = Vec::new();
        for comp in m.components() {
            let view = m.view(comp)?;
            out.extend(boundary_samples(&view, &h.dims, h.kappa, lambda, points, opts.exclusion, component_label(m, comp))?);
        }
        Ok(out)
    })?;
    Ok(report(Statement::BoundaryLaplacian, h, opts, run))
}

/// Under `(1-ε)f ≤ (n-1)δ`:
/// `Δ_fρ ≥ H_{κ,λ}(e^{-2δ}t) e^{-aφ}` (weakly-monotone pairs, part
/// `weighted`) and `Δ_fρ ≥ H_{κ,λ}(e^{-2δ}t) e^{-2δ}` (monotone pairs, part
/// `uniform`).
pub fn check_bounded_density(m: &WarpedManifold, h: &Hypotheses, opts: &CheckOptions) -> Result<ComparisonReport, ComparisonError> {
    let lambda = lambda_of(h)?;
    let pair = classify_pair(h.kappa, lambda);
    if !pair.weakly_monotone {
        return Ok(ComparisonReport::skipped(
            Statement::BoundedDensity,
            constants(h),
            opts.tol,
            format!("(κ,λ) = ({}, {lambda}) is not weakly monotone", h.kappa),
        ));
    }
    let dims = h.dims;
    let a = dims.a();
    let scale = (-2.0 * h.delta).exp();
    let cap = barrier_cap(h.kappa, lambda, opts.exclusion);
    let run = run_refined(opts, |points| -> Result<_, ComparisonError> {
        let mut out = Vec::new();
        for comp in m.components() {
            let view = m.view(comp)?;
            let label = component_label(m, comp);
            let (weighted, uniform) = (part_name("weighted", label), part_name("uniform", label));
            let frame = GeodesicFrame::interior(&view, a, points, opts.exclusion);
            for i in 0..frame.len() {
                let t = frame.ts[i];
                let r = scale * t;
                if r >= cap {
                    break;
                }
                let lap = laplacian_at(&view, t);
                let hb = h_boundary(dims.c, h.kappa, lambda, r)?;
                out.push(Sample::ge(Some(&weighted), t, lap, hb * (-a * frame.phi[i].v).exp()));
                if pair.monotone {
                    out.push(Sample::ge(Some(&uniform), t, lap, hb * scale));
                }
            }
        }
        Ok(out)
    })?;
    let mut rep = report(Statement::BoundedDensity, h, opts, run);
    if !pair.monotone {
        rep.notes.push("uniform display skipped: (κ,λ) is not monotone".to_owned());
    }
    Ok(rep)
}

fn psi_jet(psi: &Expr, x: f64) -> Result<Jet, ComparisonError> {
    let j = psi.jet(x);
    if !(j.d1 > 0.0) {
        return Err(ComparisonError::NonIncreasingPsi { at: x, slope: j.d1 });
    }
    Ok(j)
}

/// `-[((ψ')^{p-1})' - H (ψ')^{p-1}]` at one argument.
fn model_operator(p: f64, psi: Jet, hb: f64) -> f64 {
    let v = psi.d1.powf(p - 1.0);
    let dv = (p - 1.0) * psi.d1.powf(p - 2.0) * psi.d2;
    -(dv - hb * v)
}

/// The weighted p-Laplacian comparisons for `ψ ∘ ρ` with `ψ` increasing
/// (`psi` is an expression in `t` standing for the argument of `ψ`):
///
/// * part `bounded` (monotone pairs):
///   `Δ_{f,p}(ψ∘ρ_δ) ≥ -e^{-2pδ}[((ψ')^{p-1})' - H_{κ,λ}(ψ')^{p-1}]∘ρ_δ`
///   with `ρ_δ = e^{-2δ}ρ_{∂M}`;
/// * part `radial`: the same with weight `(1 - (p-1)a) f`, the function
///   `ψ ∘ ρ_{∂M,f}` and factor `e^{-paf}`.
pub fn check_p_laplacian(
    m: &WarpedManifold,
    h: &Hypotheses,
    p: f64,
    psi: &Expr,
    opts: &CheckOptions,
) -> Result<ComparisonReport, ComparisonError> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(ComparisonError::InvalidExponent(p));
    }
    let lambda = lambda_of(h)?;
    let pair = classify_pair(h.kappa, lambda);
    let dims = h.dims;
    let a = dims.a();
    let scale = (-2.0 * h.delta).exp();
    let cap = barrier_cap(h.kappa, lambda, opts.exclusion);
    let b = 1.0 - (p - 1.0) * a;
    let run = run_refined(opts, |points| -> Result<_, ComparisonError> {
        let mut out = Vec::new();
        for comp in m.components() {
            let view = m.view(comp)?;
            let label = component_label(m, comp);
            let (bounded, radial) = (part_name("bounded", label), part_name("radial", label));
            let frame = GeodesicFrame::interior(&view, a, points, opts.exclusion);
            for i in 0..frame.len() {
                let (t, s, phi) = (frame.ts[i], frame.ss[i], frame.phi[i]);
                let r = scale * t;
                if pair.monotone && r < cap {
                    let j = psi_jet(psi, r)?;
                    let u = Jet::new(j.v, scale * j.d1, scale * scale * j.d2);
                    let lhs = p_laplacian_at(&view, p, 1.0, u, t)?;
                    let hb = h_boundary(dims.c, h.kappa, lambda, r)?;
                    out.push(Sample::ge(Some(&bounded), t, lhs, scale.powf(p) * model_operator(p, j, hb)));
                }
                if s < cap {
                    let j = psi_jet(psi, s)?;
                    let ds = (-a * phi.v).exp();
                    let dds = -a * phi.d1 * ds;
                    let u = Jet::new(j.v, j.d1 * ds, j.d2 * ds * ds + j.d1 * dds);
                    let lhs = p_laplacian_at(&view, p, b, u, t)?;
                    let hb = h_boundary(dims.c, h.kappa, lambda, s)?;
                    out.push(Sample::ge(Some(&radial), t, lhs, ds.powf(p) * model_operator(p, j, hb)));
                }
            }
        }
        Ok(out)
    })?;
    let mut rep = report(Statement::PLaplacian, h, opts, run);
    if !pair.monotone {
        rep.notes.push("bounded variant skipped: (κ,λ) is not monotone".to_owned());
    }
    Ok(rep)
}

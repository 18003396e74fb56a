//! Volume element bounds and the absolute and relative tube volume
//! comparisons.

use super::certificate::Hypotheses;
use super::report::{run_refined, CheckOptions, ComparisonReport, Constants, Sample, Statement};
use super::{barrier_cap, component_label, part_name, ComparisonError};
use crate::geometry::evaluators::{boundary_measure, theta_at, tube_volume};
use crate::geometry::{GeodesicFrame, Radius, WarpedManifold};
use crate::model::{classify_pair, s_volume, sn_power};

fn constants(h: &Hypotheses) -> Constants {
    Constants { kappa: h.kappa, lambda: h.lambda, delta: Some(h.delta) }
}

/// Bounds on the weighted volume element of the level sets of `ρ_{∂M}`:
///
/// * `ratio-s`: `θ̂_f(s)/𝔰^{c⁻¹}_{κ,λ}(s)` is non-increasing (adjacent grid
///   pairs, starting from `s = 0`);
/// * `absolute-s`: `θ̂_f(s) ≤ e^{-f(z)} 𝔰^{c⁻¹}_{κ,λ}(s)`;
/// * `ratio-t`, `absolute-t` (monotone pairs): the same in `t` with
///   `(κe^{-4δ}, λe^{-2δ})`.
pub fn check_volume_elements(m: &WarpedManifold, h: &Hypotheses, opts: &CheckOptions) -> Result<ComparisonReport, ComparisonError> {
    let lambda = h.lambda.ok_or(ComparisonError::MissingLambda)?;
    let dims = h.dims;
    let (c, a) = (dims.c, dims.a());
    let monotone = classify_pair(h.kappa, lambda).monotone;
    let (ks, ls) = h.rescaled(lambda);
    let cap_s = barrier_cap(h.kappa, lambda, opts.exclusion);
    let cap_t = barrier_cap(ks, ls, opts.exclusion);
    let run = run_refined(opts, |points| -> Result<_, ComparisonError> {
        let mut out = Vec::new();
        for comp in m.components() {
            let view = m.view(comp)?;
            let label = component_label(m, comp);
            let names = ["ratio-s", "absolute-s", "ratio-t", "absolute-t"].map(|b| part_name(b, label));
            let base = (-view.phi0()).exp();
            let frame = GeodesicFrame::interior(&view, a, points, opts.exclusion);
            let (mut prev_s, mut prev_t) = ((0.0, 1.0), (0.0, 1.0));
            for i in 0..frame.len() {
                let (t, s) = (frame.ts[i], frame.ss[i]);
                let theta = theta_at(&view, t);
                if s < cap_s {
                    let model = base * sn_power(c, h.kappa, lambda, s);
                    let q = theta / model;
                    out.push(Sample::le(Some(&names[0]), s, q, prev_s.1));
                    out.push(Sample::le(Some(&names[1]), s, theta, model));
                    prev_s = (s, q);
                }
                if monotone && t < cap_t {
                    let model = base * sn_power(c, ks, ls, t);
                    let q = theta / model;
                    out.push(Sample::le(Some(&names[2]), t, q, prev_t.1));
                    out.push(Sample::le(Some(&names[3]), t, theta, model));
                    prev_t = (t, q);
                }
            }
        }
        Ok(out)
    })?;
    let mut rep = ComparisonReport::from_samples(Statement::VolumeElement, constants(h), run.0, opts.tol, run.1, run.2);
    if !monotone {
        rep.notes.push("t-parametrized bounds skipped: (κ,λ) is not monotone".to_owned());
    }
    Ok(rep)
}

/// Tube volume comparisons around a compact boundary for radii `r ≤ R`:
///
/// * `absolute-s`: `m_{(1+a)f}(B^f_r) ≤ 𝒮_{κ,λ}(r) m_{f,∂M}(∂M)`;
/// * `relative-s`: `m_{(1+a)f}(B^f_R)/m_{(1+a)f}(B^f_r) ≤ 𝒮_{κ,λ}(R)/𝒮_{κ,λ}(r)`;
/// * `absolute-t`, `relative-t` (monotone pairs): `m_f(B_r)` against
///   `𝒮_{κe^{-4δ},λe^{-2δ}}`.
pub fn check_volume_comparisons(
    m: &WarpedManifold,
    h: &Hypotheses,
    r: f64,
    big_r: f64,
    opts: &CheckOptions,
) -> Result<ComparisonReport, ComparisonError> {
    if !(r > 0.0 && r <= big_r && big_r.is_finite()) {
        return Err(ComparisonError::InvalidRadii { r, big_r });
    }
    let lambda = h.lambda.ok_or(ComparisonError::MissingLambda)?;
    let dims = h.dims;
    let c = dims.c;
    let area = boundary_measure(m)?;
    let alpha = 1.0 + dims.a();
    let mut samples = Vec::new();

    let vs = |x| tube_volume(m, &dims, alpha, x, Radius::Reparametrized);
    let (v_r, v_big) = (vs(r)?, vs(big_r)?);
    let (s_r, s_big) = (s_volume(c, h.kappa, lambda, r)?, s_volume(c, h.kappa, lambda, big_r)?);
    samples.push(Sample::le(Some("absolute-s"), r, v_r, s_r * area));
    samples.push(Sample::le(Some("absolute-s"), big_r, v_big, s_big * area));
    samples.push(Sample::le(Some("relative-s"), big_r, v_big / v_r, s_big / s_r));

    let monotone = classify_pair(h.kappa, lambda).monotone;
    if monotone {
        let (ks, ls) = h.rescaled(lambda);
        let vt = |x| tube_volume(m, &dims, 1.0, x, Radius::Distance);
        let (v_r, v_big) = (vt(r)?, vt(big_r)?);
        let (s_r, s_big) = (s_volume(c, ks, ls, r)?, s_volume(c, ks, ls, big_r)?);
        samples.push(Sample::le(Some("absolute-t"), r, v_r, s_r * area));
        samples.push(Sample::le(Some("absolute-t"), big_r, v_big, s_big * area));
        samples.push(Sample::le(Some("relative-t"), big_r, v_big / v_r, s_big / s_r));
    }
    let mut rep = ComparisonReport::from_samples(Statement::VolumeComparison, constants(h), samples, opts.tol, 1, false);
    if !monotone {
        rep.notes.push("t-parametrized comparisons skipped: (κ,λ) is not monotone".to_owned());
    }
    Ok(rep)
}

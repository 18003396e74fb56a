//! Lower bounds for the first Dirichlet eigenvalue under the curvature,
//! mean-curvature and density hypotheses, the Kasue-type volume estimate,
//! and their verification on compact instances.

use serde::{Deserialize, Serialize};

use super::radial::radial_eigen_estimate;
use super::shooting::model_eigenvalue;
use super::{check_exponent, OdeCoefficient, SpectrumError};
use crate::comparison::{CheckOptions, ComparisonReport, Constants, Hypotheses, Rigidity, Sample, Statement};
use crate::geometry::evaluators::tube_integral;
use crate::geometry::{inradius, inradius_f, Component, Topology, WarpedManifold};
use crate::model::{barrier_c, barrier_d, classify_pair, sn_boundary, spectrum_constant, tail_ratio_sup, ExtReal};
use crate::numeric::linspace;

/// Tolerance on eigenvalue margins; finite-difference estimates carry an
/// error far below it.
pub const EIGEN_TOL: f64 = 1e-6;
/// Relative agreement required between an equational model space and its
/// model eigenvalue.
pub const EQUALITY_TOL: f64 = 1e-4;
/// Agreement of the warping function with `𝔰_{κ,λ}` for a model space.
const SHAPE_TOL: f64 = 1e-6;

/// One bound with its applicability.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderEntry {
    pub value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inapplicable: Option<String>,
}

impl LadderEntry {
    fn value(v: f64) -> Self {
        Self { value: Some(v), inapplicable: None }
    }

    fn not(reason: impl Into<String>) -> Self {
        Self { value: None, inapplicable: Some(reason.into()) }
    }

    pub fn applicable(&self) -> bool {
        self.value.is_some()
    }
}

/// The lower bounds for `ν_{αf,p}(M)`:
///
/// * `model`: `ν_{(1+a)f,p}(M) ≥ ν_{p,κe^{-4δ},λe^{-2δ},De^{2δ}}` when
///   `InRad_f M ≤ D ≤ C_{κ,λ}`;
/// * `ball`: `ν_{f,p}(M) ≥ ν_{0,p}(B^n_{κe^{-4δ},λe^{-2δ}})` for convex-ball
///   pairs;
/// * `constant`: `ν_{f,p}(M) ≥ (p e^{2δ} C(κ,λ,D))^{-p}` for monotone pairs
///   when `InRad M ≤ e^{2δ}D`;
/// * `exponential`: `ν_{f,p}(M) ≥ e^{-2pδ}(c⁻¹λ/p)^p` for `κ < 0`,
///   `λ = √|κ|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundLadder {
    pub model: LadderEntry,
    pub ball: LadderEntry,
    pub constant: LadderEntry,
    pub exponential: LadderEntry,
}

fn lambda_of(h: &Hypotheses) -> Result<f64, SpectrumError> {
    h.lambda.ok_or(SpectrumError::Condition("mean-curvature bound (λ is missing)"))
}

fn exponential_pair(kappa: f64, lambda: f64) -> bool {
    kappa < 0.0 && (lambda - (-kappa).sqrt()).abs() <= 1e-12 * lambda.abs().max(1.0)
}

/// `ν_{p,κe^{-4δ},λe^{-2δ},De^{2δ}}` with drift coefficient `k`.
pub fn model_bound(h: &Hypotheses, p: f64, d: f64, k: f64) -> Result<LadderEntry, SpectrumError> {
    let lambda = lambda_of(h)?;
    if !(d > 0.0) || !d.is_finite() {
        return Ok(LadderEntry::not("needs a finite D > 0"));
    }
    if let Some(c) = barrier_c(h.kappa, lambda).finite() {
        if d > c * (1.0 + 1e-9) {
            return Ok(LadderEntry::not(format!("D = {d} exceeds C_{{κ,λ}} = {c}")));
        }
    }
    let (ks, ls) = h.rescaled(lambda);
    let mut ds = d * (2.0 * h.delta).exp();
    if let Some(cs) = barrier_c(ks, ls).finite() {
        ds = ds.min(cs);
    }
    Ok(LadderEntry::value(model_eigenvalue(p, k, ks, ls, ds)?.value))
}

/// `ν_{0,p}(B^n_{κe^{-4δ},λe^{-2δ}})`: the model problem with coefficient
/// `n - 1` on the whole ball.
pub fn ball_bound(h: &Hypotheses, p: f64) -> Result<LadderEntry, SpectrumError> {
    let lambda = lambda_of(h)?;
    if !classify_pair(h.kappa, lambda).convex_ball {
        return Ok(LadderEntry::not("(κ,λ) is not a convex-ball pair"));
    }
    let (ks, ls) = h.rescaled(lambda);
    let c = barrier_c(ks, ls).as_f64();
    Ok(LadderEntry::value(model_eigenvalue(p, h.dims.n_minus_1(), ks, ls, c)?.value))
}

/// `(p e^{2δ} C(κ,λ,D))^{-p}`.
pub fn constant_bound(h: &Hypotheses, p: f64, d: ExtReal) -> Result<LadderEntry, SpectrumError> {
    let lambda = lambda_of(h)?;
    if !classify_pair(h.kappa, lambda).monotone {
        return Ok(LadderEntry::not("(κ,λ) is not monotone"));
    }
    let d = match (d, barrier_c(h.kappa, lambda).finite()) {
        (ExtReal::Finite(x), Some(c)) if x > c * (1.0 + 1e-9) => return Ok(LadderEntry::not(format!("D = {x} exceeds C_{{κ,λ}} = {c}"))),
        (ExtReal::Finite(x), Some(c)) => ExtReal::Finite(x.min(c)),
        (ExtReal::PosInf, _) if !exponential_pair(h.kappa, lambda) => return Ok(LadderEntry::not("D = +∞ needs κ < 0, λ = √|κ|")),
        (other, _) => other,
    };
    let cst = spectrum_constant(h.dims.c, h.kappa, lambda, d)?;
    Ok(LadderEntry::value((p * (2.0 * h.delta).exp() * cst).powf(-p)))
}

/// `e^{-2pδ}(c⁻¹λ/p)^p`.
pub fn exponential_bound(h: &Hypotheses, p: f64) -> Result<LadderEntry, SpectrumError> {
    let lambda = lambda_of(h)?;
    if !exponential_pair(h.kappa, lambda) {
        return Ok(LadderEntry::not("needs κ < 0 and λ = √|κ|"));
    }
    Ok(LadderEntry::value((-2.0 * p * h.delta).exp() * (h.dims.cinv() * lambda / p).powf(p)))
}

/// All four bounds, with one length `D` used for both `model` and
/// `constant`.
pub fn bound_ladder(h: &Hypotheses, p: f64, d: ExtReal, coefficient: OdeCoefficient) -> Result<BoundLadder, SpectrumError> {
    check_exponent(p)?;
    let model = match d {
        ExtReal::Finite(x) => model_bound(h, p, x, coefficient.exponent(&h.dims))?,
        ExtReal::PosInf => LadderEntry::not("needs a finite D"),
    };
    Ok(BoundLadder { model, ball: ball_bound(h, p)?, constant: constant_bound(h, p, d)?, exponential: exponential_bound(h, p)? })
}

/// Equational model spaces recognizable on a warped-product instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EquationalModel {
    /// `B^n_{κ,λ}`.
    Ball,
    /// `[0, 2D] × ∂M₁` with warping `𝔰_{κ,λ}` mirrored at `D`.
    Cylinder,
    /// The involutive quotient of a cylinder. A single warped product never
    /// has this form, so it is carried as a tag only.
    Quotient,
    None,
}

/// Classify `M` against the `(κe^{-4δ}, λe^{-2δ})`-equational model spaces.
/// Returns the type and the largest deviation of `w/w(0)` from `𝔰` and of
/// `(1-ε)φ` from `(n-1)δ`.
pub fn classify_equational_model(m: &WarpedManifold, h: &Hypotheses) -> (EquationalModel, f64) {
    let Some(lambda) = h.lambda else {
        return (EquationalModel::None, f64::INFINITY);
    };
    let (ks, ls) = h.rescaled(lambda);
    let pair = classify_pair(ks, ls);
    let t_max = m.t_max();
    let (kind, half) = match m.topology {
        Topology::BallApex if pair.ball => {
            let c = pair.c.as_f64();
            if (t_max - c).abs() > SHAPE_TOL * c.max(1.0) {
                return (EquationalModel::None, (t_max - c).abs());
            }
            (EquationalModel::Ball, t_max)
        }
        Topology::TwoEnded if pair.model => {
            let d = if ks == 0.0 && ls == 0.0 { 0.5 * t_max } else { barrier_d(ks, ls).as_f64() };
            if (0.5 * t_max - d).abs() > SHAPE_TOL * d.max(1.0) {
                return (EquationalModel::None, (0.5 * t_max - d).abs());
            }
            (EquationalModel::Cylinder, 0.5 * t_max)
        }
        _ => return (EquationalModel::None, f64::INFINITY),
    };
    let dims = h.dims;
    let w0 = m.profile.w.value(0.0);
    let level = dims.n_minus_1() * h.delta;
    let mut dev: f64 = 0.0;
    for t in linspace(0.0, t_max, 513) {
        let u = if t <= half { t } else { t_max - t };
        dev = dev.max((m.profile.w.value(t) / w0 - sn_boundary(ks, ls, u).0).abs());
        dev = dev.max(((1.0 - dims.eps) * m.profile.phi.value(t) - level).abs());
    }
    if dev <= SHAPE_TOL {
        (kind, dev)
    } else {
        (EquationalModel::None, dev)
    }
}

/// Radial eigenvalue estimates against every applicable bound of the
/// ladder:
///
/// * `model`: `ν_{(1+a)f,p}` against `model_bound` at `D = InRad_f M`;
/// * `ball`, `constant` (at `D = e^{-2δ} InRad M`), `exponential`:
///   `ν_{f,p}` against the corresponding bound.
///
/// On an equational model space the `model` bound must be attained; this
/// is recorded as a rigidity entry.
pub fn check_eigen_theorems(
    m: &WarpedManifold,
    h: &Hypotheses,
    p: f64,
    coefficient: OdeCoefficient,
    opts: &CheckOptions,
) -> Result<ComparisonReport, SpectrumError> {
    check_exponent(p)?;
    if !matches!(m.topology, Topology::BallApex | Topology::TwoEnded) {
        return Err(SpectrumError::NotCompact(m.topology));
    }
    let dims = h.dims;
    let est_f = radial_eigen_estimate(m, p, 1.0)?;
    let est_af = radial_eigen_estimate(m, p, 1.0 + dims.a())?;
    let in_f = inradius_f(m, &dims)?;
    let in_t = inradius(m)?;
    let d_const = (-2.0 * h.delta).exp() * in_t;
    let model = model_bound(h, p, in_f, coefficient.exponent(&dims))?;
    let entries = [
        ("model", in_f, est_af.value, model.clone()),
        ("ball", in_t, est_f.value, ball_bound(h, p)?),
        ("constant", d_const, est_f.value, constant_bound(h, p, ExtReal::Finite(d_const))?),
        ("exponential", in_t, est_f.value, exponential_bound(h, p)?),
    ];
    let mut samples = Vec::new();
    let mut notes = Vec::new();
    for (name, at, estimate, entry) in &entries {
        match entry.value {
            Some(bound) => samples.push(Sample::ge(Some(name), *at, *estimate, bound)),
            None => notes.push(format!("{name}: {}", entry.inapplicable.as_deref().unwrap_or("inapplicable"))),
        }
    }
    let constants = Constants { kappa: h.kappa, lambda: h.lambda, delta: Some(h.delta) };
    let tol = opts.tol.max(EIGEN_TOL);
    let mut rep = ComparisonReport::from_samples(Statement::EigenvalueBound, constants, samples, tol, 2 * super::RADIAL_CELLS, false);
    rep.notes = notes;
    rep.notes.push(format!("ODE coefficient: {} (k = {})", coefficient.id(), coefficient.exponent(&dims)));
    if p != 2.0 {
        rep.notes.push("p ≠ 2: radial estimates are upper estimates, so agreement with the bounds is one-sided evidence".to_owned());
    }
    let (kind, deviation) = classify_equational_model(m, h);
    if kind != EquationalModel::None {
        rep.rigidity.push(Rigidity::new(format!("equational model: {kind:?}").to_lowercase(), deviation, SHAPE_TOL));
        if let Some(bound) = model.value {
            let gap = (est_af.value - bound).abs() / bound.abs().max(f64::MIN_POSITIVE);
            rep.rigidity.push(Rigidity::new("model eigenvalue attained", gap, EQUALITY_TOL));
        }
    }
    Ok(rep)
}

/// Both sides of the volume estimate
/// `m_f(Ω) ≤ e^{2δ} sup_{s∈]D₁,D₂[} (∫_s^{D₂} 𝔰^{c⁻¹})/𝔰^{c⁻¹}(s) · m_{f,∂Ω}(∂Ω)`
/// for the band `Ω = {a < ρ_{∂M} < b}` with `D_i = e^{-2δ}·{a, b}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KasueReport {
    pub a: f64,
    pub b: f64,
    pub volume: f64,
    pub boundary_measure: f64,
    pub d1: f64,
    pub d2: f64,
    pub sup_ratio: f64,
    pub bound: f64,
    pub margin: f64,
}

impl KasueReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.margin >= -tol
    }

    pub fn to_report(&self, h: &Hypotheses, opts: &CheckOptions) -> ComparisonReport {
        let constants = Constants { kappa: h.kappa, lambda: h.lambda, delta: Some(h.delta) };
        ComparisonReport::from_samples(
            Statement::DomainVolume,
            constants,
            vec![Sample::le(Some("band"), self.b, self.volume, self.bound)],
            opts.tol,
            1,
            false,
        )
    }
}

/// Evaluate the volume estimate on the band `a < ρ_{∂M} < b` of the inner
/// component.
pub fn kasue_estimate(m: &WarpedManifold, h: &Hypotheses, a: f64, b: f64) -> Result<KasueReport, SpectrumError> {
    let lambda = lambda_of(h)?;
    if !classify_pair(h.kappa, lambda).monotone {
        return Err(SpectrumError::Condition("monotone condition"));
    }
    let view = m.view(Component::Inner)?;
    if !(a > 0.0 && a < b && b < view.tau) {
        return Err(SpectrumError::InvalidInterval { a, b, tau: view.tau });
    }
    let area = m.component_area(Component::Inner)?;
    let volume = area * tube_integral(&view, 1.0, a, b);
    let level = |t: f64| {
        let (w, phi) = view.jets(t);
        (-phi.v).exp() * (w.v / view.w0()).powi(m.n as i32 - 1)
    };
    let boundary_measure = area * (level(a) + level(b));
    let shrink = (-2.0 * h.delta).exp();
    let (d1, d2) = (shrink * a, shrink * b);
    let sup_ratio = tail_ratio_sup(h.dims.c, h.kappa, lambda, d1, d2).1;
    let bound = (2.0 * h.delta).exp() * sup_ratio * boundary_measure;
    Ok(KasueReport { a, b, volume, boundary_measure, d1, d2, sup_ratio, bound, margin: bound - volume })
}

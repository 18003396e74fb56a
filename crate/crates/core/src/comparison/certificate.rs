//! Largest constants `κ`, `λ` and smallest `δ` for which an instance
//! satisfies the curvature, mean-curvature and density hypotheses.

use serde::Serialize;

use super::ComparisonError;
use crate::geometry::evaluators::{fiber_ricci, radial_ricci, reparam_s, reparam_t};
use crate::geometry::{Component, Topology, WarpedManifold};
use crate::model::Dims;
use crate::numeric::linspace;
use crate::numeric::roots::{grid_max, grid_min};

/// Gap kept from a pole, relative to `min(1, T)`, and from the far end of a
/// collar or ball, relative to `s(T)` in the reparametrized distance (which
/// makes it invariant under constant shifts of the density). Equal to the default exclusion width of the checks, so the
/// certified region is the region they sample.
const END_GAP: f64 = 1e-4;
/// Fiber directions are sampled further from a pole or an apex: their formula
/// subtracts two terms of size `1/w²`.
const FIBER_END_GAP: f64 = 1e-2;

/// Certified hypothesis constants of one instance.
///
/// `kappa_eff` is the minimum of `c·Ric_f^N(∂_t,∂_t)·e^{2aφ}` along the
/// normal geodesics, which is what every conclusion consumes. `kappa_full`
/// also takes the fiber directions into account when their Ricci curvature is
/// known.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypothesisCertificate {
    pub dims: Dims,
    pub kappa_eff: f64,
    /// Numerical resolution of `κ_eff`: the relative accuracy of the profile
    /// jets times the largest Ricci term on the grid.
    pub kappa_resolution: f64,
    pub kappa_full: Option<f64>,
    /// `None` on a point-symmetric instance.
    pub lambda_eff: Option<f64>,
    pub lambda_by_component: Vec<(Component, f64)>,
    pub delta_eff: f64,
    pub grid: Vec<f64>,
    /// `c·Ric·e^{2aφ} - κ_eff` in the radial direction at each grid point.
    pub ricci_margins: Vec<f64>,
    /// Same for a fiber direction, when its Ricci curvature is known.
    pub fiber_margins: Vec<f64>,
    /// `δ_eff - (1-ε)φ/(n-1)` at each grid point.
    pub density_margins: Vec<f64>,
}

/// Constants a conclusion is checked against. Obtained from a certificate,
/// possibly weakened.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Hypotheses {
    pub dims: Dims,
    pub kappa: f64,
    pub lambda: Option<f64>,
    pub delta: f64,
}

impl Hypotheses {
    /// `(κe^{-4δ}, λe^{-2δ})`.
    pub fn rescaled(&self, lambda: f64) -> (f64, f64) {
        (self.kappa * (-4.0 * self.delta).exp(), lambda * (-2.0 * self.delta).exp())
    }
}

fn scaled_ricci(m: &WarpedManifold, dims: &Dims, t: f64) -> Result<f64, ComparisonError> {
    let v = match m.topology {
        Topology::PointSymmetric => m.pole_view()?,
        _ => m.view(Component::Inner)?,
    };
    let phi = v.jets(t).1.v;
    Ok(dims.c * radial_ricci(&v, dims, t)? * (2.0 * dims.a() * phi).exp())
}

/// `c·e^{2aφ}` times the sum of the absolute values of the terms of
/// `Ric_f^N(∂_t, ∂_t)`, the size against which its rounding is measured.
fn ricci_term_scale(m: &WarpedManifold, dims: &Dims, t: f64) -> Result<f64, ComparisonError> {
    let v = match m.topology {
        Topology::PointSymmetric => m.pole_view()?,
        _ => m.view(Component::Inner)?,
    };
    let (w, phi) = v.jets(t);
    let k = dims.df2_coeff().unwrap_or(0.0).abs();
    let terms = dims.n_minus_1() * (w.d2 / w.v).abs() + phi.d2.abs() + k * phi.d1 * phi.d1;
    Ok(dims.c * terms * (2.0 * dims.a() * phi.v).exp())
}

fn scaled_fiber_ricci(m: &WarpedManifold, dims: &Dims, t: f64) -> Result<Option<f64>, ComparisonError> {
    let v = match m.topology {
        Topology::PointSymmetric => m.pole_view()?,
        _ => m.view(Component::Inner)?,
    };
    let phi = v.jets(t).1.v;
    Ok(fiber_ricci(&v, dims, t)?.map(|r| dims.c * r * (2.0 * dims.a() * phi).exp()))
}

/// Sampling interval `[lo, hi]` in `t`.
fn sampling_range(m: &WarpedManifold, dims: &Dims, gap: f64) -> Result<(f64, f64), ComparisonError> {
    let t_max = m.t_max();
    let g = gap * t_max.min(1.0);
    Ok(match m.topology {
        Topology::PointSymmetric => (g, t_max),
        Topology::BallApex | Topology::Collar => {
            let s_end = reparam_s(m, dims, t_max)?;
            let t_cut = reparam_t(m, dims, s_end * (1.0 - gap))?;
            (0.0, (t_max - g).min(t_cut))
        }
        Topology::TwoEnded => (0.0, t_max),
    })
}

/// Certify the hypotheses of an instance on a grid of `points` samples,
/// with each extremum polished by golden-section search between grid
/// neighbours.
pub fn certify_hypotheses(m: &WarpedManifold, dims: &Dims, points: usize) -> Result<HypothesisCertificate, ComparisonError> {
    if m.n != dims.n {
        return Err(ComparisonError::DimensionMismatch { manifold: m.n, params: dims.n });
    }
    let (lo, hi) = sampling_range(m, dims, END_GAP)?;
    let grid = linspace(lo, hi, points.max(3));

    // Errors (N = n with a varying density) surface on the first evaluation.
    let radial: Vec<f64> = grid.iter().map(|&t| scaled_ricci(m, dims, t)).collect::<Result<_, _>>()?;
    let (_, polished) = grid_min(|t| scaled_ricci(m, dims, t).unwrap_or(f64::INFINITY), lo, hi, points.max(3), 1e-12);
    let kappa_eff = radial.iter().copied().fold(polished, f64::min);
    let kappa_resolution = RESOLUTION
        * grid
            .iter()
            .map(|&t| ricci_term_scale(m, dims, t))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .filter(|x| x.is_finite())
            .fold(0.0, f64::max);

    let fiber_gap = match m.topology {
        Topology::PointSymmetric | Topology::BallApex => FIBER_END_GAP,
        _ => END_GAP,
    };
    let (flo, fhi) = sampling_range(m, dims, fiber_gap)?;
    let fiber_grid = linspace(flo, fhi, points.max(3));
    let fiber: Option<Vec<f64>> = fiber_grid
        .iter()
        .map(|&t| scaled_fiber_ricci(m, dims, t))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .collect();
    let (kappa_full, fiber_margins) = match fiber {
        Some(values) => {
            let (_, p) = grid_min(
                |t| scaled_fiber_ricci(m, dims, t).ok().flatten().unwrap_or(f64::INFINITY),
                flo,
                fhi,
                points.max(3),
                1e-12,
            );
            let kf = values.iter().copied().fold(p, f64::min);
            (Some(kf.min(kappa_eff)), values.iter().map(|v| v - kf).collect())
        }
        None => (None, Vec::new()),
    };

    let mut lambda_by_component = Vec::new();
    for comp in m.components() {
        let v = m.view(comp)?;
        let (w, phi) = v.jets(0.0);
        let h = -(m.n as f64 - 1.0) * w.d1 / w.v + phi.d1;
        lambda_by_component.push((comp, dims.c * h * (dims.a() * phi.v).exp()));
    }
    let lambda_eff = lambda_by_component.iter().map(|&(_, l)| l).reduce(f64::min);

    let rate = (1.0 - dims.eps) / dims.n_minus_1();
    let phi_at = |t: f64| m.profile.phi.value(t);
    let t_max = m.t_max();
    let (_, dmax) = grid_max(|t| rate * phi_at(t), 0.0, t_max, points.max(3), 1e-12);
    let density: Vec<f64> = grid.iter().map(|&t| rate * phi_at(t)).collect();
    let delta_eff = density.iter().copied().fold(dmax, f64::max);

    Ok(HypothesisCertificate {
        dims: *dims,
        kappa_eff,
        kappa_resolution,
        kappa_full,
        lambda_eff,
        lambda_by_component,
        delta_eff,
        ricci_margins: radial.iter().map(|r| r - kappa_eff).collect(),
        fiber_margins,
        density_margins: density.iter().map(|d| delta_eff - d).collect(),
        grid,
    })
}

/// Relative slack accepted when a requested constant is compared with a
/// certified one.
const SNAP: f64 = 1e-9;

/// Relative accuracy of the ODE solutions behind the profile jets.
const RESOLUTION: f64 = 1e-12;

impl HypothesisCertificate {
    /// The certified constants themselves.
    pub fn hypotheses(&self) -> Hypotheses {
        Hypotheses { dims: self.dims, kappa: self.kappa_eff, lambda: self.lambda_eff, delta: self.delta_eff }
    }

    /// Constants implied by the certificate: any `κ ≤ κ_eff`, `λ ≤ λ_eff`
    /// and `δ ≥ δ_eff` (up to a relative `1e-9`, and for `κ` up to
    /// `kappa_resolution`) keeps the hypotheses true.
    pub fn weaken(&self, kappa: Option<f64>, lambda: Option<f64>, delta: Option<f64>) -> Result<Hypotheses, ComparisonError> {
        let mut h = self.hypotheses();
        if let Some(k) = kappa {
            if k > self.kappa_eff + SNAP * self.kappa_eff.abs().max(1.0) + self.kappa_resolution {
                return Err(ComparisonError::NotCertified { what: "κ", requested: k, certified: self.kappa_eff });
            }
            h.kappa = k;
        }
        if let Some(l) = lambda {
            let cert = self.lambda_eff.ok_or(ComparisonError::NotCertified { what: "λ", requested: l, certified: f64::NAN })?;
            if l > cert + SNAP * cert.abs().max(1.0) {
                return Err(ComparisonError::NotCertified { what: "λ", requested: l, certified: cert });
            }
            h.lambda = Some(l);
        }
        if let Some(d) = delta {
            if d < self.delta_eff - SNAP * self.delta_eff.abs().max(1.0) {
                return Err(ComparisonError::NotCertified { what: "δ", requested: d, certified: self.delta_eff });
            }
            h.delta = d;
        }
        Ok(h)
    }

    /// True when every recorded margin is non-negative.
    pub fn consistent(&self) -> bool {
        self.ricci_margins.iter().chain(&self.fiber_margins).chain(&self.density_margins).all(|&m| m >= 0.0)
    }
}

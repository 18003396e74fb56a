//! Cached radial samples along the normal geodesics of one boundary
//! component (or the pole).

use super::evaluators::QUAD;
use super::manifold::View;
use crate::numeric::quad::{integrate, QuadOptions};
use crate::numeric::{linspace, Jet};

/// Per-panel tolerance: the panel sums accumulate, so each panel is
/// integrated to near machine precision.
const PANEL_QUAD: QuadOptions = QuadOptions { abs_tol: 1e-16, rel_tol: 1e-15, max_panels: 64 };

/// Grid `t_i` in `]0, τ[`, the reparametrized `s_i = s_{f,z}(t_i)`, and the
/// profile jets at each sample.
#[derive(Debug, Clone)]
pub struct GeodesicFrame {
    pub ts: Vec<f64>,
    pub ss: Vec<f64>,
    pub w: Vec<Jet>,
    pub phi: Vec<Jet>,
    /// Cut value `τ` and its image `τ_f = s(τ)`.
    pub tau: f64,
    pub tau_f: f64,
}

impl GeodesicFrame {
    /// Sample `points` uniform values of `t` on `[lo, hi]` and integrate
    /// `s' = e^{-aφ}` panel by panel.
    pub fn build(view: &View, a: f64, lo: f64, hi: f64, points: usize) -> Self {
        let ts = linspace(lo, hi, points.max(2));
        let density = |x: f64| (-a * view.jets(x).1.v).exp();
        let mut ss = Vec::with_capacity(ts.len());
        let mut acc = integrate(density, 0.0, ts[0], QUAD).value;
        ss.push(acc);
        for p in ts.windows(2) {
            acc += integrate(density, p[0], p[1], PANEL_QUAD).value;
            ss.push(acc);
        }
        let tau_f = acc + integrate(density, hi, view.tau, QUAD).value;
        let (w, phi) = ts.iter().map(|&t| view.jets(t)).unzip();
        Self { ts, ss, w, phi, tau: view.tau, tau_f }
    }

    /// Default grid: `points` samples keeping `excl·min(1, τ)` away from
    /// both ends of `]0, τ[`.
    pub fn interior(view: &View, a: f64, points: usize, excl: f64) -> Self {
        let gap = excl * view.tau.min(1.0);
        Self::build(view, a, gap, view.tau - gap, points)
    }

    pub fn len(&self) -> usize {
        self.ts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ts.is_empty()
    }
}

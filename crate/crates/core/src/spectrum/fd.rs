//! Finite-difference first eigenvalue of `-(W|u'|^{p-2}u')' = ν W|u|^{p-2}u`
//! on `[0, L]` with `u(0) = 0`.
//!
//! The discrete problem minimizes
//! `Σ W_{j+½} |Δu_j/h|^p h / Σ m_i |u_i|^p` with midpoint flux weights and
//! lumped masses. For `p = 2` it is a symmetric tridiagonal eigenproblem
//! solved by inverse iteration. For `p ≠ 2` the nonlinear inverse power
//! iteration `-(W|v'|^{p-2}v')' = W|u|^{p-2}u`, `u ← v/max v` is used; each
//! step is solved exactly by integrating the flux from the free end.

use serde::{Deserialize, Serialize};

use super::{check_exponent, signed_pow, thin, EigenMethod, EigenResult, SpectrumError};
use crate::numeric::roots::bisect;

/// Boundary condition at `s = L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EndCondition {
    /// Zero flux `W|u'|^{p-2}u' = 0`, also the regularity condition where
    /// `W` vanishes.
    Natural,
    Dirichlet,
}

/// One mesh solution.
#[derive(Debug, Clone, PartialEq)]
pub struct FdSolution {
    pub value: f64,
    /// Nodal values on `[0, L]`, normalized to `max u = 1`.
    pub nodes: Vec<f64>,
    pub length: f64,
    /// Relative change of the eigenvalue in the last iteration.
    pub residual: f64,
    pub iterations: usize,
}

const MAX_ITER_LINEAR: usize = 5_000;
const MAX_ITER_NONLINEAR: usize = 200_000;
const STOP: f64 = 1e-14;
const PROFILE_POINTS: usize = 257;

struct Mesh {
    h: f64,
    /// Flux weights at the midpoints `j + ½`, `j = 0..M`.
    flux_w: Vec<f64>,
    /// Lumped masses at the nodes `0..=M` (entry 0 unused).
    mass: Vec<f64>,
    /// Index of the last free node.
    last: usize,
}

impl Mesh {
    fn new(weight: &dyn Fn(f64) -> f64, length: f64, cells: usize, end: EndCondition) -> Result<Self, SpectrumError> {
        if !(length > 0.0) || !length.is_finite() {
            return Err(SpectrumError::InvalidLength(length));
        }
        let m = cells.max(4);
        let h = length / m as f64;
        let flux_w: Vec<f64> = (0..m).map(|j| weight(h * (j as f64 + 0.5))).collect();
        let mut mass: Vec<f64> = (0..=m).map(|i| h * weight(h * i as f64)).collect();
        mass[0] = 0.0;
        // Half cell at the free end, weighted at its midpoint so a weight
        // vanishing at L still leaves positive mass.
        mass[m] = 0.5 * h * weight(length - 0.25 * h);
        let last = match end {
            EndCondition::Natural => m,
            EndCondition::Dirichlet => m - 1,
        };
        if flux_w.iter().chain(&mass[1..=last]).any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(SpectrumError::InvalidLength(length));
        }
        Ok(Self { h, flux_w, mass, last })
    }

    fn quotient(&self, p: f64, u: &[f64]) -> f64 {
        let num: f64 = self.flux_w.iter().enumerate().map(|(j, w)| w * ((u[j + 1] - u[j]) / self.h).abs().powf(p) * self.h).sum();
        let den: f64 = (1..=self.last).map(|i| self.mass[i] * u[i].abs().powf(p)).sum();
        num / den
    }
}

fn normalize(u: &mut [f64]) {
    let top = u.iter().copied().fold(0.0, f64::max);
    if top > 0.0 {
        u.iter_mut().for_each(|x| *x /= top);
    }
}

fn initial_guess(m: usize, end: EndCondition) -> Vec<f64> {
    let span = match end {
        EndCondition::Natural => std::f64::consts::FRAC_PI_2,
        EndCondition::Dirichlet => std::f64::consts::PI,
    };
    (0..=m).map(|i| (span * i as f64 / m as f64).sin()).collect()
}

/// Inverse iteration on `B^{-½} A B^{-½}` with a tridiagonal LDLᵀ solve.
fn solve_linear(mesh: &Mesh, end: EndCondition) -> Result<FdSolution, SpectrumError> {
    let n = mesh.last;
    let h = mesh.h;
    let sq: Vec<f64> = (1..=n).map(|i| mesh.mass[i].sqrt()).collect();
    let diag: Vec<f64> = (1..=n)
        .map(|i| {
            let right = if i < mesh.flux_w.len() { mesh.flux_w[i] } else { 0.0 };
            (mesh.flux_w[i - 1] + right) / h / mesh.mass[i]
        })
        .collect();
    let off: Vec<f64> = (1..n).map(|i| -mesh.flux_w[i] / h / (sq[i - 1] * sq[i])).collect();
    // LDLᵀ factorization.
    let mut d = vec![0.0; n];
    let mut l = vec![0.0; n.saturating_sub(1)];
    d[0] = diag[0];
    for i in 1..n {
        l[i - 1] = off[i - 1] / d[i - 1];
        d[i] = diag[i] - l[i - 1] * off[i - 1];
    }
    let solve = |b: &[f64]| {
        let mut y = b.to_vec();
        for i in 1..n {
            y[i] -= l[i - 1] * y[i - 1];
        }
        for i in 0..n {
            y[i] /= d[i];
        }
        for i in (0..n - 1).rev() {
            y[i] -= l[i] * y[i + 1];
        }
        y
    };
    let m = mesh.flux_w.len();
    let guess = initial_guess(m, end);
    let mut x: Vec<f64> = (1..=n).map(|i| guess[i] * sq[i - 1]).collect();
    let norm0 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    x.iter_mut().for_each(|v| *v /= norm0);
    let mut value = f64::INFINITY;
    for it in 1..=MAX_ITER_LINEAR {
        let y = solve(&x);
        // For unit x, xᵀC⁻¹x approaches 1/ν.
        let new = 1.0 / y.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>();
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        x = y.iter().map(|v| v / norm).collect();
        let change = ((new - value) / new).abs();
        value = new;
        if change < STOP {
            let mut u = vec![0.0; m + 1];
            for i in 1..=n {
                u[i] = x[i - 1] / sq[i - 1];
            }
            if u.iter().sum::<f64>() < 0.0 {
                u.iter_mut().for_each(|v| *v = -*v);
            }
            normalize(&mut u);
            let value = mesh.quotient(2.0, &u);
            return Ok(FdSolution { value, nodes: u, length: h * m as f64, residual: change, iterations: it });
        }
    }
    Err(SpectrumError::NoConvergence { method: "inverse iteration", iterations: MAX_ITER_LINEAR })
}

/// Nonlinear inverse power iteration.
fn solve_nonlinear(p: f64, mesh: &Mesh, end: EndCondition) -> Result<FdSolution, SpectrumError> {
    let m = mesh.flux_w.len();
    let h = mesh.h;
    let q = 1.0 / (p - 1.0);
    let mut u = initial_guess(m, end);
    let mut value = mesh.quotient(p, &u);
    let mut cum = vec![0.0; m + 1];
    for it in 1..=MAX_ITER_NONLINEAR {
        // cum[j] = Σ_{i=1}^{j} m_i g_i.
        for i in 1..=m {
            let g = if i <= mesh.last { mesh.mass[i] * signed_pow(u[i], p - 1.0) } else { 0.0 };
            cum[i] = cum[i - 1] + g;
        }
        let total = cum[mesh.last];
        // Flux on the cell (j, j+1) is F0 - cum[j].
        let f0 = match end {
            EndCondition::Natural => total,
            EndCondition::Dirichlet => {
                let net = |f0: f64| (0..m).map(|j| signed_pow((f0 - cum[j]) / mesh.flux_w[j], q)).sum::<f64>();
                bisect(net, 0.0, total, 1e-16 * total.max(1e-300)).unwrap_or(0.5 * total)
            }
        };
        let mut v = vec![0.0; m + 1];
        for j in 0..m {
            v[j + 1] = v[j] + h * signed_pow((f0 - cum[j]) / mesh.flux_w[j], q);
        }
        if end == EndCondition::Dirichlet {
            v[m] = 0.0;
        }
        normalize(&mut v);
        u = v;
        let new = mesh.quotient(p, &u);
        let change = ((new - value) / new).abs();
        value = new;
        if change < STOP {
            return Ok(FdSolution { value, nodes: u, length: h * m as f64, residual: change, iterations: it });
        }
    }
    Err(SpectrumError::NoConvergence { method: "nonlinear inverse power iteration", iterations: MAX_ITER_NONLINEAR })
}

/// First eigenvalue on one mesh of `cells` cells.
pub fn fd_solve(p: f64, weight: &dyn Fn(f64) -> f64, length: f64, cells: usize, end: EndCondition) -> Result<FdSolution, SpectrumError> {
    check_exponent(p)?;
    let mesh = Mesh::new(weight, length, cells, end)?;
    if p == 2.0 {
        solve_linear(&mesh, end)
    } else {
        solve_nonlinear(p, &mesh, end)
    }
}

/// Richardson extrapolation of two meshes, assuming an `h²` error.
pub(crate) fn extrapolated(p: f64, weight: &dyn Fn(f64) -> f64, length: f64, cells: usize, end: EndCondition) -> Result<EigenResult, SpectrumError> {
    let coarse = fd_solve(p, weight, length, cells, end)?;
    let fine = fd_solve(p, weight, length, 2 * cells, end)?;
    let value = (4.0 * fine.value - coarse.value) / 3.0;
    let h = fine.length / (fine.nodes.len() - 1) as f64;
    let samples: Vec<(f64, f64)> = fine.nodes.iter().enumerate().map(|(i, &u)| (h * i as f64, u)).collect();
    Ok(EigenResult {
        value,
        method: EigenMethod::FiniteDifference,
        residual: fine.residual.max(coarse.residual),
        error_estimate: (value - fine.value).abs(),
        exact: true,
        profile: thin(&samples, PROFILE_POINTS),
        notes: Vec::new(),
    })
}

/// Independent oracle for the model eigenvalue: weight `W` on `[0, D]`,
/// `u(0) = 0`, natural condition at `D`, meshes of `cells` and `2·cells`
/// cells, Richardson-extrapolated.
pub fn fd_eigenvalue_oracle(p: f64, weight: &dyn Fn(f64) -> f64, d: f64, cells: usize) -> Result<EigenResult, SpectrumError> {
    extrapolated(p, weight, d, cells, EndCondition::Natural)
}

//! Dormand–Prince 5(4) integrator with adaptive step control.
//!
//! The state dimension is a const generic so the shooting solver and the
//! reparametrization ODEs run without heap traffic per stage. A stage that
//! produces a non-finite derivative (e.g. stepping past a barrier where the
//! right-hand side is undefined) is treated as a rejected step.

use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OdeError {
    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },
    #[error("step budget of {max_steps} exhausted at t = {t}")]
    TooManySteps { t: f64, max_steps: usize },
}

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self { rtol: 1e-11, atol: 1e-13, h_init: 1e-4, h_max: f64::INFINITY, max_steps: 200_000 }
    }
}

/// Returned by the step observer to continue or stop the integration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flow {
    Continue,
    Stop,
}

#[derive(Debug, Clone, Copy)]
pub struct OdeEnd<const D: usize> {
    pub t: f64,
    pub y: [f64; D],
    pub steps: usize,
    pub stopped: bool,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Difference between the 5th- and 4th-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[inline]
fn axpy<const D: usize>(y: &[f64; D], terms: &[(f64, &[f64; D])], h: f64) -> [f64; D] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..D {
            out[i] += h * c * k[i];
        }
    }
    out
}

fn finite<const D: usize>(v: &[f64; D]) -> bool {
    v.iter().all(|x| x.is_finite())
}

/// One Dormand–Prince step. Returns the 5th-order update, the error vector and
/// the derivative at the new point (FSAL), or `None` if a stage was not finite.
#[allow(clippy::type_complexity)]
fn dp_step<const D: usize, F>(f: &F, t: f64, y: &[f64; D], k1: &[f64; D], h: f64) -> Option<([f64; D], [f64; D], [f64; D])>
where
    F: Fn(f64, &[f64; D]) -> [f64; D],
{
    let k2 = f(t + C2 * h, &axpy(y, &[(A21, k1)], h));
    if !finite(&k2) {
        return None;
    }
    let k3 = f(t + C3 * h, &axpy(y, &[(A31, k1), (A32, &k2)], h));
    if !finite(&k3) {
        return None;
    }
    let k4 = f(t + C4 * h, &axpy(y, &[(A41, k1), (A42, &k2), (A43, &k3)], h));
    if !finite(&k4) {
        return None;
    }
    let k5 = f(t + C5 * h, &axpy(y, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)], h));
    if !finite(&k5) {
        return None;
    }
    let k6 = f(t + h, &axpy(y, &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)], h));
    if !finite(&k6) {
        return None;
    }
    let y5 = axpy(y, &[(B1, k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)], h);
    if !finite(&y5) {
        return None;
    }
    let k7 = f(t + h, &y5);
    if !finite(&k7) {
        return None;
    }
    let mut err = [0.0; D];
    for i in 0..D {
        err[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
    }
    Some((y5, err, k7))
}

/// A single fixed-size step with no error control. Used to evaluate a stored
/// trajectory between accepted nodes.
pub fn single_step<const D: usize, F>(f: &F, t: f64, y: &[f64; D], h: f64) -> [f64; D]
where
    F: Fn(f64, &[f64; D]) -> [f64; D],
{
    if h == 0.0 {
        return *y;
    }
    let k1 = f(t, y);
    match dp_step(f, t, y, &k1, h) {
        Some((y5, _, _)) => y5,
        None => [f64::NAN; D],
    }
}

/// Integrate `y' = f(t, y)` from `t0` to `t_end` (either direction).
///
/// `observer` sees every accepted `(t, y)` including the initial point and may
/// stop the integration early.
pub fn integrate<const D: usize, F, O>(
    f: F,
    t0: f64,
    y0: [f64; D],
    t_end: f64,
    opts: OdeOptions,
    mut observer: O,
) -> Result<OdeEnd<D>, OdeError>
where
    F: Fn(f64, &[f64; D]) -> [f64; D],
    O: FnMut(f64, &[f64; D]) -> Flow,
{
    let dir = if t_end >= t0 { 1.0 } else { -1.0 };
    let span = (t_end - t0).abs();
    let mut t = t0;
    let mut y = y0;
    if observer(t, &y) == Flow::Stop {
        return Ok(OdeEnd { t, y, steps: 0, stopped: true });
    }
    if span == 0.0 {
        return Ok(OdeEnd { t, y, steps: 0, stopped: false });
    }
    let mut k1 = f(t, &y);
    let mut h = opts.h_init.min(span).min(opts.h_max);
    let mut steps = 0usize;
    let h_min = 1e-15 * span.max(t0.abs()).max(1e-300);
    loop {
        let remaining = (t_end - t) * dir;
        if remaining <= 0.0 {
            return Ok(OdeEnd { t, y, steps, stopped: false });
        }
        if steps >= opts.max_steps {
            return Err(OdeError::TooManySteps { t, max_steps: opts.max_steps });
        }
        let last = h >= remaining;
        let h_try = if last { remaining } else { h };
        let step = if finite(&k1) { dp_step(&f, t, &y, &k1, dir * h_try) } else { None };
        let (accepted, factor) = match step {
            None => (None, 0.25),
            Some((y5, err, k7)) => {
                let mut norm = 0.0f64;
                for i in 0..D {
                    let sc = opts.atol + opts.rtol * y[i].abs().max(y5[i].abs());
                    norm = norm.max((err[i] / sc).abs());
                }
                if norm <= 1.0 {
                    let fac = if norm == 0.0 { 5.0 } else { (0.9 * norm.powf(-0.2)).clamp(0.2, 5.0) };
                    (Some((y5, k7)), fac)
                } else {
                    (None, (0.9 * norm.powf(-0.2)).clamp(0.1, 0.9))
                }
            }
        };
        match accepted {
            Some((y5, k7)) => {
                steps += 1;
                t = if last { t_end } else { t + dir * h_try };
                y = y5;
                k1 = k7;
                if observer(t, &y) == Flow::Stop {
                    return Ok(OdeEnd { t, y, steps, stopped: true });
                }
                h = (h_try * factor).min(opts.h_max);
            }
            None => {
                h = h_try * factor;
                if h < h_min {
                    return Err(OdeError::StepUnderflow { t });
                }
            }
        }
    }
}

type ScalarRhs = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Dense solution of a scalar ODE `y' = g(t, y)`.
///
/// Accepted nodes are stored; a value between nodes is produced by one
/// Dormand–Prince step from the nearest node on the left, which keeps the
/// interpolation error at the level of the local step error.
#[derive(Clone)]
pub struct DenseScalar {
    ts: Vec<f64>,
    ys: Vec<f64>,
    rhs: ScalarRhs,
}

impl std::fmt::Debug for DenseScalar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DenseScalar").field("nodes", &self.ts.len()).finish()
    }
}

impl DenseScalar {
    /// Integrate forward from `t0` towards `t_end`. `stop` may end the run
    /// early; the solution is then valid up to the last accepted node.
    pub fn solve<G, S>(rhs: G, t0: f64, y0: f64, t_end: f64, opts: OdeOptions, mut stop: S) -> Result<Self, OdeError>
    where
        G: Fn(f64, f64) -> f64 + Send + Sync + 'static,
        S: FnMut(f64, f64) -> bool,
    {
        let rhs: ScalarRhs = Arc::new(rhs);
        let mut ts = Vec::new();
        let mut ys = Vec::new();
        let g = rhs.clone();
        integrate(
            move |t, y: &[f64; 1]| [g(t, y[0])],
            t0,
            [y0],
            t_end,
            opts,
            |t, y| {
                ts.push(t);
                ys.push(y[0]);
                if stop(t, y[0]) {
                    Flow::Stop
                } else {
                    Flow::Continue
                }
            },
        )?;
        Ok(Self { ts, ys, rhs })
    }

    pub fn t_range(&self) -> (f64, f64) {
        (self.ts[0], *self.ts.last().expect("at least the initial node"))
    }

    pub fn nodes(&self) -> (&[f64], &[f64]) {
        (&self.ts, &self.ys)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let i = match self.ts.binary_search_by(|x| x.total_cmp(&t)) {
            Ok(i) => return self.ys[i],
            Err(0) => 0,
            Err(i) => i - 1,
        };
        let g = &self.rhs;
        single_step(&|tt, y: &[f64; 1]| [g(tt, y[0])], self.ts[i], &[self.ys[i]], t - self.ts[i])[0]
    }

    /// Right-hand side `g(t, y(t))`, i.e. `y'(t)`.
    pub fn slope(&self, t: f64, y: f64) -> f64 {
        (self.rhs)(t, y)
    }
}

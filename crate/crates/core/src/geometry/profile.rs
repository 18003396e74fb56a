//! One-dimensional curves of `t` with exact or interpolated derivatives,
//! and the radial profile `(w, φ, T)` of a warped product.

use std::fmt;
use std::sync::Arc;

use super::expr::Expr;
use super::GeometryError;
use crate::model::sn_boundary;
use crate::numeric::Jet;

/// Natural cubic spline through `(t_i, y_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spline {
    ts: Vec<f64>,
    ys: Vec<f64>,
    m: Vec<f64>,
}

impl Spline {
    pub fn new(ts: Vec<f64>, ys: Vec<f64>) -> Result<Self, GeometryError> {
        let n = ts.len();
        if n < 4 || ys.len() != n {
            return Err(GeometryError::Construction("a sampled curve needs at least 4 matching (t, y) samples".into()));
        }
        if ts.windows(2).any(|p| !(p[1] > p[0])) || ys.iter().any(|y| !y.is_finite()) {
            return Err(GeometryError::Construction("sample abscissae must be strictly increasing and values finite".into()));
        }
        // Tridiagonal system for the second derivatives, natural end conditions.
        let mut m = vec![0.0; n];
        let mut c_prime = vec![0.0; n];
        let mut d_prime = vec![0.0; n];
        for i in 1..n - 1 {
            let h0 = ts[i] - ts[i - 1];
            let h1 = ts[i + 1] - ts[i];
            let a = h0 / 6.0;
            let b = (h0 + h1) / 3.0;
            let c = h1 / 6.0;
            let d = (ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0;
            let denom = b - a * c_prime[i - 1];
            c_prime[i] = c / denom;
            d_prime[i] = (d - a * d_prime[i - 1]) / denom;
        }
        for i in (1..n - 1).rev() {
            m[i] = d_prime[i] - c_prime[i] * m[i + 1];
        }
        Ok(Self { ts, ys, m })
    }

    pub fn range(&self) -> (f64, f64) {
        (self.ts[0], self.ts[self.ts.len() - 1])
    }

    pub fn jet(&self, t: f64) -> Jet {
        let n = self.ts.len();
        let i = match self.ts.binary_search_by(|x| x.total_cmp(&t)) {
            Ok(i) => i.min(n - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(n - 2),
        };
        let (t0, t1) = (self.ts[i], self.ts[i + 1]);
        let h = t1 - t0;
        let (a, b) = ((t1 - t) / h, (t - t0) / h);
        let (m0, m1) = (self.m[i], self.m[i + 1]);
        let (y0, y1) = (self.ys[i], self.ys[i + 1]);
        let v = a * y0 + b * y1 + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0;
        let d1 = (y1 - y0) / h - (3.0 * a * a - 1.0) * h * m0 / 6.0 + (3.0 * b * b - 1.0) * h * m1 / 6.0;
        let d2 = a * m0 + b * m1;
        Jet::new(v, d1, d2)
    }
}

/// A scalar function of `t` that can report `(f, f', f'')`.
#[derive(Clone)]
pub enum Curve {
    Expr(Expr),
    Sampled(Arc<Spline>),
    /// `𝔰_{κ,λ}(scale · t)`.
    Sn { kappa: f64, lambda: f64, scale: f64 },
    Custom { label: String, f: Arc<dyn Fn(f64) -> Jet + Send + Sync> },
}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

impl Curve {
    pub fn constant(v: f64) -> Self {
        Curve::Expr(Expr::constant(v))
    }

    pub fn parse(src: &str) -> Result<Self, GeometryError> {
        Ok(Curve::Expr(Expr::parse(src)?))
    }

    /// Build a spline from samples. When a closed-form `reference` is given,
    /// the spline's first derivative must agree with it to `1e-4` (relative
    /// to `max(1, |f'|)`) at every interval midpoint.
    pub fn sampled(ts: Vec<f64>, ys: Vec<f64>, reference: Option<&Expr>) -> Result<Self, GeometryError> {
        let spline = Spline::new(ts, ys)?;
        if let Some(r) = reference {
            for p in spline.ts.windows(2) {
                let mid = 0.5 * (p[0] + p[1]);
                let (a, b) = (spline.jet(mid).d1, r.jet(mid).d1);
                if (a - b).abs() > 1e-4 * b.abs().max(1.0) {
                    return Err(GeometryError::Construction(format!(
                        "sampled derivative {a} disagrees with {b} from {r} at t = {mid}"
                    )));
                }
            }
        }
        Ok(Curve::Sampled(Arc::new(spline)))
    }

    pub fn custom(label: impl Into<String>, f: impl Fn(f64) -> Jet + Send + Sync + 'static) -> Self {
        Curve::Custom { label: label.into(), f: Arc::new(f) }
    }

    pub fn jet(&self, t: f64) -> Jet {
        match self {
            Curve::Expr(e) => e.jet(t),
            Curve::Sampled(s) => s.jet(t),
            Curve::Sn { kappa, lambda, scale } => {
                let (v, d) = sn_boundary(*kappa, *lambda, scale * t);
                Jet::new(v, scale * d, -kappa * scale * scale * v)
            }
            Curve::Custom { f, .. } => f(t),
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        match self {
            Curve::Expr(e) => e.value(t),
            _ => self.jet(t).v,
        }
    }

    /// True when the curve is known to be constant in `t`.
    pub fn is_constant(&self) -> bool {
        match self {
            Curve::Expr(e) => e.is_constant(),
            Curve::Sn { kappa, lambda, scale } => *scale == 0.0 || (*kappa == 0.0 && *lambda == 0.0),
            _ => false,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Curve::Expr(e) => e.source().to_string(),
            Curve::Sampled(s) => format!("spline[{} samples]", s.ts.len()),
            Curve::Sn { kappa, lambda, scale } => format!("sn[{kappa},{lambda}]({scale}*t)"),
            Curve::Custom { label, .. } => label.clone(),
        }
    }
}

/// Warping function `w`, density `φ` and radial extent `T`.
#[derive(Debug, Clone)]
pub struct RadialProfile {
    pub w: Curve,
    pub phi: Curve,
    pub t_max: f64,
}

impl RadialProfile {
    pub fn new(w: Curve, phi: Curve, t_max: f64) -> Result<Self, GeometryError> {
        if !(t_max > 0.0) || !t_max.is_finite() {
            return Err(GeometryError::Construction(format!("radial extent must be positive and finite, got {t_max}")));
        }
        Ok(Self { w, phi, t_max })
    }

    /// `(w, φ)` jets at `t`, optionally in the reversed coordinate `T - t`.
    pub fn jets(&self, t: f64, reversed: bool) -> (Jet, Jet) {
        if reversed {
            let u = self.t_max - t;
            let (w, p) = (self.w.jet(u), self.phi.jet(u));
            (Jet::new(w.v, -w.d1, w.d2), Jet::new(p.v, -p.d1, p.d2))
        } else {
            (self.w.jet(t), self.phi.jet(t))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::linspace;

    #[test]
    fn spline_reproduces_smooth_function() {
        let ts = linspace(0.0, 2.0, 401);
        let ys: Vec<f64> = ts.iter().map(|t| (1.3 * t).sin()).collect();
        let s = Spline::new(ts, ys).unwrap();
        for &t in &[0.3, 1.0, 1.77] {
            let j = s.jet(t);
            assert!((j.v - (1.3 * t).sin()).abs() < 1e-8);
            assert!((j.d1 - 1.3 * (1.3 * t).cos()).abs() < 1e-5);
        }
    }

    #[test]
    fn sampled_curve_checks_reference_derivative() {
        let e = Expr::parse("exp(0.5*t)").unwrap();
        let ts = linspace(0.0, 1.0, 2001);
        let ys: Vec<f64> = ts.iter().map(|&t| e.value(t)).collect();
        assert!(Curve::sampled(ts.clone(), ys.clone(), Some(&e)).is_ok());
        let wrong = Expr::parse("exp(0.6*t)").unwrap();
        assert!(Curve::sampled(ts, ys, Some(&wrong)).is_err());
    }

    #[test]
    fn reversed_jets_flip_odd_derivatives() {
        let p = RadialProfile::new(Curve::parse("1 + t^2").unwrap(), Curve::parse("t^3").unwrap(), 2.0).unwrap();
        let (w, f) = p.jets(0.5, true);
        assert_eq!(w.v, 1.0 + 1.5 * 1.5);
        assert_eq!(w.d1, -3.0);
        assert_eq!(w.d2, 2.0);
        assert_eq!(f.d1, -3.0 * 1.5 * 1.5);
    }
}

//! Space-form comparison functions `𝔰_κ`, `𝔰_{κ,λ}`, their barriers and the
//! mean-curvature functions `H_κ`, `H_{κ,λ}`.

use serde::Serialize;

use super::ext::ExtReal;
use super::ModelError;
use crate::numeric::roots::first_root_scanning;

/// `(𝔰_κ(s), 𝔰'_κ(s))`: the solution of `ψ'' + κψ = 0`, `ψ(0) = 0`, `ψ'(0) = 1`.
pub fn sn_point(kappa: f64, s: f64) -> (f64, f64) {
    if kappa > 0.0 {
        let r = kappa.sqrt();
        let (sn, cs) = (r * s).sin_cos();
        (sn / r, cs)
    } else if kappa < 0.0 {
        let r = (-kappa).sqrt();
        ((r * s).sinh() / r, (r * s).cosh())
    } else {
        (s, 1.0)
    }
}

/// `(𝔰_{κ,λ}(s), 𝔰'_{κ,λ}(s))`: the solution of `ψ'' + κψ = 0`, `ψ(0) = 1`,
/// `ψ'(0) = -λ`.
pub fn sn_boundary(kappa: f64, lambda: f64, s: f64) -> (f64, f64) {
    if kappa > 0.0 {
        let r = kappa.sqrt();
        let (sn, cs) = (r * s).sin_cos();
        (cs - lambda * sn / r, -r * sn - lambda * cs)
    } else if kappa < 0.0 {
        let a = (-kappa).sqrt();
        if a * s <= 1.0 {
            // The exponential form below cancels when λ ≫ √|κ|.
            let (sh, ch) = ((a * s).sinh(), (a * s).cosh());
            let sh_over_a = if a * s == 0.0 { s } else { sh / a };
            return (ch - lambda * sh_over_a, a * sh - lambda * ch);
        }
        // Written in exponentials so that λ = √|κ| gives e^{-as} without
        // cancellation between cosh and sinh.
        let (p, q) = (0.5 * (1.0 - lambda / a), 0.5 * (1.0 + lambda / a));
        let (ep, em) = ((a * s).exp(), (-a * s).exp());
        (p * ep + q * em, a * (p * ep - q * em))
    } else {
        (1.0 - lambda * s, -lambda)
    }
}

/// Logarithmic derivative `𝔰'_{κ,λ}/𝔰_{κ,λ}`, evaluated without overflow for
/// large `s` in the hyperbolic branch.
pub fn sn_boundary_logderiv(kappa: f64, lambda: f64, s: f64) -> f64 {
    let a = (-kappa).max(0.0).sqrt();
    if kappa < 0.0 && a * s > 1.0 {
        let (p, q) = (1.0 - lambda / a, 1.0 + lambda / a);
        let e = (-2.0 * a * s).exp();
        a * (p - q * e) / (p + q * e)
    } else {
        let (v, d) = sn_boundary(kappa, lambda, s);
        d / v
    }
}

/// `C_{κ,λ}`: the first positive zero of `𝔰_{κ,λ}`, or `+∞`.
pub fn barrier_c(kappa: f64, lambda: f64) -> ExtReal {
    if kappa > 0.0 {
        let r = kappa.sqrt();
        ExtReal::Finite(r.atan2(lambda) / r)
    } else if kappa == 0.0 {
        if lambda > 0.0 {
            ExtReal::Finite(1.0 / lambda)
        } else {
            ExtReal::PosInf
        }
    } else {
        let a = (-kappa).sqrt();
        if lambda > a {
            ExtReal::Finite((a / lambda).atanh() / a)
        } else {
            ExtReal::PosInf
        }
    }
}

/// `D_{κ,λ}`: the first positive critical point of `𝔰_{κ,λ}` before
/// `C_{κ,λ}`, or `+∞` when there is none.
pub fn barrier_d(kappa: f64, lambda: f64) -> ExtReal {
    if kappa > 0.0 && lambda < 0.0 {
        let r = kappa.sqrt();
        ExtReal::Finite((-lambda / r).atan() / r)
    } else if kappa < 0.0 {
        let a = (-kappa).sqrt();
        if lambda > 0.0 && lambda < a {
            ExtReal::Finite((lambda / a).atanh() / a)
        } else {
            ExtReal::PosInf
        }
    } else {
        ExtReal::PosInf
    }
}

/// Reference value for `C_{κ,λ}` by scanning and bisection on the plain
/// trigonometric/hyperbolic formula. Independent of [`barrier_c`].
pub fn barrier_c_bisect(kappa: f64, lambda: f64) -> ExtReal {
    let f = |s: f64| {
        if kappa > 0.0 {
            let r = kappa.sqrt();
            (r * s).cos() - lambda * (r * s).sin() / r
        } else if kappa < 0.0 {
            let r = (-kappa).sqrt();
            (r * s).cosh() - lambda * (r * s).sinh() / r
        } else {
            1.0 - lambda * s
        }
    };
    let limit = if kappa > 0.0 { std::f64::consts::PI / kappa.sqrt() } else { 1e6 };
    let start = if kappa > 0.0 { limit / 64.0 } else { 1e-3 };
    first_root_scanning(f, start, limit, 1e-13).map_or(ExtReal::PosInf, ExtReal::Finite)
}

/// Reference value for `D_{κ,λ}` by scanning and bisection on `𝔰'_{κ,λ}`
/// up to `C_{κ,λ}`.
pub fn barrier_d_bisect(kappa: f64, lambda: f64) -> ExtReal {
    let f = |s: f64| {
        if kappa > 0.0 {
            let r = kappa.sqrt();
            -r * (r * s).sin() - lambda * (r * s).cos()
        } else if kappa < 0.0 {
            let r = (-kappa).sqrt();
            r * (r * s).sinh() - lambda * (r * s).cosh()
        } else {
            -lambda
        }
    };
    if f(0.0) == 0.0 {
        // Critical point sits at the origin; the next one, if any, lies past C.
        return ExtReal::PosInf;
    }
    let limit = barrier_c_bisect(kappa, lambda).finite().unwrap_or(1e6);
    let start = (limit / 256.0).min(1e-3);
    match first_root_scanning(f, start, limit, 1e-13) {
        Some(s) if s < limit => ExtReal::Finite(s),
        _ => ExtReal::PosInf,
    }
}

/// A `(κ, λ)` pair with its condition flags and barriers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelPair {
    pub kappa: f64,
    pub lambda: f64,
    pub ball: bool,
    pub convex_ball: bool,
    pub monotone: bool,
    pub weakly_monotone: bool,
    pub model: bool,
    pub c: ExtReal,
    pub d: ExtReal,
}

pub fn classify_pair(kappa: f64, lambda: f64) -> ModelPair {
    let r = kappa.abs().sqrt();
    let ball = kappa > 0.0 || (kappa == 0.0 && lambda > 0.0) || (kappa < 0.0 && lambda > r);
    let convex_ball = ball && lambda >= 0.0;
    let monotone = convex_ball || (kappa <= 0.0 && lambda == r);
    let weakly_monotone = kappa >= 0.0 || lambda.abs() >= r;
    let model = (kappa > 0.0 && lambda < 0.0) || (kappa == 0.0 && lambda == 0.0) || (kappa < 0.0 && lambda > 0.0 && lambda < r);
    ModelPair {
        kappa,
        lambda,
        ball,
        convex_ball,
        monotone,
        weakly_monotone,
        model,
        c: barrier_c(kappa, lambda),
        d: barrier_d(kappa, lambda),
    }
}

/// Distance kept from `C_{κ,λ}` when evaluating `H_{κ,λ}`.
pub fn barrier_gap(c_barrier: f64) -> f64 {
    1e-9 * c_barrier.max(1.0)
}

/// `H_{κ,λ}(s) = -c⁻¹ 𝔰'_{κ,λ}(s)/𝔰_{κ,λ}(s)` on `[0, C_{κ,λ})`.
pub fn h_boundary(c: f64, kappa: f64, lambda: f64, s: f64) -> Result<f64, ModelError> {
    if !(s >= 0.0) {
        return Err(ModelError::Domain { what: "H_{κ,λ}", arg: s, reason: "s must be non-negative" });
    }
    if let Some(cb) = barrier_c(kappa, lambda).finite() {
        if s >= cb - barrier_gap(cb) {
            return Err(ModelError::Domain { what: "H_{κ,λ}", arg: s, reason: "s at or beyond C_{κ,λ}" });
        }
    }
    Ok(-sn_boundary_logderiv(kappa, lambda, s) / c)
}

/// `H'_{κ,λ}` from the Riccati identity `H' = c⁻¹κ + cH²`.
pub fn h_boundary_deriv(c: f64, kappa: f64, lambda: f64, s: f64) -> Result<f64, ModelError> {
    let h = h_boundary(c, kappa, lambda, s)?;
    Ok(kappa / c + c * h * h)
}

/// `H_κ(s) = -c⁻¹ 𝔰'_κ(s)/𝔰_κ(s)` on `]0, π/√κ[` (or `]0, ∞[` for `κ ≤ 0`).
pub fn h_point(c: f64, kappa: f64, s: f64) -> Result<f64, ModelError> {
    if !(s > 0.0) {
        return Err(ModelError::Domain { what: "H_κ", arg: s, reason: "s must be positive" });
    }
    let ratio = if kappa > 0.0 {
        let r = kappa.sqrt();
        if r * s >= std::f64::consts::PI {
            return Err(ModelError::Domain { what: "H_κ", arg: s, reason: "s beyond the first zero of 𝔰_κ" });
        }
        r / (r * s).tan()
    } else if kappa < 0.0 {
        let r = (-kappa).sqrt();
        r / (r * s).tanh()
    } else {
        1.0 / s
    };
    Ok(-ratio / c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sn_boundary_continuous_in_small_negative_kappa() {
        for s in [0.1, 0.5, 0.9] {
            let (v, d) = sn_boundary(-1e-14, 1.0, s);
            assert!((v - (1.0 - s)).abs() < 1e-13 && (d + 1.0).abs() < 1e-13, "{s}: {v} {d}");
            let h = h_boundary(0.5, -1e-14, 1.0, s).unwrap();
            assert!((h - 2.0 / (1.0 - s)).abs() < 1e-12 * h);
        }
        let (v, d) = sn_boundary(-4.0, 2.0, 3.0);
        assert!((v - (-6.0f64).exp()).abs() < 1e-18 && (d + 2.0 * (-6.0f64).exp()).abs() < 1e-17);
    }

    #[test]
    fn sn_point_branches() {
        assert_eq!(sn_point(0.0, 0.7), (0.7, 1.0));
        let (v, d) = sn_point(1.0, std::f64::consts::FRAC_PI_2);
        assert!((v - 1.0).abs() < 1e-15 && d.abs() < 1e-15);
        let (v, d) = sn_point(-1.0, 1.0);
        assert!((v - 1.0f64.sinh()).abs() < 1e-15 && (d - 1.0f64.cosh()).abs() < 1e-15);
    }

    #[test]
    fn sn_boundary_branches() {
        for &s in &[0.0, 0.3, 2.0] {
            assert_eq!(sn_boundary(0.0, 0.4, s), (1.0 - 0.4 * s, -0.4));
            let (v, d) = sn_boundary(1.0, 0.0, s);
            assert!((v - s.cos()).abs() < 1e-15 && (d + s.sin()).abs() < 1e-15);
            let (v, d) = sn_boundary(-1.0, 1.0, s);
            assert!((v - (-s).exp()).abs() < 1e-15 && (d + (-s).exp()).abs() < 1e-15);
        }
    }

    #[test]
    fn barriers() {
        assert_eq!(barrier_c(0.0, 2.0), ExtReal::Finite(0.5));
        assert!((barrier_c(1.0, 0.0).as_f64() - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!((barrier_c(-1.0, 2.0).as_f64() - 0.5f64.atanh()).abs() < 1e-15);
        assert_eq!(barrier_c(-1.0, 1.0), ExtReal::PosInf);
        assert!((barrier_d(1.0, -1.0).as_f64() - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        assert_eq!(barrier_d(1.0, 0.0), ExtReal::PosInf);
        let d = barrier_d(4.0, -1.0).as_f64();
        assert!((d - barrier_d_bisect(4.0, -1.0).as_f64()).abs() < 1e-10);
        assert!((d - 0.231_823_804).abs() < 1e-8);
    }

    #[test]
    fn documented_classifications() {
        let p = classify_pair(1.0, -1.0);
        assert!(p.ball && !p.convex_ball && p.model && p.weakly_monotone);
        let p = classify_pair(-1.0, 1.0);
        assert!(p.monotone && !p.ball);
        let p = classify_pair(-1.0, 0.5);
        assert!(p.model && !p.weakly_monotone);
    }

    #[test]
    fn h_values() {
        let c = 0.5;
        assert!((h_boundary(c, 2.0, 0.3, 0.0).unwrap() - 0.3 / c).abs() < 1e-15);
        assert_eq!(h_boundary(c, 0.0, 0.0, 1.3).unwrap(), 0.0);
        assert!((h_boundary(c, -1.0, 1.0, 40.0).unwrap() - 1.0 / c).abs() < 1e-14);
        assert!(h_boundary(c, 0.0, 1.0, 1.0).is_err());
        assert!((h_point(c, 0.0, 0.25).unwrap() + 4.0 / c).abs() < 1e-14);
        assert!(h_point(c, 1.0, std::f64::consts::FRAC_PI_2).unwrap().abs() < 1e-15);
        assert!((h_point(c, -1.0, 1.0).unwrap() + 1.313_035_285_499_331 / c).abs() < 1e-12);
        assert!(h_point(c, 1.0, 0.0).is_err());
        assert!(h_point(c, 1.0, 3.2).is_err());
    }
}

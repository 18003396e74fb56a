//! Model volume `𝒮_{κ,λ}` and the spectrum constant `C(κ,λ,D)`.

use super::ext::ExtReal;
use super::functions::{barrier_c, sn_boundary};
use super::ModelError;
use crate::numeric::quad::{integrate, QuadOptions};
use crate::numeric::roots::golden_max;

const QUAD: QuadOptions = QuadOptions { abs_tol: 1e-12, rel_tol: 1e-12, max_panels: 4000 };

/// `𝔰_{κ,λ}(s)^{1/c}`, clamped to zero past the barrier.
pub fn sn_power(c: f64, kappa: f64, lambda: f64, s: f64) -> f64 {
    sn_boundary(kappa, lambda, s).0.max(0.0).powf(1.0 / c)
}

/// `𝒮_{κ,λ}(r) = ∫₀^{min(r, C_{κ,λ})} 𝔰_{κ,λ}^{1/c}`.
pub fn s_volume(c: f64, kappa: f64, lambda: f64, r: f64) -> Result<f64, ModelError> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(ModelError::Domain { what: "𝒮_{κ,λ}", arg: r, reason: "r must be positive and finite" });
    }
    let upper = barrier_c(kappa, lambda).min_f64(r);
    Ok(integrate(|s| sn_power(c, kappa, lambda, s), 0.0, upper, QUAD).value)
}

fn is_exponential_pair(kappa: f64, lambda: f64) -> bool {
    kappa < 0.0 && (lambda - (-kappa).sqrt()).abs() <= 1e-12 * lambda.abs().max(1.0)
}

/// `(∫_s^hi 𝔰^{1/c}) / 𝔰^{1/c}(s)`, computed as one integral of the ratio
/// `(𝔰(ξ)/𝔰(s))^{1/c}` so large hyperbolic growth does not overflow.
pub fn tail_ratio(c: f64, kappa: f64, lambda: f64, s: f64, hi: f64) -> f64 {
    let base = sn_boundary(kappa, lambda, s).0;
    if base <= 0.0 || s >= hi {
        return 0.0;
    }
    integrate(|x| (sn_boundary(kappa, lambda, x).0.max(0.0) / base).powf(1.0 / c), s, hi, QUAD).value
}

/// `sup_{s ∈ [lo, hi)} tail_ratio(s)` by a 1024-point scan and golden-section
/// polish. Returns `(argmax, value)`.
pub fn tail_ratio_sup(c: f64, kappa: f64, lambda: f64, lo: f64, hi: f64) -> (f64, f64) {
    const POINTS: usize = 1024;
    let f = |s: f64| tail_ratio(c, kappa, lambda, s, hi);
    let h = (hi - lo) / POINTS as f64;
    let mut best = (lo, f(lo));
    let mut best_i = 0;
    for i in 1..POINTS {
        let s = lo + h * i as f64;
        let v = f(s);
        if v > best.1 {
            best = (s, v);
            best_i = i;
        }
    }
    let a = lo + h * best_i.saturating_sub(1) as f64;
    let b = (lo + h * (best_i + 1) as f64).min(hi);
    let polished = golden_max(f, a, b, 1e-9);
    if polished.1 > best.1 {
        polished
    } else {
        best
    }
}

/// `C(κ,λ,D) = sup_{s∈[0,D)} (∫_s^D 𝔰^{1/c}) / 𝔰^{1/c}(s)`.
///
/// For `κ < 0`, `λ = √|κ|` the closed form `(c⁻¹λ)⁻¹(1 - e^{-c⁻¹λD})` is used,
/// which is also the only case where `D = +∞` is accepted.
pub fn spectrum_constant(c: f64, kappa: f64, lambda: f64, d: ExtReal) -> Result<f64, ModelError> {
    let exp_pair = is_exponential_pair(kappa, lambda);
    match d {
        ExtReal::PosInf if exp_pair => Ok(c / lambda),
        ExtReal::PosInf => Err(ModelError::Domain {
            what: "C(κ,λ,D)",
            arg: f64::INFINITY,
            reason: "D = +∞ requires κ < 0 and λ = √|κ|",
        }),
        ExtReal::Finite(dv) => {
            if !(dv > 0.0) {
                return Err(ModelError::Domain { what: "C(κ,λ,D)", arg: dv, reason: "D must be positive" });
            }
            if let Some(cb) = barrier_c(kappa, lambda).finite() {
                if dv > cb * (1.0 + 1e-12) {
                    return Err(ModelError::Domain { what: "C(κ,λ,D)", arg: dv, reason: "D beyond C_{κ,λ}" });
                }
            }
            if exp_pair {
                let r = lambda / c;
                return Ok((1.0 - (-r * dv).exp()) / r);
            }
            Ok(tail_ratio_sup(c, kappa, lambda, 0.0, dv).1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s_volume_documented_values() {
        for &c in &[1.0, 0.5, 0.2] {
            assert!((s_volume(c, 0.0, 0.0, 1.7).unwrap() - 1.7).abs() < 1e-12);
        }
        assert!((s_volume(1.0, 0.0, 1.0, 1.0).unwrap() - 0.5).abs() < 1e-12);
        assert!((s_volume(1.0, 0.0, 1.0, 5.0).unwrap() - 0.5).abs() < 1e-12);
        assert!((s_volume(0.5, 0.0, 1.0, 1.0).unwrap() - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn spectrum_constant_documented_values() {
        assert_eq!(spectrum_constant(0.5, -1.0, 1.0, ExtReal::PosInf).unwrap(), 0.5);
        let v = spectrum_constant(0.5, -1.0, 1.0, ExtReal::Finite(2f64.ln())).unwrap();
        assert!((v - 0.375).abs() < 1e-15);
        let v = spectrum_constant(1.0, 0.0, 0.0, ExtReal::Finite(1.0)).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        assert!(spectrum_constant(1.0, 1.0, 0.0, ExtReal::PosInf).is_err());
    }

    #[test]
    fn exponential_closed_form_matches_numeric_sup() {
        let (c, k, l, d) = (0.4, -2.25, 1.5, 1.3);
        let closed = spectrum_constant(c, k, l, ExtReal::Finite(d)).unwrap();
        let numeric = tail_ratio_sup(c, k, l, 0.0, d).1;
        assert!((closed - numeric).abs() < 1e-10, "{closed} {numeric}");
    }
}

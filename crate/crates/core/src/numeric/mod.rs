//! Small numerical toolkit shared by every module: jets for exact profile
//! derivatives, adaptive quadrature, bracketed root finding and an
//! embedded Runge–Kutta integrator.

pub mod jet;
pub mod ode;
pub mod quad;
pub mod roots;

pub use jet::Jet;

/// Uniform grid of `n` points on `[a, b]` (inclusive).
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => {
            let h = (b - a) / (n - 1) as f64;
            (0..n).map(|i| if i == n - 1 { b } else { a + h * i as f64 }).collect()
        }
    }
}

//! Browser bindings for the demo page in `www/`: model profiles, model
//! eigenvalues and scenario runs. Each binding wraps a plain function that
//! returns JSON or a message, so the logic is testable off the browser.

use serde::Serialize;
use wasm_bindgen::prelude::*;
use warpcheck::model::{classify_pair, h_boundary, sn_boundary, validate_params, ExtReal, ModelPair};
use warpcheck::scenario::{run_scenario_str, to_json, RunOverrides};

#[derive(Debug, Serialize)]
pub struct ModelProfile {
    pub pair: ModelPair,
    /// `c = (1-ε²k)/(n-1)`.
    pub c: f64,
    pub s: Vec<f64>,
    pub sn: Vec<f64>,
    /// `H_{κ,λ}(s)`, `None` at or past the barrier.
    pub h: Vec<Option<f64>>,
}

fn ext(x: f64) -> ExtReal {
    if x == f64::INFINITY {
        ExtReal::PosInf
    } else {
        ExtReal::Finite(x)
    }
}

/// `𝔰_{κ,λ}` and `H_{κ,λ}` on `samples` points of `[0, s_max]`, with the
/// condition flags and barriers of `(κ, λ)`.
pub fn model_profile(n: usize, big_n: f64, eps: f64, kappa: f64, lambda: f64, s_max: f64, samples: usize) -> Result<ModelProfile, String> {
    let dims = validate_params(n, ext(big_n), eps).map_err(|e| e.to_string())?;
    if !(s_max > 0.0 && s_max.is_finite()) || samples < 2 {
        return Err("need s_max > 0 and at least two samples".to_owned());
    }
    let s: Vec<f64> = (0..samples).map(|i| s_max * i as f64 / (samples - 1) as f64).collect();
    let sn = s.iter().map(|&x| sn_boundary(kappa, lambda, x).0).collect();
    let h = s.iter().map(|&x| h_boundary(dims.c, kappa, lambda, x).ok().filter(|v| v.is_finite())).collect();
    Ok(ModelProfile { pair: classify_pair(kappa, lambda), c: dims.c, s, sn, h })
}

/// First Dirichlet–Neumann eigenvalue of the weighted `p`-Laplacian on the
/// model interval `[0, d]`.
pub fn model_eigenvalue(p: f64, k: f64, kappa: f64, lambda: f64, d: f64) -> Result<f64, String> {
    warpcheck::spectrum::model_eigenvalue(p, k, kappa, lambda, d).map(|r| r.value).map_err(|e| e.to_string())
}

/// Run a scenario given as JSON text and return the report as JSON.
pub fn run_scenario(text: &str) -> Result<String, String> {
    run_scenario_str(text, &RunOverrides::default()).map(|r| to_json(&r)).map_err(|e| e.to_string())
}

#[wasm_bindgen(js_name = modelProfile)]
pub fn model_profile_js(n: usize, big_n: f64, eps: f64, kappa: f64, lambda: f64, s_max: f64, samples: usize) -> Result<String, JsError> {
    let p = model_profile(n, big_n, eps, kappa, lambda, s_max, samples).map_err(|e| JsError::new(&e))?;
    serde_json::to_string(&p).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = modelEigenvalue)]
pub fn model_eigenvalue_js(p: f64, k: f64, kappa: f64, lambda: f64, d: f64) -> Result<f64, JsError> {
    model_eigenvalue(p, k, kappa, lambda, d).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = runScenario)]
pub fn run_scenario_js(text: &str) -> Result<String, JsError> {
    run_scenario(text).map_err(|e| JsError::new(&e))
}

//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each export takes plain strings and returns a JSON string. The `*_json`
//! functions hold the logic and are what the native tests call.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use opclass::analyze::{self, ContinuationOptions, ShiftOptions};
use opclass::linalg::DEFAULT_TOL;
use opclass::rational::{self, ExactRational};
use opclass::shift::{self, Tail, WeightSequence};

fn parse_list(text: &str) -> Result<Vec<ExactRational>, String> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| rational::parse_rational(s).map_err(|e| e.to_string()))
        .collect()
}

/// `tail` with one entry is a constant tail, with several a periodic cycle.
fn weights(prefix: &str, tail: &str) -> Result<WeightSequence, String> {
    let mut cycle = parse_list(tail)?;
    let tail = match cycle.len() {
        0 => return Err("the tail needs at least one weight".into()),
        1 => Tail::Constant(cycle.remove(0)),
        _ => Tail::Periodic(cycle),
    };
    WeightSequence::new(parse_list(prefix)?, tail).map_err(|e| e.to_string())
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("results serialize")
}

pub fn analyze_shift_json(prefix: &str, tail: &str, n: usize, k_max: usize) -> Result<String, String> {
    let w = weights(prefix, tail)?;
    let opts = ShiftOptions {
        n,
        k_max,
        ..ShiftOptions::default()
    };
    analyze::analyze_shift(&w, &opts, DEFAULT_TOL)
        .map(|doc| doc.to_json())
        .map_err(|e| e.to_string())
}

pub fn derive_quasinormal_json(n: usize, seed: &str, steps: usize) -> Result<String, String> {
    let opts = ContinuationOptions {
        n,
        steps,
        exact: true,
        bound: 1e6,
        horizon: 500,
    };
    analyze::derive_quasinormal(&parse_list(seed)?, &opts, DEFAULT_TOL)
        .map(|doc| doc.to_json())
        .map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct CurvePoint {
    s: f64,
    min_eigenvalue: f64,
}

pub fn quadratic_curve_json(prefix: &str, tail: &str, truncation: usize) -> Result<String, String> {
    let w = weights(prefix, tail)?;
    let curve = shift::quadratic_probe_curve(&w, &shift::default_s_grid(), truncation, DEFAULT_TOL)
        .map_err(|e| e.to_string())?;
    let points: Vec<CurvePoint> = curve
        .into_iter()
        .map(|(s, min_eigenvalue)| CurvePoint { s, min_eigenvalue })
        .collect();
    Ok(to_json(&points))
}

#[wasm_bindgen(js_name = analyzeShift)]
pub fn analyze_shift(prefix: &str, tail: &str, n: u32, k_max: u32) -> Result<String, JsError> {
    analyze_shift_json(prefix, tail, n as usize, k_max as usize).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = deriveQuasinormal)]
pub fn derive_quasinormal(n: u32, seed: &str, steps: u32) -> Result<String, JsError> {
    derive_quasinormal_json(n as usize, seed, steps as usize).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = quadraticCurve)]
pub fn quadratic_curve(prefix: &str, tail: &str, truncation: u32) -> Result<String, JsError> {
    quadratic_curve_json(prefix, tail, truncation as usize).map_err(|e| JsError::new(&e))
}

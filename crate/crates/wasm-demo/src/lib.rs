//! Browser bindings. Every function returns a JSON string; the page in
//! `www/` renders it.

use biharmonic::crystals::{bfpq, crystals_up_to};
use biharmonic::divisor_means::{divisor_means, enumerate, MeanKind};
use biharmonic::factorize;
use biharmonic::recurrences::u_seq;
use serde::Serialize;
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Largest limit the page may ask for; keeps the tab responsive.
pub const MAX_LIMIT: u32 = 2_000_000;

#[derive(Serialize)]
struct MeansView {
    #[serde(flatten)]
    record: biharmonic::divisor_means::DivisorMeansRecord,
    divisors: Vec<u64>,
}

pub fn means_json(n: u32) -> Result<String, String> {
    let n = n as u64;
    let record = divisor_means(n).map_err(|e| e.to_string())?;
    let divisors = factorize(n).map_err(|e| e.to_string())?.divisors();
    serde_json::to_string(&MeansView { record, divisors }).map_err(|e| e.to_string())
}

pub fn enumerate_json(kind: &str, limit: u32) -> Result<String, String> {
    if limit > MAX_LIMIT {
        return Err(format!("limit above {MAX_LIMIT}"));
    }
    let kind: MeanKind = kind.parse()?;
    let e = enumerate(kind, limit as u64).map_err(|e| e.to_string())?;
    serde_json::to_string(&e).map_err(|e| e.to_string())
}

/// Consecutive `(u_n, u_{n−1})` for the plot plus the crystals of `w` up
/// to `limit`.
pub fn orbit_json(w: u32, steps: u32, limit: u32) -> Result<String, String> {
    if w == 0 {
        return Err("w must be positive".into());
    }
    let u = u_seq(w as u64, steps.min(200) as usize);
    let pairs: Vec<[String; 2]> = u.windows(2).map(|p| [p[1].to_string(), p[0].to_string()]).collect();
    let crystals: Vec<_> = crystals_up_to(w as u64, limit as u64)
        .into_iter()
        .map(|r| {
            let b = bfpq(r.a.clone(), r.b.clone()).b;
            json!({ "N": r.n.to_string(), "a": r.a.to_string(), "b": r.b.to_string(), "index": r.index, "B": b.to_string() })
        })
        .collect();
    Ok(json!({ "w": w, "pairs": pairs, "crystals": crystals }).to_string())
}

#[wasm_bindgen]
pub fn means(n: u32) -> Result<String, JsError> {
    means_json(n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = enumerate)]
pub fn enumerate_js(kind: &str, limit: u32) -> Result<String, JsError> {
    enumerate_json(kind, limit).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn orbit(w: u32, steps: u32, limit: u32) -> Result<String, JsError> {
    orbit_json(w, steps, limit).map_err(|e| JsError::new(&e))
}

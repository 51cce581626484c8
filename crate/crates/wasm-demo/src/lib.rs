//! Browser bindings: each function takes an input document (the same JSON
//! the CLI reads) and returns a JSON string.

use cires_core::groebner::{format_zpoly, product_formula};
use cires_core::io::InputSpec;
use cires_core::resolution::minimal_resolution;
use cires_core::verify::{report_rows, verify_example_sharpness};
use serde_json::json;
use wasm_bindgen::prelude::*;

const MAX_LENGTH: usize = 16;

fn load(input: &str) -> Result<cires_core::io::Problem, String> {
    InputSpec::parse(input).and_then(|s| s.build()).map_err(|e| e.to_string())
}

fn check_length(length: usize) -> Result<(), String> {
    if length == 0 || length > MAX_LENGTH {
        return Err(format!("length must be between 1 and {MAX_LENGTH}"));
    }
    Ok(())
}

pub fn betti_table_json(input: &str, length: usize) -> Result<String, String> {
    check_length(length)?;
    let p = load(input)?;
    let m = p.module.as_ref().ok_or("input has no `module`")?;
    let res = minimal_resolution(m, &p.ci, length).map_err(|e| e.to_string())?;
    Ok(json!({ "rows": report_rows(&res), "bound": p.ci.max_degree().map(|s| s - 1) }).to_string())
}

pub fn hilbert_json(input: &str) -> Result<String, String> {
    let p = load(input)?;
    let h = p.ci.hilbert();
    let expected = product_formula(p.ci.degrees());
    Ok(json!({
        "h": format_zpoly(&h.numerator),
        "product": format_zpoly(&expected),
        "matches": h.numerator == expected,
        "dim": h.dim,
        "length": h.length,
    })
    .to_string())
}

pub fn sharpness_json(input: &str, length: usize) -> Result<String, String> {
    check_length(length)?;
    let p = load(input)?;
    let mf = p.mf.as_ref().ok_or("input has no `mf` or `ulrich`")?;
    let report = verify_example_sharpness(&p.ci, mf, length).map_err(|e| e.to_string())?;
    Ok(json!({
        "phi": mf.phi().to_strings(),
        "psi": mf.psi().to_strings(),
        "report": report,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn betti_table(input: &str, length: usize) -> Result<String, JsValue> {
    betti_table_json(input, length).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn hilbert_series(input: &str) -> Result<String, JsValue> {
    hilbert_json(input).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn ulrich_sharpness(input: &str, length: usize) -> Result<String, JsValue> {
    sharpness_json(input, length).map_err(|e| JsValue::from_str(&e))
}

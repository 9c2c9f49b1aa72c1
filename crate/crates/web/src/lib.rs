//! Browser bindings: build a divide from Puiseux pairs, analyze it, render it.
//!
//! Divides cross the boundary as the same JSON documents the CLI reads and writes.

use dividelab::divide::Divide;
use dividelab::generators::{puiseux_divide, reduction_count, PuiseuxPairs};
use dividelab::render::{render_svg, LayoutOptions};
use dividelab::report::analyze;
use wasm_bindgen::prelude::*;

fn parse_pairs(pairs: &str) -> Result<PuiseuxPairs, String> {
    pairs.parse().map_err(|e: dividelab::error::GeneratorError| e.to_string())
}

/// Divide JSON for the germ with the given Puiseux pairs.
pub fn divide_json(pairs: &str) -> Result<String, String> {
    let pp = parse_pairs(pairs)?;
    Ok(puiseux_divide(&pp).map_err(|e| e.to_string())?.to_json())
}

/// Plain-text report; `pairs` may be empty when the divide has no Puiseux data.
pub fn report_text(json: &str, pairs: &str) -> Result<String, String> {
    let d = Divide::from_json(json).map_err(|e| e.to_string())?;
    let mut report = analyze(&d).map_err(|e| e.to_string())?;
    if !pairs.trim().is_empty() {
        report.reduction_curves = Some(reduction_count(&parse_pairs(pairs)?));
    }
    Ok(report.to_string())
}

pub fn svg(json: &str, seed: u64) -> Result<String, String> {
    let d = Divide::from_json(json).map_err(|e| e.to_string())?;
    let options = LayoutOptions { seed, ..LayoutOptions::default() };
    render_svg(&d, &options).map_err(|e| e.to_string())
}

#[wasm_bindgen(js_name = puiseuxDivide)]
pub fn puiseux_divide_js(pairs: &str) -> Result<String, JsError> {
    divide_json(pairs).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = analyzeDivide)]
pub fn analyze_js(json: &str, pairs: &str) -> Result<String, JsError> {
    report_text(json, pairs).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = renderDivide)]
pub fn render_js(json: &str, seed: u32) -> Result<String, JsError> {
    svg(json, seed.into()).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pipeline() {
        let json = divide_json("(2,3),(2,7)").unwrap();
        let text = report_text(&json, "(2,3),(2,7)").unwrap();
        assert!(text.contains("mu = 16"));
        assert!(text.contains("reduction curves = 2"));
        let a = svg(&json, 1).unwrap();
        assert_eq!(a, svg(&json, 1).unwrap());
        assert!(a.contains("<svg"));
    }

    #[test]
    fn errors_are_messages() {
        assert!(divide_json("(2,4)").unwrap_err().contains("gcd"));
        assert!(report_text("{", "").unwrap_err().contains("malformed JSON"));
    }
}

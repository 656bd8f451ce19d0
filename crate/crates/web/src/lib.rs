//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Each operation takes plain strings and numbers and returns a JSON string,
//! or an error message.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use quasimodular::brackets::{bracket, default_params, rc_coeffs};
use quasimodular::numkernel::format_rational;
use quasimodular::spaces;
use quasimodular::{expr, QuasiForm};

/// Orders beyond this make the page unresponsive.
pub const MAX_ORDER: usize = 200;

fn form_json(f: &QuasiForm) -> Value {
    json!({
        "weight": f.weight(),
        "depth": f.exact_depth().unwrap_or(0),
        "form": f.to_string(),
    })
}

fn parse(text: &str) -> Result<QuasiForm, String> {
    expr::eval_str(text).map_err(|e| e.to_string())
}

/// q-expansion coefficients `a_0 .. a_order` as decimal strings.
pub fn expand_json(text: &str, order: usize) -> Result<String, String> {
    if order > MAX_ORDER {
        return Err(format!("order is capped at {MAX_ORDER}"));
    }
    let f = parse(text)?;
    let coeffs: Vec<String> = f.to_qseries(order).dense().iter().map(format_rational).collect();
    let mut v = form_json(&f);
    v["coeffs"] = json!(coeffs);
    Ok(v.to_string())
}

/// `[f, g]_n` with the weights and exact depths of the inputs.
pub fn bracket_json(f: &str, g: &str, n: u32) -> Result<String, String> {
    let (f, g) = (parse(f)?, parse(g)?);
    let b = bracket(&f, &g, n, None).map_err(|e| e.to_string())?;
    let p = default_params(&f, &g, n).map_err(|e| e.to_string())?;
    let mut v = form_json(&b);
    v["params"] = json!(p.to_string());
    v["coefficients"] = json!(rc_coeffs(&p).to_string());
    Ok(v.to_string())
}

/// `f = sum_j D^j m_j + c D^{k/2-1} E2` with each `m_j` modular.
pub fn decompose_json(text: &str) -> Result<String, String> {
    let f = parse(text)?;
    let d = spaces::decompose(&f).map_err(|e| e.to_string())?;
    let parts: Vec<Value> = d.parts.iter().map(|(j, m)| json!({"j": j, "modular": m.to_string()})).collect();
    let mut v = form_json(&f);
    v["parts"] = json!(parts);
    v["line"] = json!(d.line.as_ref().map(format_rational));
    Ok(v.to_string())
}

#[wasm_bindgen]
pub fn expand(text: &str, order: usize) -> Result<String, JsError> {
    expand_json(text, order).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = bracket)]
pub fn bracket_js(f: &str, g: &str, n: u32) -> Result<String, JsError> {
    bracket_json(f, g, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn decompose(text: &str) -> Result<String, JsError> {
    decompose_json(text).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn value(s: Result<String, String>) -> Value {
        serde_json::from_str(&s.unwrap()).unwrap()
    }

    #[test]
    fn expand_delta() {
        let v = value(expand_json("Delta", 5));
        assert_eq!(v["coeffs"], json!(["0", "1", "-24", "252", "-1472", "4830"]));
        assert_eq!(v["weight"], 12);
        assert!(expand_json("Delta", MAX_ORDER + 1).is_err());
        assert!(expand_json("E3", 5).is_err());
    }

    #[test]
    fn bracket_e2_delta() {
        let v = value(bracket_json("E2", "Delta", 1));
        assert_eq!(v["form"], "1/1728*E4^4 - 1/1728*E4*E6^2");
        assert_eq!(v["depth"], 0);
        assert_eq!(v["coefficients"], "(1,-12)");
        assert!(bracket_json("E2", "1", 1).is_err());
    }

    #[test]
    fn decompose_line() {
        let v = value(decompose_json("E2^2"));
        assert_eq!(v["line"], "12");
        let v = value(decompose_json("D(E4)"));
        assert_eq!(v["parts"][0]["j"], 1);
        assert!(v["line"].is_null());
    }
}

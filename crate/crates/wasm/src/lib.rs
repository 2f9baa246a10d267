//! Browser bindings: JSON-in/JSON-out wrappers over the entropy library.
//!
//! Each exported function takes plain strings/integers and returns a JSON
//! string (or throws a string error), so the page needs no generated glue
//! beyond the wasm-bindgen loader. The `*_string` functions hold the actual
//! logic and are exercised by host-side tests; the `#[wasm_bindgen]` exports
//! are one-line shims.
//!
//! Single-threaded by construction: the library is built without its
//! `parallel` feature, so no worker or shared-memory setup is needed.

use core_entropy::{
    core_entropy, kneading_lambda, kneading_sequence, parse_angle, root_cloud, CloudSet, Error,
};
use wasm_bindgen::prelude::*;

fn err_text(e: Error) -> String {
    e.to_string()
}

/// JSON string field (all renderings here are quote- and backslash-free:
/// fractions, binary expansions, symbol words).
fn jstr(s: &str) -> String {
    debug_assert!(!s.contains('"') && !s.contains('\\'));
    format!("\"{s}\"")
}

/// Full report for one external angle: growth data plus the kneading word
/// and, on the real slice, the kneading-determinant cross-check.
pub fn angle_report_string(angle: &str) -> Result<String, String> {
    let theta = parse_angle(angle).map_err(err_text)?;
    let r = core_entropy(theta).map_err(err_text)?;
    let nu = kneading_sequence(theta).map_err(err_text)?;
    let (pre, per) = theta.to_binary().map_err(err_text)?;
    let mut json = format!(
        "{{\"theta\":{},\"binary_pre\":{},\"binary_per\":{},\"preperiod\":{},\"period\":{},\"matrix_dim\":{},\"lambda\":{},\"entropy\":{},\"dimension\":{},\"nu\":{}",
        jstr(&theta.to_string()),
        jstr(&pre),
        jstr(&per),
        r.preperiod,
        r.period,
        r.matrix_dim,
        r.lambda,
        r.entropy,
        r.dimension,
        jstr(&nu.to_string()),
    );
    // the kneading route lives on the real slice; mirror angles are reported
    // without it rather than rejected
    if 2 * theta.numer() <= theta.denom() {
        let kv = kneading_lambda(theta, core_entropy::kneading_det::DEFAULT_TERMS)
            .map_err(err_text)?;
        json.push_str(&format!(
            ",\"admissible\":{},\"kneading_lambda\":{}",
            kv.admissible, kv.lambda
        ));
        if let Some(t) = kv.t_star {
            json.push_str(&format!(",\"t_star\":{t}"));
        }
    }
    json.push('}');
    Ok(json)
}

/// Depth accepted from the page; deeper grids freeze the tab long before
/// they exhaust the library's own budget.
const MAX_BROWSER_DEPTH: u32 = 14;

/// Growth-rate samples on the dyadic grid of `depth` over [lo, hi], as a
/// JSON array of {num, den, theta, lambda, dimension}.
pub fn graph_json_string(lo: &str, hi: &str, depth: u32) -> Result<String, String> {
    if depth > MAX_BROWSER_DEPTH {
        return Err(format!(
            "depth {depth} exceeds the in-page cap {MAX_BROWSER_DEPTH}"
        ));
    }
    let lo = parse_angle(lo).map_err(err_text)?;
    let hi = parse_angle(hi).map_err(err_text)?;
    let samples =
        core_entropy::graph_samples(lo, hi, depth, core_entropy::entropy::DEFAULT_TOL)
            .map_err(err_text)?;
    let rows: Vec<String> = samples
        .iter()
        .map(|r| {
            format!(
                "{{\"num\":{},\"den\":{},\"theta\":{},\"lambda\":{},\"dimension\":{}}}",
                r.theta.numer(),
                r.theta.denom(),
                r.theta.to_f64(),
                r.lambda,
                r.dimension
            )
        })
        .collect();
    Ok(format!("[{}]", rows.join(",")))
}

/// Degree/period bound accepted from the page (the library caps are sized
/// for batch runs, not a UI thread).
const MAX_BROWSER_DEGREE: u32 = 12;

/// Root cloud of one coefficient class, as JSON
/// {set, polynomials, points: [[re, im, degree], …]}.
pub fn root_cloud_json_string(set: &str, max_degree: u32) -> Result<String, String> {
    if max_degree > MAX_BROWSER_DEGREE {
        return Err(format!(
            "max degree {max_degree} exceeds the in-page cap {MAX_BROWSER_DEGREE}"
        ));
    }
    let set: CloudSet = set.parse().map_err(err_text)?;
    let cloud = root_cloud(set, max_degree, core_entropy::galois::DEFAULT_ROOT_RESIDUAL)
        .map_err(err_text)?;
    let pts: Vec<String> = cloud
        .points
        .iter()
        .map(|p| format!("[{},{},{}]", p.re, p.im, p.degree))
        .collect();
    Ok(format!(
        "{{\"set\":{},\"polynomials\":{},\"points\":[{}]}}",
        jstr(&set.as_str().to_ascii_lowercase()),
        cloud.polynomials,
        pts.join(",")
    ))
}

#[wasm_bindgen]
pub fn angle_report(angle: &str) -> Result<String, JsValue> {
    angle_report_string(angle).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn graph_json(lo: &str, hi: &str, depth: u32) -> Result<String, JsValue> {
    graph_json_string(lo, hi, depth).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn root_cloud_json(set: &str, max_degree: u32) -> Result<String, JsValue> {
    root_cloud_json_string(set, max_degree).map_err(|e| JsValue::from_str(&e))
}

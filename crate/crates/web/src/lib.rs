//! Browser bindings for the demo page in `www/`.
//!
//! Every export takes an edge list as text and returns a JSON string. The
//! `*_json` functions hold the logic so native tests can call them directly.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use ftcons::feasibility::{certify_two_step_infeasible, check_certificate, TwoStepVerdict};
use ftcons::simulator::{random_initial, run_schedule};
use ftcons::spectra::sym_eig;
use ftcons::synthesis::{synthesize, verify_schedule, Method, DEFAULT_VERIFY_TOL};
use ftcons::{families, Graph};

fn parse(edges: &str) -> Result<Graph, String> {
    Graph::parse_edge_list(edges, None).map_err(|e| e.to_string())
}

/// Edge list of a built-in graph such as `pappus`, `counterexample` or `path:8`.
pub fn preset_text(name: &str) -> Result<String, String> {
    families::by_name(name).map(|g| g.to_edge_list()).ok_or_else(|| format!("unknown graph {name:?}"))
}

pub fn analyze_json(edges: &str) -> Result<String, String> {
    let g = parse(edges)?;
    let m = g.metrics();
    let spectrum = sym_eig(&g.adjacency()).map_err(|e| e.to_string())?;
    let clusters: Vec<Value> =
        spectrum.clusters.iter().map(|c| json!({ "value": c.value, "multiplicity": c.multiplicity })).collect();
    let out = json!({
        "n": g.n(),
        "edges": g.edge_count(),
        "diameter": m.diameter,
        "radius": m.radius,
        "center": m.central_nodes,
        "regular": g.regular_degree(),
        "tree": g.is_tree(),
        "intersection_array": g.intersection_array().map(|ia| ia.to_string()),
        "spectrum": clusters,
        "distinct": spectrum.distinct(),
    });
    Ok(out.to_string())
}

pub fn synthesize_and_simulate_json(edges: &str, method: &str, seed: u64) -> Result<String, String> {
    let g = parse(edges)?;
    let method: Method = method.parse().map_err(|e: ftcons::Error| e.to_string())?;
    let s = synthesize(&g, method).map_err(|e| e.to_string())?;
    let v = verify_schedule(&s, &g, DEFAULT_VERIFY_TOL).map_err(|e| e.to_string())?;
    let x0 = random_initial(g.n(), -1.5, 1.5, seed).map_err(|e| e.to_string())?;
    let tr = run_schedule(&g, &s, &x0).map_err(|e| e.to_string())?;
    let states: Vec<&[f64]> = tr.states.iter().map(|st| st.values.as_slice()).collect();
    let spreads: Vec<f64> = (0..tr.states.len()).map(|t| tr.spread_at(t)).collect();
    let out = json!({
        "construction": s.construction.as_str(),
        "steps": s.steps(),
        "diameter": g.diameter(),
        "residual": v.residual,
        "passed": v.passed,
        "lambdas": s.meta.as_ref().map(|m| m.lambdas.clone()),
        "initial_mean": tr.initial_mean,
        "states": states,
        "spread": spreads,
    });
    Ok(out.to_string())
}

pub fn certify_two_step_json(edges: &str) -> Result<String, String> {
    let g = parse(edges)?;
    let out = match certify_two_step_infeasible(&g) {
        TwoStepVerdict::Certified(cert) => {
            let sum = check_certificate(&cert, &g, 1.into())?;
            json!({ "verdict": "certified", "text": cert.to_string(), "sum": sum.to_string() })
        }
        TwoStepVerdict::ImpossibleByDiameter(d) => {
            json!({ "verdict": "diameter", "text": format!("D = {d} > 2: two steps impossible a priori") })
        }
        TwoStepVerdict::TriviallyFeasible => {
            json!({ "verdict": "feasible", "text": "D = 1: one averaging step suffices" })
        }
        TwoStepVerdict::NoCertificate => json!({ "verdict": "none", "text": "no certificate found" }),
    };
    Ok(out.to_string())
}

fn to_js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn preset(name: &str) -> Result<String, JsValue> {
    to_js(preset_text(name))
}

#[wasm_bindgen]
pub fn analyze(edges: &str) -> Result<String, JsValue> {
    to_js(analyze_json(edges))
}

#[wasm_bindgen(js_name = synthesizeAndSimulate)]
pub fn synthesize_and_simulate(edges: &str, method: &str, seed: u32) -> Result<String, JsValue> {
    to_js(synthesize_and_simulate_json(edges, method, u64::from(seed)))
}

#[wasm_bindgen(js_name = certifyTwoStep)]
pub fn certify_two_step(edges: &str) -> Result<String, JsValue> {
    to_js(certify_two_step_json(edges))
}

// SPDX-License-Identifier: Apache-2.0

//! Browser bindings for the `umarkov` demo page in `www/`.
//!
//! Every export returns canonical JSON. The plain `*_report` functions carry
//! the logic so they can be tested natively.

use std::f64::consts::PI;

use serde_json::{json, Value};
use umarkov::gates::{cphase, partial_swap};
use umarkov::json::canonicalize;
use umarkov::protocol::run_two_round;
use umarkov::{markov_cost, Gate};
use wasm_bindgen::prelude::*;

const MAX_D: usize = 4;
const MAX_SAMPLES: usize = 400;

fn check_d(d: usize) -> Result<(), String> {
    if (2..=MAX_D).contains(&d) {
        Ok(())
    } else {
        Err(format!("d must lie in 2..={MAX_D}, got {d}"))
    }
}

fn parse_gate(name: &str) -> Result<Gate, String> {
    name.trim().parse::<Gate>().map_err(|e| e.to_string())
}

fn render(v: Value) -> String {
    canonicalize(v).to_string()
}

/// Cost report of a named gate.
pub fn cost_report(gate: &str, d: usize) -> Result<String, String> {
    check_d(d)?;
    let g = parse_gate(gate)?;
    let rep = markov_cost(&g.matrix(d), d).map_err(|e| e.to_string())?;
    Ok(render(json!({
        "gate": g.to_string(),
        "d": d,
        "cost_bits": rep.cost_bits,
        "fixed_point_rank": rep.fixed_point_rank,
        "omega_eigenvalues": rep.omega_eigenvalues,
        "phi_infinity_eigenvalues": rep.phi_infinity_eigenvalues,
        "cesaro_residual": rep.cesaro_residual,
    })))
}

/// `M(U(theta))` sampled on an evenly spaced grid.
///
/// `cphase` runs over `[0, 2 pi]`, `partial_swap` over `[0, pi]`.
pub fn curve_report(family: &str, d: usize, samples: usize) -> Result<String, String> {
    check_d(d)?;
    if !(2..=MAX_SAMPLES).contains(&samples) {
        return Err(format!("samples must lie in 2..={MAX_SAMPLES}, got {samples}"));
    }
    let (span, build): (f64, fn(usize, f64) -> umarkov::CMatrix) = match family {
        "cphase" => (2.0 * PI, cphase),
        "partial_swap" => (PI, partial_swap),
        other => return Err(format!("unknown family {other:?}; expected cphase or partial_swap")),
    };
    let mut thetas = Vec::with_capacity(samples);
    let mut costs = Vec::with_capacity(samples);
    for i in 0..samples {
        let theta = span * i as f64 / (samples - 1) as f64;
        let rep = markov_cost(&build(d, theta), d).map_err(|e| e.to_string())?;
        thetas.push(theta);
        costs.push(rep.cost_bits);
    }
    Ok(render(
        json!({ "family": family, "d": d, "theta": thetas, "cost_bits": costs }),
    ))
}

/// Two-round protocol run with the gate's default measurement ensemble.
pub fn simulate_report(gate: &str, d: usize) -> Result<String, String> {
    check_d(d)?;
    if d > 3 {
        return Err("the protocol demo is limited to d <= 3".into());
    }
    let g = parse_gate(gate)?;
    let t = run_two_round(&g.matrix(d), d, &g.default_ensemble(d)).map_err(|e| e.to_string())?;
    Ok(render(json!({
        "gate": g.to_string(),
        "d": d,
        "fidelity": t.fidelity,
        "ensemble_size": t.ensemble_size,
        "probabilities": t.outcomes.iter().map(|o| o.probability).collect::<Vec<_>>(),
        "ledger": t.ledger,
        "stages": t.stages,
        "merging": t.merging,
        "note": t.note,
    })))
}

fn js(r: Result<String, String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn markov_cost_json(gate: &str, d: usize) -> Result<String, JsError> {
    js(cost_report(gate, d))
}

#[wasm_bindgen]
pub fn cost_curve_json(family: &str, d: usize, samples: usize) -> Result<String, JsError> {
    js(curve_report(family, d, samples))
}

#[wasm_bindgen]
pub fn simulate_json(gate: &str, d: usize) -> Result<String, JsError> {
    js(simulate_report(gate, d))
}

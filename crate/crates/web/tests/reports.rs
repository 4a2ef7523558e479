// SPDX-License-Identifier: Apache-2.0

use serde_json::Value;
use umarkov_web::{cost_report, curve_report, simulate_report};

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn cost_of_named_gates() {
    assert_eq!(parse(cost_report("cnot", 2).unwrap())["cost_bits"], 1.0);
    assert_eq!(parse(cost_report(" swap ", 2).unwrap())["cost_bits"], 2.0);
    assert_eq!(parse(cost_report("identity", 4).unwrap())["cost_bits"], 0.0);
    assert!(cost_report("toffoli", 2).is_err());
    assert!(cost_report("cnot", 5).is_err());
}

#[test]
fn curves_hit_the_endpoints() {
    let v = parse(curve_report("partial_swap", 2, 5).unwrap());
    let costs: Vec<f64> = v["cost_bits"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert_eq!(costs, vec![0.0, 2.0, 2.0, 2.0, 0.0]);

    let v = parse(curve_report("cphase", 2, 3).unwrap());
    let costs: Vec<f64> = v["cost_bits"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert_eq!(costs, vec![0.0, 1.0, 0.0]);

    assert!(curve_report("cphase", 2, 1).is_err());
    assert!(curve_report("toffoli", 2, 10).is_err());
}

#[test]
fn simulation_summary() {
    let v = parse(simulate_report("cz", 2).unwrap());
    assert_eq!(v["fidelity"], 1.0);
    assert_eq!(v["ledger"]["ebits_in"], 2.0);
    // Alice's two outcomes times the four teleportation corrections.
    let p: Vec<f64> = v["probabilities"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert_eq!(p.len(), 8);
    assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    assert!(simulate_report("cnot", 4).is_err());
}

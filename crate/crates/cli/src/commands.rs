// SPDX-License-Identifier: Apache-2.0

use serde_json::{json, Value};
use umarkov::markov::{markov_cost_with, omega, omega_infinity};
use umarkov::protocol::{
    build_alice_measurement, entropy_audit, lemma_inequality_check, run_two_round_with, InequalityCheck,
    MeasurementInstrument, Resource,
};
use umarkov::{operator_schmidt, Error};

use crate::config::{CommandKind, Measurement, RunConfig};
use crate::failure::Failure;

/// What a successful (or inequality-failing) command produced.
pub struct Report {
    pub json: Value,
    /// Short human-readable line.
    pub summary: String,
    /// JSON goes to stdout only when no `--out` is given and this is set.
    pub json_to_stdout: bool,
    pub violations: Vec<String>,
}

pub fn run(cfg: &RunConfig) -> Result<Report, Failure> {
    match cfg.command {
        CommandKind::Cost => cost(cfg),
        CommandKind::Analyze => analyze(cfg),
        CommandKind::Simulate => simulate(cfg),
        CommandKind::Verify => verify(cfg),
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Result<Value, Failure> {
    serde_json::to_value(v).map_err(|e| Failure::Internal(e.to_string()))
}

fn strip(mut v: Value, keys: &[&str]) -> Value {
    if let Value::Object(m) = &mut v {
        for k in keys {
            m.remove(*k);
        }
    }
    v
}

fn cost(cfg: &RunConfig) -> Result<Report, Failure> {
    let rep = markov_cost_with(&cfg.u, cfg.d, &cfg.tol)?;
    let mut json = to_value(&rep)?;
    json["gate"] = json!(cfg.source_label());
    Ok(Report {
        summary: format!("{:.6}", rep.cost_bits),
        json,
        json_to_stdout: false,
        violations: Vec::new(),
    })
}

fn analyze(cfg: &RunConfig) -> Result<Report, Failure> {
    let sd = operator_schmidt(&cfg.u, cfg.d)?;
    let rep = markov_cost_with(&cfg.u, cfg.d, &cfg.tol)?;
    let mut json = json!({
        "gate": cfg.source_label(),
        "d": cfg.d,
        "schmidt_coeffs": sd.coeffs,
        "schmidt_rank": sd.rank(),
        "omega_eigenvalues": rep.omega_eigenvalues,
        "fixed_point_rank": rep.fixed_point_rank,
        "fixed_point_tolerance": rep.fixed_point_tolerance,
        "phi_infinity_eigenvalues": rep.phi_infinity_eigenvalues,
        "cost_bits": rep.cost_bits,
        "cesaro_residual": rep.cesaro_residual,
        "cesaro_terms": rep.cesaro_terms,
    });
    if cfg.verbose {
        let om = omega(&cfg.u, cfg.d)?;
        json["omega_infinity"] = to_value(&omega_infinity(&om, cfg.tol.fixed_point)?)?;
        json["omega"] = to_value(&om)?;
        json["phi_infinity"] = to_value(&rep.phi_infinity)?;
    }
    Ok(Report {
        summary: format!(
            "schmidt rank {}, fixed-point rank {}, M = {:.6} bits",
            sd.rank(),
            rep.fixed_point_rank,
            rep.cost_bits
        ),
        json,
        json_to_stdout: true,
        violations: Vec::new(),
    })
}

fn simulate(cfg: &RunConfig) -> Result<Report, Failure> {
    let v = match cfg.measurement()? {
        Measurement::Ensemble(v) => v,
        Measurement::Operators(_) => {
            return Err(Failure::Malformed(
                "simulate needs a unitary ensemble in --vlist".into(),
            ))
        }
    };
    let t = run_two_round_with(&cfg.u, cfg.d, &v, &cfg.tol)?;
    let mut json = to_value(&t)?;
    if !cfg.verbose {
        json = strip(json, &["final_state", "bob_isometries", "alice_corrections"]);
    }
    json["gate"] = json!(cfg.source_label());
    let l = &t.ledger;
    Ok(Report {
        summary: format!(
            "fidelity {:.9}; ebits_in {} ebits_out {} cbits_forward {} cbits_backward {}",
            t.fidelity, l.ebits_in, l.ebits_out, l.cbits_forward, l.cbits_backward
        ),
        json,
        json_to_stdout: true,
        violations: Vec::new(),
    })
}

/// Below these the instrument counts as oblivious and exactly
/// Markovianizing, which is when `H(p) >= M(U^dag)` is asserted.
const OBLIVIOUS_EXACT: f64 = 1e-8;
const MARKOV_EXACT: f64 = 1e-8;

fn verify(cfg: &RunConfig) -> Result<Report, Failure> {
    let stage = |e: Error| {
        Failure::Stage(Error::Stage {
            stage: "alice measurement",
            outcome: None,
            source: Box::new(e),
        })
    };
    let (instr, resource) = match cfg.measurement()? {
        Measurement::Ensemble(v) => {
            let k = v.len();
            (
                build_alice_measurement(&v, cfg.d).map_err(stage)?,
                Resource::max_entangled(k),
            )
        }
        Measurement::Operators(ops) => {
            let d_out = ops[0].rows();
            (
                MeasurementInstrument::new(ops, cfg.d, 1, d_out).map_err(stage)?,
                Resource::trivial(),
            )
        }
    };
    let lemma = lemma_inequality_check(&instr, &resource, &cfg.u, cfg.d, &cfg.tol).map_err(|e| match e {
        Error::Stage { .. } => Failure::Stage(e),
        other => Failure::from(other),
    })?;
    let audit = entropy_audit(&instr, &resource, &cfg.u, cfg.d)?;

    let cert = &lemma.certificate;
    let mut checks = lemma.checks.clone();
    let lhs = audit.markov_cost_dagger - 1e-6;
    let applicable = cert.oblivious_eps <= OBLIVIOUS_EXACT && cert.markovianizing_eps <= MARKOV_EXACT;
    checks.push(InequalityCheck {
        name: "H(p) >= M(U^dag) for oblivious exact instruments".into(),
        lhs,
        rhs: audit.shannon_entropy,
        applicable,
        passed: !applicable || lhs <= audit.shannon_entropy,
    });
    let violations: Vec<String> = checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
    let passed = violations.is_empty();
    let mut audit_json = to_value(&audit)?;
    if !cfg.verbose {
        audit_json = strip(audit_json, &["per_outcome"]);
    }
    let json = json!({
        "gate": cfg.source_label(),
        "d": cfg.d,
        "outcomes": instr.len(),
        "certificate": cert,
        "bob_distance_avg": lemma.bob_distance_avg,
        "bob_delta_avg": lemma.bob_delta_avg,
        "audit": audit_json,
        "checks": checks,
        "violations": violations,
        "passed": passed,
    });
    Ok(Report {
        summary: if passed {
            format!(
                "pass: oblivious {:.3e} decoupling {:.3e} markovianizing {:.3e}, H = {:.6}",
                cert.oblivious_eps, cert.decoupling_eps, cert.markovianizing_eps, audit.shannon_entropy
            )
        } else {
            format!("FAIL: {}", violations.join("; "))
        },
        json,
        json_to_stdout: true,
        violations,
    })
}

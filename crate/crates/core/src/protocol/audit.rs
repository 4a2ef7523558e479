// SPDX-License-Identifier: Apache-2.0

//! Entropic audits of a measurement and the inequality checks that relate
//! the error functionals to each other.

use serde::Serialize;

use crate::error::Result;
use crate::linalg::CMatrix;
use crate::markov::markov_cost;
use crate::state::{shannon_entropy, EntropyReport, QState, StateVector};
use crate::tolerance::Tolerances;

use super::bob::find_bob_isometry_pure;
use super::certificate::{certify, Certificate};
use super::instrument::MeasurementInstrument;
use super::resource::{psi_state_vector, Resource};

/// Pure outcome branches of `Psi(U^dag) (x) resource` on
/// `[A', R_A, B, R_B, B_0]`, with probabilities.
pub(crate) fn pure_outcomes(
    instr: &MeasurementInstrument,
    resource: &Resource,
    u: &CMatrix,
    d: usize,
) -> Result<Vec<(usize, f64, StateVector)>> {
    let psi = psi_state_vector(u, d, true)?;
    let joint = psi.tensor(resource.vector());
    let mut out = Vec::with_capacity(instr.len());
    for (k, m) in instr.ops().iter().enumerate() {
        let (amps, dims) = joint.apply_raw(m, &[0, 4], &[instr.d_out()])?;
        if let Some((st, p)) = StateVector::normalized(amps, dims) {
            if p >= 1e-14 {
                out.push((k, p, st));
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutcomeAudit {
    pub k: usize,
    pub probability: f64,
    pub delta_s_a_prime: f64,
    pub delta_s_g: f64,
}

/// Entropy bookkeeping of a measurement on `Psi(U^dag)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyAudit {
    pub probabilities: Vec<f64>,
    /// `H({p_k})`.
    pub shannon_entropy: f64,
    /// `S(A) + S(A_0) - sum_k p_k S(A')_k`.
    pub delta_s_a_prime_avg: f64,
    /// `S(B_0) - sum_k p_k S(B_0)_k`.
    pub delta_s_g_avg: f64,
    /// `M(U^dag)` in bits.
    pub markov_cost_dagger: f64,
    pub per_outcome: Vec<OutcomeAudit>,
    pub report: EntropyReport,
}

pub fn entropy_audit(
    instr: &MeasurementInstrument,
    resource: &Resource,
    u: &CMatrix,
    d: usize,
) -> Result<EntropyAudit> {
    let psi = psi_state_vector(u, d, true)?;
    let s_a = psi.marginal(&[0])?.entropy();
    let res = resource.vector();
    let s_a0 = res.marginal(&[0])?.entropy();
    let s_b0 = res.marginal(&[1])?.entropy();
    let mut per = Vec::new();
    for (k, p, st) in pure_outcomes(instr, resource, u, d)? {
        per.push(OutcomeAudit {
            k,
            probability: p,
            delta_s_a_prime: s_a + s_a0 - st.marginal(&[0])?.entropy(),
            delta_s_g: s_b0 - st.marginal(&[4])?.entropy(),
        });
    }
    let probabilities: Vec<f64> = per.iter().map(|o| o.probability).collect();
    let shannon = shannon_entropy(&probabilities);
    let da: f64 = per.iter().map(|o| o.probability * o.delta_s_a_prime).sum();
    let dg: f64 = per.iter().map(|o| o.probability * o.delta_s_g).sum();
    let m_dag = markov_cost(&u.dagger(), d)?.cost_bits;
    let mut report = EntropyReport::default();
    report.push("H(p)", vec![], shannon);
    report.push("dS(A')_av", vec![vec![0]], da);
    report.push("dS(G)_av", vec![vec![4]], dg);
    report.push("dS(A')_av - dS(G)_av", vec![vec![0], vec![4]], da - dg);
    report.push("M(U^dag)", vec![], m_dag);
    Ok(EntropyAudit {
        probabilities,
        shannon_entropy: shannon,
        delta_s_a_prime_avg: da,
        delta_s_g_avg: dg,
        markov_cost_dagger: m_dag,
        per_outcome: per,
        report,
    })
}

/// `S(B|A)` and `I(B:R)` of `state`, the entanglement and classical
/// communication needed to merge `B` into `A` with reference `R`.
pub fn merging_bounds(state: &QState, a: &[usize], b: &[usize], r: &[usize]) -> Result<EntropyReport> {
    crate::subsystems::validate_selection(state.dims(), &[a, b, r].concat())?;
    let mut rep = EntropyReport::default();
    rep.push("S(B|A)", vec![b.to_vec(), a.to_vec()], state.conditional_entropy(b, a)?);
    rep.push("I(B:R)", vec![b.to_vec(), r.to_vec()], state.mutual_information(b, r)?);
    Ok(rep)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// False when the check's premise does not hold for this input.
    pub applicable: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaReport {
    pub certificate: Certificate,
    /// `sum_k p_k` of the distance between Bob's rotated state and the
    /// product target.
    pub bob_distance_avg: f64,
    pub bob_delta_avg: f64,
    pub checks: Vec<InequalityCheck>,
    pub passed: bool,
}

/// Evaluates the three error functionals and checks
/// `decoupling <= 7 max(oblivious, markovianizing)`,
/// `sum_k p_k ||Psi'_k - Psi^p_k (x) Phi_d|| <= 4 sqrt(2 max eps)` and, when
/// decoupling is exact, `markovianizing <= 1e-6`. Failures are reported, not
/// returned as errors.
pub fn lemma_inequality_check(
    instr: &MeasurementInstrument,
    resource: &Resource,
    u: &CMatrix,
    d: usize,
    tol: &Tolerances,
) -> Result<LemmaReport> {
    let cert = certify(instr, resource, u, d, tol)?;
    let mut dist = 0.0;
    let mut delta = 0.0;
    for (_, p, st) in pure_outcomes(instr, resource, u, d)? {
        let bob = find_bob_isometry_pure(&st, d, None, false)?;
        dist += p * bob.distance;
        delta += p * bob.delta;
    }
    let max_eps = cert.max_eps();
    let mut checks = Vec::new();
    let mut check = |name: &str, lhs: f64, rhs: f64, applicable: bool| {
        checks.push(InequalityCheck {
            name: name.to_string(),
            lhs,
            rhs,
            applicable,
            passed: !applicable || lhs <= rhs,
        });
    };
    check(
        "decoupling <= 7 max(oblivious, markovianizing)",
        cert.decoupling_eps,
        7.0 * cert.oblivious_eps.max(cert.markovianizing_eps) + 1e-8,
        true,
    );
    check(
        "bob product distance <= 4 sqrt(2 max eps)",
        dist,
        4.0 * (2.0 * max_eps).sqrt() + 1e-8,
        true,
    );
    check(
        "exact decoupling => markovianizing <= 1e-6",
        cert.markovianizing_eps,
        1e-6,
        cert.decoupling_eps <= 1e-8,
    );
    let passed = checks.iter().all(|c| c.passed);
    Ok(LemmaReport {
        certificate: cert,
        bob_distance_avg: dist,
        bob_delta_avg: delta,
        checks,
        passed,
    })
}

// SPDX-License-Identifier: Apache-2.0

//! Averaged error functionals of a measurement: how far its outcomes are
//! from oblivious, from decoupling `A' R_A` and `R_B`, and from leaving a
//! Markov state conditioned by `R_A`.

use serde::Serialize;

use crate::error::Result;
use crate::linalg::{kron, trace_norm, CMatrix};
use crate::pauli::max_entangled;
use crate::recovery::nearest_markov_candidate;
use crate::state::{conditional_mutual_information, QState};
use crate::tolerance::Tolerances;

use super::instrument::{induced_map, MeasurementInstrument};
use super::resource::{psi_state, Resource};

/// Outcomes with probability below this are skipped; they contribute at most
/// this much to any average.
const NEGLIGIBLE: f64 = 1e-14;

pub(crate) fn outcomes(
    instr: &MeasurementInstrument,
    resource: &Resource,
    input: &QState,
) -> Result<Vec<(usize, f64, QState)>> {
    let res = resource.alice_marginal()?;
    let mut out = Vec::with_capacity(instr.len());
    for (k, m) in instr.ops().iter().enumerate() {
        let (p, st) = induced_map(m, &res, input, 0)?;
        if let Some(st) = st {
            if p >= NEGLIGIBLE {
                out.push((k, p, st));
            }
        }
    }
    Ok(out)
}

fn oblivious_term(st: &QState) -> Result<f64> {
    let d = st.dims()[1];
    let ra = st.partial_trace(&[1])?;
    Ok(trace_norm(
        &(ra.matrix() - &CMatrix::identity(d).scale_real(1.0 / d as f64)),
    ))
}

fn decoupling_term(st: &QState) -> Result<f64> {
    let joint = st.partial_trace(&[0, 1, 3])?;
    let x = st.partial_trace(&[0, 1])?;
    let rb = st.partial_trace(&[3])?;
    Ok(trace_norm(&(joint.matrix() - &kron(x.matrix(), rb.matrix()))))
}

/// `sum_k p_k || Phi_{M_k}^{R_A} - I/d ||_1` with `Phi_{M_k}` the outcome
/// state of `Phi_d^{A R_A}`.
pub fn oblivious_error(instr: &MeasurementInstrument, resource: &Resource, d: usize) -> Result<f64> {
    let phi = max_entangled(d);
    let mut eps = 0.0;
    for (_, p, st) in outcomes(instr, resource, &phi)? {
        eps += p * oblivious_term(&st)?;
    }
    Ok(eps)
}

/// `sum_k p_k || Psi_k^{A' R_A R_B} - Psi_k^{A' R_A} (x) Psi_k^{R_B} ||_1`
/// for the outcome states `Psi_k` of `Psi(U^dag)`.
pub fn decoupling_error(instr: &MeasurementInstrument, resource: &Resource, u: &CMatrix, d: usize) -> Result<f64> {
    let psi = psi_state(u, d, true)?;
    let mut eps = 0.0;
    for (_, p, st) in outcomes(instr, resource, &psi)? {
        eps += p * decoupling_term(&st)?;
    }
    Ok(eps)
}

/// Markovianizing error against the constructive candidate, with the
/// average conditional mutual information `I(A' : B R_B | R_A)` of the
/// outcome states reported alongside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MarkovianizingError {
    pub eps: f64,
    pub cmi: f64,
}

pub fn markovianizing_error(
    instr: &MeasurementInstrument,
    resource: &Resource,
    u: &CMatrix,
    d: usize,
    tol: &Tolerances,
) -> Result<MarkovianizingError> {
    let psi = psi_state(u, d, true)?;
    let mut eps = 0.0;
    let mut cmi = 0.0;
    for (k, p, st) in outcomes(instr, resource, &psi)? {
        let cand = nearest_markov_candidate(&st, u, tol).map_err(|e| e.at_stage("markov candidate", Some(k)))?;
        eps += p * trace_norm(&(st.matrix() - cand.state.matrix()));
        cmi += p * conditional_mutual_information(&st, &[0], &[2, 3], &[1])?;
    }
    Ok(MarkovianizingError { eps, cmi })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutcomeCertificate {
    pub k: usize,
    pub probability: f64,
    pub oblivious: f64,
    pub decoupling: f64,
    pub markovianizing: f64,
    pub cmi: f64,
}

/// All three error functionals with their per-outcome terms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub oblivious_eps: f64,
    pub decoupling_eps: f64,
    pub markovianizing_eps: f64,
    /// `sum_k p_k I(A' : B R_B | R_A)`.
    pub cmi: f64,
    pub per_outcome: Vec<OutcomeCertificate>,
}

impl Certificate {
    pub fn max_eps(&self) -> f64 {
        self.oblivious_eps.max(self.decoupling_eps).max(self.markovianizing_eps)
    }
}

pub fn certify(
    instr: &MeasurementInstrument,
    resource: &Resource,
    u: &CMatrix,
    d: usize,
    tol: &Tolerances,
) -> Result<Certificate> {
    let phi_outcomes = outcomes(instr, resource, &max_entangled(d))?;
    let psi = psi_state(u, d, true)?;
    let psi_outcomes = outcomes(instr, resource, &psi)?;
    let mut per: Vec<OutcomeCertificate> = Vec::new();
    for (k, p, st) in &psi_outcomes {
        let cand = nearest_markov_candidate(st, u, tol).map_err(|e| e.at_stage("markov candidate", Some(*k)))?;
        per.push(OutcomeCertificate {
            k: *k,
            probability: *p,
            oblivious: 0.0,
            decoupling: decoupling_term(st)?,
            markovianizing: trace_norm(&(st.matrix() - cand.state.matrix())),
            cmi: conditional_mutual_information(st, &[0], &[2, 3], &[1])?,
        });
    }
    // Outcome probabilities agree for Phi_d and Psi(U^dag) (both have
    // maximally mixed A), so the oblivious terms attach to the same k.
    let mut oblivious_eps = 0.0;
    for (k, p, st) in &phi_outcomes {
        let term = oblivious_term(st)?;
        oblivious_eps += p * term;
        if let Some(o) = per.iter_mut().find(|o| o.k == *k) {
            o.oblivious = term;
        }
    }
    let sum = |f: fn(&OutcomeCertificate) -> f64| per.iter().map(|o| o.probability * f(o)).sum::<f64>();
    Ok(Certificate {
        oblivious_eps,
        decoupling_eps: sum(|o| o.decoupling),
        markovianizing_eps: sum(|o| o.markovianizing),
        cmi: sum(|o| o.cmi),
        per_outcome: per,
    })
}

// SPDX-License-Identifier: Apache-2.0

//! State merging by teleportation: Bob sends his share to Alice through a
//! fresh maximally entangled pair and two classical dits.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};
use crate::pauli::{gen_pauli, max_entangled_vector};
use crate::state::{QState, StateVector};
use crate::subsystems;

use super::ledger::ResourceLedger;

/// Kraus operator for Bell outcome `(p, q)` followed by Alice's correction,
/// mapping `(S, B_t, A_t)` to `A_t`. Every outcome has probability `1/d^2`
/// and returns the input of `S` unchanged.
pub fn teleport_kraus(d: usize, p: usize, q: usize) -> Result<CMatrix> {
    let phi = max_entangled_vector(d);
    let sigma = gen_pauli(d, p, q)?;
    // |Phi_pq> = (sigma (x) I)|Phi> on (S, B_t).
    let bell: Vec<C64> = (0..d * d)
        .map(|idx| {
            let (s, b) = (idx / d, idx % d);
            (0..d).map(|t| sigma[(s, t)] * phi[t * d + b]).sum()
        })
        .collect();
    let project = CMatrix::from_fn(d, d * d * d, |a, col| {
        let (sb, a2) = (col / d, col % d);
        if a2 == a {
            bell[sb].conj()
        } else {
            C64::new(0.0, 0.0)
        }
    });
    // Linear map S -> A_t produced by the projection, proportional to a unitary.
    let attach = CMatrix::from_fn(d * d * d, d, |row, s_in| {
        let (s, bt_at) = (row / (d * d), row % (d * d));
        if s == s_in {
            phi[bt_at]
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let l = project.matmul(&attach);
    let correction = l.dagger().scale_real(d as f64);
    Ok(correction.matmul(&project))
}

#[derive(Debug, Clone, Serialize)]
pub struct Teleported {
    /// Input with the teleported block now held by Alice, at the position of
    /// the first Bob system.
    pub state: QState,
    pub delta: ResourceLedger,
    pub outcome_probabilities: Vec<f64>,
}

fn check_block(dims: &[usize], bob_systems: &[usize], d_b: usize) -> Result<()> {
    if bob_systems.is_empty() {
        return Err(Error::EmptySelection);
    }
    subsystems::validate_selection(dims, bob_systems)?;
    let actual: usize = bob_systems.iter().map(|&i| dims[i]).product();
    if actual != d_b {
        return Err(Error::DimensionMismatch {
            context: "teleported block",
            expected: d_b,
            found: actual,
        });
    }
    Ok(())
}

fn cost(d_b: usize, available_ebits: f64) -> Result<ResourceLedger> {
    let ebits = (d_b as f64).log2();
    if ebits > available_ebits + 1e-12 {
        return Err(Error::InsufficientResource {
            required: ebits,
            available: available_ebits,
        });
    }
    Ok(ResourceLedger {
        ebits_in: ebits,
        cbits_backward: 2.0 * ebits,
        ..ResourceLedger::default()
    })
}

/// Teleports the subsystems `bob_systems` (joint dimension `d_b`) to Alice
/// using one `Phi_{d_b}`, simulating all `d_b^2` Bell outcomes with their
/// corrections. `available_ebits` is the entanglement budget; a block of
/// dimension one is free.
pub fn teleport_merge(state: &QState, bob_systems: &[usize], d_b: usize, available_ebits: f64) -> Result<Teleported> {
    check_block(state.dims(), bob_systems, d_b)?;
    let delta = cost(d_b, available_ebits)?;
    if d_b == 1 {
        return Ok(Teleported {
            state: state.clone(),
            delta,
            outcome_probabilities: vec![1.0],
        });
    }
    let n = state.dims().len();
    let pair = QState::pure(&max_entangled_vector(d_b), vec![d_b, d_b])?;
    let joint = state.tensor(&pair);
    let mut targets = bob_systems.to_vec();
    targets.extend([n, n + 1]);
    let mut acc: Option<CMatrix> = None;
    let mut out_dims = Vec::new();
    let mut probs = Vec::with_capacity(d_b * d_b);
    for p in 0..d_b {
        for q in 0..d_b {
            let k = teleport_kraus(d_b, p, q)?;
            let (m, dims) = subsystems::apply_to_operator(&k, joint.matrix(), joint.dims(), &targets, &[d_b])?;
            probs.push(m.trace().re);
            acc = Some(match acc {
                Some(a) => &a + &m,
                None => m,
            });
            out_dims = dims;
        }
    }
    let state = QState::with_tolerance(acc.expect("at least one outcome"), out_dims, 1e-9)?;
    Ok(Teleported {
        state,
        delta,
        outcome_probabilities: probs,
    })
}

/// One teleportation branch of a pure state.
#[derive(Debug, Clone)]
pub struct PureBranch {
    pub outcome: (usize, usize),
    pub probability: f64,
    pub state: StateVector,
}

/// Pure-state teleportation of a single subsystem, branch by branch.
pub fn teleport_pure(
    psi: &StateVector,
    system: usize,
    available_ebits: f64,
) -> Result<(Vec<PureBranch>, ResourceLedger)> {
    let dims = psi.dims().to_vec();
    let d_b = *dims.get(system).ok_or(Error::IndexOutOfRange {
        index: system,
        len: dims.len(),
    })?;
    let delta = cost(d_b, available_ebits)?;
    if d_b == 1 {
        return Ok((
            vec![PureBranch {
                outcome: (0, 0),
                probability: 1.0,
                state: psi.clone(),
            }],
            delta,
        ));
    }
    let pair = StateVector::new(max_entangled_vector(d_b), vec![d_b, d_b])?;
    let joint = psi.tensor(&pair);
    let n = dims.len();
    let mut branches = Vec::with_capacity(d_b * d_b);
    for p in 0..d_b {
        for q in 0..d_b {
            let k = teleport_kraus(d_b, p, q)?;
            let (amps, out_dims) = joint.apply_raw(&k, &[system, n, n + 1], &[d_b])?;
            if let Some((state, prob)) = StateVector::normalized(amps, out_dims) {
                branches.push(PureBranch {
                    outcome: (p, q),
                    probability: prob,
                    state,
                });
            }
        }
    }
    Ok((branches, delta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::max_entangled;
    use crate::random;

    #[test]
    fn bell_pair_half_is_teleported() {
        let phi = max_entangled(2);
        let t = teleport_merge(&phi, &[1], 2, 1.0).unwrap();
        assert!(t.state.matrix().max_abs_diff(phi.matrix()) < 1e-12);
        assert_eq!(t.delta.ebits_in, 1.0);
        assert_eq!(t.delta.cbits_backward, 2.0);
        assert!(t.outcome_probabilities.iter().all(|p| (p - 0.25).abs() < 1e-12));
    }

    #[test]
    fn four_dimensional_block_costs_two_ebits() {
        let st = random::random_state(&[2, 4], 3, &mut random::rng(3));
        let t = teleport_merge(&st, &[1], 4, 2.0).unwrap();
        assert!(t.state.matrix().max_abs_diff(st.matrix()) < 1e-12);
        assert_eq!(t.delta.ebits_in, 2.0);
        assert_eq!(t.delta.cbits_backward, 4.0);
    }

    #[test]
    fn insufficient_budget() {
        let phi = max_entangled(3);
        assert!(matches!(
            teleport_merge(&phi, &[0], 3, 1.0),
            Err(Error::InsufficientResource { .. })
        ));
    }
}

// SPDX-License-Identifier: Apache-2.0

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};
use crate::pauli::{max_entangled_pure, max_entangled_vector};
use crate::schmidt::check_bipartite_unitary;
use crate::state::{QState, StateVector};

/// A pure entangled resource shared as `A_0` (Alice) and `B_0` (Bob).
#[derive(Debug, Clone, PartialEq)]
pub struct Resource {
    state: StateVector,
}

impl Resource {
    /// `Phi_K`; `K = 1` gives the trivial resource.
    pub fn max_entangled(k: usize) -> Self {
        Resource {
            state: max_entangled_pure(k.max(1)),
        }
    }

    pub fn trivial() -> Self {
        Resource::max_entangled(1)
    }

    /// Arbitrary normalized amplitudes on `[d_a0, d_b0]`.
    pub fn from_vector(amps: Vec<C64>, d_a0: usize, d_b0: usize) -> Result<Self> {
        Ok(Resource {
            state: StateVector::new(amps, vec![d_a0, d_b0])?,
        })
    }

    pub fn vector(&self) -> &StateVector {
        &self.state
    }

    pub fn d_a0(&self) -> usize {
        self.state.dims()[0]
    }

    pub fn d_b0(&self) -> usize {
        self.state.dims()[1]
    }

    /// Alice's reduced state on `A_0`.
    pub fn alice_marginal(&self) -> Result<QState> {
        self.state.marginal(&[0])
    }

    /// Entanglement entropy of the resource, in ebits.
    pub fn ebits(&self) -> Result<f64> {
        Ok(self.alice_marginal()?.entropy())
    }
}

/// `(U^{AB} (x) I)|Phi_d>^{A R_A}|Phi_d>^{B R_B}` on `[A, R_A, B, R_B]`, or
/// the same with `U^dag` when `dagger` is set.
pub fn psi_state_vector(u: &CMatrix, d: usize, dagger: bool) -> Result<StateVector> {
    check_bipartite_unitary(u, d, 1e-8)?;
    let phi = max_entangled_vector(d);
    let base = StateVector::new(crate::linalg::kron_vec(&phi, &phi), vec![d, d, d, d])?;
    let op = if dagger { u.dagger() } else { u.clone() };
    base.evolve(&op, &[0, 2], &[d, d]).map_err(|e| match e {
        Error::InvalidState(_) => Error::NotUnitary {
            residual: u.unitary_residual(),
        },
        other => other,
    })
}

pub fn psi_state(u: &CMatrix, d: usize, dagger: bool) -> Result<QState> {
    psi_state_vector(u, d, dagger)?.to_density()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates;
    use crate::pauli::max_entangled;

    #[test]
    fn identity_gives_two_pairs() {
        let psi = psi_state(&gates::identity(2), 2, false).unwrap();
        let expected = max_entangled(2).tensor(&max_entangled(2));
        assert!(psi.matrix().max_abs_diff(expected.matrix()) < 1e-12);
    }

    #[test]
    fn ricochet_identity() {
        let u = gates::cnot(2);
        let d = 2;
        let psi = psi_state_vector(&u, d, true).unwrap();
        let phi = max_entangled_vector(d);
        let base = StateVector::new(crate::linalg::kron_vec(&phi, &phi), vec![d; 4]).unwrap();
        let alt = base.evolve(&u.conj(), &[1, 3], &[d, d]).unwrap();
        let diff = psi
            .amplitudes()
            .iter()
            .zip(alt.amplitudes())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-12);
    }

    #[test]
    fn cnot_is_maximally_entangling_across_references() {
        let psi = psi_state(&gates::cnot(2), 2, false).unwrap();
        let refs = psi.partial_trace(&[1, 3]).unwrap();
        assert!(refs.matrix().max_abs_diff(&CMatrix::identity(4).scale_real(0.25)) < 1e-12);
        let ab = psi.partial_trace(&[0, 2]).unwrap();
        assert!((ab.entropy() - 2.0).abs() < 1e-10);
    }
}

// SPDX-License-Identifier: Apache-2.0

//! Markovianizing cost of bipartite unitaries and a single-shot simulator of
//! the two-round LOCC protocol that implements them.
//!
//! The cost `M(U)` is the von Neumann entropy of the fixed-point state
//! `Phi_inf = (E_inf (x) id)(Phi_d)`, where `E_inf` projects onto the fixed
//! points of the unital channel
//! `E(tau) = d^-2 Tr_B[U (Tr_B[U^dag (tau (x) I) U] (x) I) U^dag]`.
//! See [`markov::markov_cost`].
//!
//! The protocol side ([`protocol`]) builds Alice's randomizing measurement,
//! certifies it against the oblivious/decoupling/Markovianizing error
//! functionals, finds Bob's isometry by purification alignment, merges the
//! leftover system by teleportation and accounts for every ebit and cbit.

pub mod channel;
pub mod error;
pub mod gates;
pub mod json;
pub mod linalg;
pub mod markov;
pub mod pauli;
pub mod protocol;
pub mod random;
pub mod recovery;
pub mod schmidt;
pub mod state;
pub mod subsystems;
pub mod tolerance;

pub use channel::{apply_channel, transfer_matrix, QChannel};
pub use error::{Error, Result};
pub use gates::Gate;
pub use linalg::{eig_hermitian, kron, svd, trace_norm, CMatrix, C64};
pub use markov::{markov_cost, MarkovCostReport};
pub use pauli::{gen_pauli, max_entangled, GeneralizedPauli, OperatorBasis};
pub use schmidt::{operator_schmidt, SchmidtDecomposition};
pub use state::{conditional_mutual_information, fidelity, von_neumann_entropy, EntropyReport, QState, StateVector};
pub use tolerance::Tolerances;

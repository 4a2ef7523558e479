// SPDX-License-Identifier: Apache-2.0

//! Single-shot two-round protocol: Alice's randomizing measurement, the
//! error functionals that certify it, Bob's isometry, teleportation-based
//! merging and resource accounting.
//!
//! Subsystems are always ordered `(A, R_A, B, R_B)` with ancillas appended
//! on the right.

pub mod audit;
pub mod bob;
pub mod certificate;
pub mod instrument;
pub mod ledger;
pub mod merge;
pub mod resource;
pub mod run;

pub use audit::{
    entropy_audit, lemma_inequality_check, merging_bounds, EntropyAudit, InequalityCheck, LemmaReport, OutcomeAudit,
};
pub use bob::{find_bob_isometry, find_bob_isometry_pure, BobIsometry};
pub use certificate::{
    certify, decoupling_error, markovianizing_error, oblivious_error, Certificate, MarkovianizingError,
};
pub use instrument::{build_alice_measurement, induced_map, MeasurementInstrument};
pub use ledger::{ResourceLedger, StageDelta};
pub use merge::{teleport_merge, teleport_pure, PureBranch, Teleported};
pub use resource::{psi_state, psi_state_vector, Resource};
pub use run::{run_two_round, run_two_round_with, BranchRecord, ProtocolTranscript};

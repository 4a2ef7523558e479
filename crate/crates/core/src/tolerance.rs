// SPDX-License-Identifier: Apache-2.0

//! Numerical tolerances shared by every certificate in the crate.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Generic comparison tolerance.
    pub default: f64,
    /// Hermiticity, trace and positivity checks on density matrices.
    pub state: f64,
    /// Hermiticity precondition of the eigensolver.
    pub hermitian: f64,
    /// Unitarity residual accepted for input gates and ensembles.
    pub unitary: f64,
    /// Residual of `sum K^dag K = I` for channels and instruments.
    pub completeness: f64,
    /// Eigenvalues at or above `1 - fixed_point` count as fixed points.
    pub fixed_point: f64,
    /// Operator-Schmidt coefficients below this are dropped.
    pub schmidt_cutoff: f64,
    /// Conditional mutual information bound for Markov certificates.
    pub markov_cmi: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            default: 1e-9,
            state: 1e-10,
            hermitian: 1e-8,
            unitary: 1e-8,
            completeness: 1e-9,
            fixed_point: 1e-6,
            schmidt_cutoff: 1e-10,
            markov_cmi: 1e-6,
        }
    }
}

impl Tolerances {
    pub fn with_fixed_point(mut self, tol: f64) -> Self {
        self.fixed_point = tol;
        self
    }
}

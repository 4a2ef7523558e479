// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("subsystem index {index} out of range for {len} subsystems")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("subsystem index sets overlap or repeat an index")]
    OverlappingSubsystems,

    #[error("empty subsystem selection")]
    EmptySelection,

    #[error("matrix entries must be finite")]
    NotFinite,

    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("Kraus operators are not trace preserving (residual {residual:.3e})")]
    NotTracePreserving { residual: f64 },

    #[error("measurement operators are not complete (residual {residual:.3e})")]
    Incomplete { residual: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("eigenvalue {eigenvalue} lies outside [-1, 1] beyond tolerance")]
    SpectrumOutOfRange { eigenvalue: f64 },

    #[error("Markov certificate failed: conditional mutual information {cmi:.3e} exceeds {bound:.1e}")]
    CertificateFailure { cmi: f64, bound: f64 },

    #[error("precondition violated: {what} ({value:.3e} > {limit:.3e})")]
    Precondition { what: &'static str, value: f64, limit: f64 },

    #[error("insufficient entanglement: need {required} ebits, {available} available")]
    InsufficientResource { required: f64, available: f64 },

    #[error("stage `{stage}`{}: {source}", outcome.map(|k| format!(" (outcome {k})")).unwrap_or_default())]
    Stage {
        stage: &'static str,
        outcome: Option<usize>,
        #[source]
        source: Box<Error>,
    },

    #[error("malformed JSON input: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn at_stage(self, stage: &'static str, outcome: Option<usize>) -> Error {
        Error::Stage {
            stage,
            outcome,
            source: Box::new(self),
        }
    }

    /// Innermost error, skipping stage wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            other => other,
        }
    }
}

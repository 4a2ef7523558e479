// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use umarkov::Error;

/// A failed run together with its process exit code.
#[derive(Debug)]
pub enum Failure {
    /// Unreadable or ill-formed input. Exit 2.
    Malformed(String),
    /// The unitary's residual `||U^dag U - I||`. Exit 3.
    NonUnitary(f64),
    /// A protocol stage rejected its input. Exit 4.
    Stage(Error),
    /// Named inequality checks that failed. Exit 5.
    Violations(Vec<String>),
    /// Anything else, including I/O on the output path. Exit 1.
    Internal(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Internal(_) => 1,
            Failure::Malformed(_) => 2,
            Failure::NonUnitary(_) => 3,
            Failure::Stage(_) => 4,
            Failure::Violations(_) => 5,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Stage { .. } => Failure::Stage(e),
            Error::NotUnitary { residual } => Failure::NonUnitary(residual),
            Error::DimensionMismatch { .. }
            | Error::IndexOutOfRange { .. }
            | Error::InvalidArgument(_)
            | Error::NotFinite
            | Error::Json(_) => Failure::Malformed(e.to_string()),
            other => Failure::Internal(other.to_string()),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Malformed(m) => write!(f, "malformed input: {m}"),
            Failure::NonUnitary(r) => write!(f, "input is not unitary: residual {r:.3e}"),
            Failure::Stage(e) => write!(f, "{e}"),
            Failure::Violations(names) => write!(f, "inequality violated: {}", names.join("; ")),
            Failure::Internal(m) => write!(f, "{m}"),
        }
    }
}

// SPDX-License-Identifier: Apache-2.0

//! Named two-qudit gates on `A (x) B`, each `d^2 x d^2` with `A` the more
//! significant factor.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};
use crate::pauli::{clock, pauli_group, shift};

/// `I_{d^2}`.
pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d * d)
}

/// `|a b> -> |b a>`.
pub fn swap(d: usize) -> CMatrix {
    let mut m = CMatrix::zeros(d * d, d * d);
    for a in 0..d {
        for b in 0..d {
            m[(b * d + a, a * d + b)] = C64::new(1.0, 0.0);
        }
    }
    m
}

fn controlled(d: usize, target: &CMatrix) -> CMatrix {
    let mut m = CMatrix::zeros(d * d, d * d);
    let mut power = CMatrix::identity(d);
    for a in 0..d {
        for i in 0..d {
            for j in 0..d {
                m[(a * d + i, a * d + j)] = power[(i, j)];
            }
        }
        power = target.matmul(&power);
    }
    m
}

/// `sum_a |a><a| (x) X^a` with `X|t> = |t + 1 mod d>`.
pub fn cnot(d: usize) -> CMatrix {
    controlled(d, &shift(d))
}

/// `sum_a |a><a| (x) Z^a` with `Z = diag(1, w, ..., w^{d-1})`.
pub fn cz(d: usize) -> CMatrix {
    controlled(d, &clock(d))
}

/// `|a b> -> exp(i theta a b) |a b>`.
pub fn cphase(d: usize, theta: f64) -> CMatrix {
    let diag: Vec<C64> = (0..d * d)
        .map(|i| C64::from_polar(1.0, theta * ((i / d) * (i % d)) as f64))
        .collect();
    CMatrix::diag(&diag)
}

/// Discrete Fourier transform on the `d^2`-dimensional joint space.
pub fn dft(d: usize) -> CMatrix {
    let n = d * d;
    let s = 1.0 / (n as f64).sqrt();
    CMatrix::from_fn(n, n, |j, k| {
        C64::from_polar(s, 2.0 * PI * ((j * k) % n) as f64 / n as f64)
    })
}

/// `exp(-i theta SWAP) = cos(theta) I - i sin(theta) SWAP`, interpolating
/// between the identity and the swap.
pub fn partial_swap(d: usize, theta: f64) -> CMatrix {
    let s = swap(d);
    let id = identity(d);
    &id.scale_real(theta.cos()) + &s.scale(C64::new(0.0, -theta.sin()))
}

/// The built-in gate library.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    Identity,
    Swap,
    Cnot,
    Cz,
    Cphase(f64),
    Dft,
}

impl Gate {
    pub fn matrix(&self, d: usize) -> CMatrix {
        match *self {
            Gate::Identity => identity(d),
            Gate::Swap => swap(d),
            Gate::Cnot => cnot(d),
            Gate::Cz => cz(d),
            Gate::Cphase(t) => cphase(d, t),
            Gate::Dft => dft(d),
        }
    }

    /// Unitary ensemble for Alice's measurement used when none is supplied:
    /// powers of the clock operator for controlled gates, `{I}` for the
    /// identity and the full Pauli group otherwise.
    pub fn default_ensemble(&self, d: usize) -> Vec<CMatrix> {
        match self {
            Gate::Identity => vec![CMatrix::identity(d)],
            Gate::Cnot | Gate::Cz | Gate::Cphase(_) => {
                let z = clock(d);
                let mut out = vec![CMatrix::identity(d)];
                for _ in 1..d {
                    let next = z.matmul(out.last().expect("nonempty"));
                    out.push(next);
                }
                out
            }
            Gate::Swap | Gate::Dft => pauli_group(d).into_iter().map(|p| p.matrix).collect(),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::Identity => write!(f, "identity"),
            Gate::Swap => write!(f, "swap"),
            Gate::Cnot => write!(f, "cnot"),
            Gate::Cz => write!(f, "cz"),
            Gate::Cphase(t) => write!(f, "cphase({t})"),
            Gate::Dft => write!(f, "dft"),
        }
    }
}

impl FromStr for Gate {
    type Err = Error;

    /// Accepts `identity`, `swap`, `cnot`, `cz`, `dft`, and `cphase(THETA)`
    /// or `cphase:THETA`. Names are case-insensitive.
    fn from_str(s: &str) -> Result<Gate> {
        let lower = s.trim().to_ascii_lowercase();
        let simple = match lower.as_str() {
            "identity" | "id" | "i" => Some(Gate::Identity),
            "swap" => Some(Gate::Swap),
            "cnot" | "cx" => Some(Gate::Cnot),
            "cz" => Some(Gate::Cz),
            "dft" => Some(Gate::Dft),
            _ => None,
        };
        if let Some(g) = simple {
            return Ok(g);
        }
        let arg = lower
            .strip_prefix("cphase(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| lower.strip_prefix("cphase:"));
        match arg {
            Some(a) => {
                let theta: f64 = a
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("bad cphase angle `{a}`")))?;
                if !theta.is_finite() {
                    return Err(Error::InvalidArgument("cphase angle must be finite".into()));
                }
                Ok(Gate::Cphase(theta))
            }
            None => Err(Error::InvalidArgument(format!("unknown gate `{s}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn library_is_unitary() {
        for d in 2..=4 {
            for g in [
                Gate::Identity,
                Gate::Swap,
                Gate::Cnot,
                Gate::Cz,
                Gate::Cphase(0.3),
                Gate::Dft,
            ] {
                assert!(g.matrix(d).unitary_residual() < 1e-12, "{g} d={d}");
            }
            assert!(partial_swap(d, 0.4).unitary_residual() < 1e-12);
        }
    }

    #[test]
    fn cnot_qubit_layout() {
        let expected =
            CMatrix::from_real(4, 4, &[1., 0., 0., 0., 0., 1., 0., 0., 0., 0., 0., 1., 0., 0., 1., 0.]).unwrap();
        assert_eq!(cnot(2), expected);
        assert!(cz(2).max_abs_diff(&CMatrix::diag_real(&[1.0, 1.0, 1.0, -1.0])) < 1e-15);
    }

    #[test]
    fn parses_names() {
        assert_eq!("CNOT".parse::<Gate>().unwrap(), Gate::Cnot);
        assert_eq!("cphase(0.3)".parse::<Gate>().unwrap(), Gate::Cphase(0.3));
        assert_eq!("cphase:1.5".parse::<Gate>().unwrap(), Gate::Cphase(1.5));
        assert!("toffoli".parse::<Gate>().is_err());
        assert!("cphase(x)".parse::<Gate>().is_err());
    }
}

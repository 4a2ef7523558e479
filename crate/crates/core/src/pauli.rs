// SPDX-License-Identifier: Apache-2.0

//! Weyl-Heisenberg (generalized Pauli) operators, orthogonal operator bases
//! and maximally entangled states.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix, C64, ZERO};
use crate::state::{QState, StateVector};

/// `sigma_pq = sum_t exp(2 pi i q t / d) |t - p mod d><t|`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedPauli {
    pub d: usize,
    pub p: usize,
    pub q: usize,
    pub matrix: CMatrix,
}

impl GeneralizedPauli {
    pub fn new(d: usize, p: usize, q: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        if p >= d {
            return Err(Error::IndexOutOfRange { index: p, len: d });
        }
        if q >= d {
            return Err(Error::IndexOutOfRange { index: q, len: d });
        }
        let mut m = CMatrix::zeros(d, d);
        for t in 0..d {
            let row = (t + d - p) % d;
            m[(row, t)] = C64::from_polar(1.0, 2.0 * PI * (q * t) as f64 / d as f64);
        }
        Ok(GeneralizedPauli { d, p, q, matrix: m })
    }
}

impl AsRef<CMatrix> for GeneralizedPauli {
    fn as_ref(&self) -> &CMatrix {
        &self.matrix
    }
}

/// Shorthand for the matrix of `sigma_pq`.
pub fn gen_pauli(d: usize, p: usize, q: usize) -> Result<CMatrix> {
    Ok(GeneralizedPauli::new(d, p, q)?.matrix)
}

/// All `d^2` operators in lexicographic `(p, q)` order, identity first.
pub fn pauli_group(d: usize) -> Vec<GeneralizedPauli> {
    let mut out = Vec::with_capacity(d * d);
    for p in 0..d {
        for q in 0..d {
            out.push(GeneralizedPauli::new(d, p, q).expect("indices in range"));
        }
    }
    out
}

/// The `d^2 - 1` traceless operators, lexicographic `(p, q)` excluding `(0, 0)`.
pub fn traceless_paulis(d: usize) -> Vec<GeneralizedPauli> {
    pauli_group(d).into_iter().skip(1).collect()
}

/// The clock operator `Z = diag(1, w, w^2, ...)`.
pub fn clock(d: usize) -> CMatrix {
    gen_pauli(d, 0, 1).expect("d >= 2")
}

/// The shift operator `X|t> = |t + 1 mod d>`.
pub fn shift(d: usize) -> CMatrix {
    gen_pauli(d, d - 1, 0).expect("d >= 1")
}

/// An orthogonal operator basis with `Tr[B_i^dag B_j] = d delta_ij` whose
/// first element is the identity. The remaining elements span the traceless
/// operators.
#[derive(Debug, Clone)]
pub struct OperatorBasis {
    d: usize,
    elements: Vec<CMatrix>,
}

impl OperatorBasis {
    pub fn pauli(d: usize) -> Self {
        OperatorBasis {
            d,
            elements: pauli_group(d).into_iter().map(|p| p.matrix).collect(),
        }
    }

    /// Mixes the traceless Pauli operators with a unitary `w` of size
    /// `(d^2 - 1) x (d^2 - 1)`: `B_i = sum_j w_ij sigma_j`.
    pub fn rotated(d: usize, w: &CMatrix) -> Result<Self> {
        let n = d * d - 1;
        if w.rows() != n || w.cols() != n {
            return Err(Error::DimensionMismatch {
                context: "basis rotation",
                expected: n,
                found: w.rows(),
            });
        }
        let residual = w.unitary_residual();
        if residual > 1e-10 {
            return Err(Error::NotUnitary { residual });
        }
        let paulis = traceless_paulis(d);
        let mut elements = vec![CMatrix::identity(d)];
        for i in 0..n {
            let mut b = CMatrix::zeros(d, d);
            for (j, s) in paulis.iter().enumerate() {
                b = &b + &s.matrix.scale(w[(i, j)]);
            }
            elements.push(b);
        }
        Ok(OperatorBasis { d, elements })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }

    pub fn traceless(&self) -> &[CMatrix] {
        &self.elements[1..]
    }

    /// Largest deviation of the Gram matrix from `d I`.
    pub fn orthogonality_residual(&self) -> f64 {
        let d = self.d as f64;
        let mut r: f64 = 0.0;
        for (i, a) in self.elements.iter().enumerate() {
            for (j, b) in self.elements.iter().enumerate() {
                let target = if i == j { d } else { 0.0 };
                r = r.max((a.hs_inner(b) - c(target, 0.0)).norm());
            }
        }
        r
    }
}

/// Amplitudes of `d^{-1/2} sum_t |t>|t>`.
pub fn max_entangled_vector(d: usize) -> Vec<C64> {
    let mut v = vec![ZERO; d * d];
    let a = 1.0 / (d as f64).sqrt();
    for t in 0..d {
        v[t * d + t] = c(a, 0.0);
    }
    v
}

pub fn max_entangled_pure(d: usize) -> StateVector {
    StateVector::new(max_entangled_vector(d), vec![d, d]).expect("normalized")
}

/// Projector onto the maximally entangled state on `[d, d]`.
pub fn max_entangled(d: usize) -> QState {
    max_entangled_pure(d).to_density().expect("valid state")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_examples() {
        assert_eq!(gen_pauli(2, 0, 0).unwrap(), CMatrix::identity(2));
        let x = CMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        assert!(gen_pauli(2, 1, 0).unwrap().max_abs_diff(&x) < 1e-15);
        let w = C64::from_polar(1.0, 2.0 * PI / 3.0);
        let z3 = CMatrix::diag(&[c(1.0, 0.0), w, w * w]);
        assert!(gen_pauli(3, 0, 1).unwrap().max_abs_diff(&z3) < 1e-15);
        assert!(matches!(
            GeneralizedPauli::new(2, 2, 0),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn shift_moves_up() {
        let x = shift(3);
        let e0 = [c(1.0, 0.0), ZERO, ZERO];
        assert_eq!(x.mul_vec(&e0), vec![ZERO, c(1.0, 0.0), ZERO]);
    }

    #[test]
    fn bell_projector_entries() {
        let phi = max_entangled(2);
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            assert!((phi.matrix()[(i, j)] - c(0.5, 0.0)).norm() < 1e-15);
        }
        let marg = phi.partial_trace(&[0]).unwrap();
        assert!(marg.matrix().max_abs_diff(&CMatrix::identity(2).scale_real(0.5)) < 1e-15);
        assert!((max_entangled(3).purity() - 1.0).abs() < 1e-12);
    }
}

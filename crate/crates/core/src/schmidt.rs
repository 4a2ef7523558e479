// SPDX-License-Identifier: Apache-2.0

//! Operator-Schmidt decomposition of bipartite unitaries.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kron, svd, CMatrix};

/// `U = sum_s c_s E_s (x) F_s` with `Tr[E_s^dag E_t] / d = delta_st` and the
/// same for `F`. Coefficients are nonincreasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchmidtDecomposition {
    pub coeffs: Vec<f64>,
    pub left: Vec<CMatrix>,
    pub right: Vec<CMatrix>,
}

impl SchmidtDecomposition {
    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    pub fn reconstruct(&self) -> CMatrix {
        let d = self.left[0].rows();
        let mut u = CMatrix::zeros(d * d, d * d);
        for ((c, e), f) in self.coeffs.iter().zip(&self.left).zip(&self.right) {
            u = &u + &kron(e, f).scale_real(*c);
        }
        u
    }
}

pub(crate) fn check_bipartite_unitary(u: &CMatrix, d: usize, tol: f64) -> Result<()> {
    if d < 1 {
        return Err(Error::InvalidArgument("local dimension must be positive".into()));
    }
    if u.rows() != d * d || u.cols() != d * d {
        return Err(Error::DimensionMismatch {
            context: "bipartite unitary (d^2 x d^2)",
            expected: d * d,
            found: u.rows().max(u.cols()),
        });
    }
    if !u.is_finite() {
        return Err(Error::NotFinite);
    }
    let residual = u.unitary_residual();
    if residual > tol {
        return Err(Error::NotUnitary { residual });
    }
    Ok(())
}

/// Decomposes a `d^2 x d^2` unitary on `A (x) B` by reshuffling
/// `(a b, a' b') -> (a a', b b')` and taking the SVD. Coefficients below
/// `cutoff` are dropped.
pub fn operator_schmidt_with(u: &CMatrix, d: usize, cutoff: f64) -> Result<SchmidtDecomposition> {
    check_bipartite_unitary(u, d, 1e-8)?;
    let r = CMatrix::from_fn(d * d, d * d, |row, col| {
        let (a, a2) = (row / d, row % d);
        let (b, b2) = (col / d, col % d);
        u[(a * d + b, a2 * d + b2)]
    });
    let dec = svd(&r);
    let sd = (d as f64).sqrt();
    let mut out = SchmidtDecomposition {
        coeffs: Vec::new(),
        left: Vec::new(),
        right: Vec::new(),
    };
    for (k, &sigma) in dec.s.iter().enumerate() {
        let coeff = sigma / d as f64;
        if coeff < cutoff {
            continue;
        }
        let uk = dec.u.col(k);
        let vk = dec.v.col(k);
        out.coeffs.push(coeff);
        out.left.push(CMatrix::from_fn(d, d, |i, j| uk[i * d + j] * sd));
        out.right.push(CMatrix::from_fn(d, d, |i, j| vk[i * d + j].conj() * sd));
    }
    Ok(out)
}

pub fn operator_schmidt(u: &CMatrix, d: usize) -> Result<SchmidtDecomposition> {
    operator_schmidt_with(u, d, 1e-10)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates;

    #[test]
    fn identity_has_rank_one() {
        let s = operator_schmidt(&CMatrix::identity(9), 3).unwrap();
        assert_eq!(s.rank(), 1);
        assert!((s.coeffs[0] - 1.0).abs() < 1e-12);
        assert!(s.reconstruct().max_abs_diff(&CMatrix::identity(9)) < 1e-12);
    }

    #[test]
    fn swap_and_cnot_coefficients() {
        let s = operator_schmidt(&gates::swap(2), 2).unwrap();
        assert_eq!(s.rank(), 4);
        assert!(s.coeffs.iter().all(|c| (c - 0.5).abs() < 1e-12));
        let c = operator_schmidt(&gates::cnot(2), 2).unwrap();
        assert_eq!(c.rank(), 2);
        assert!(c.coeffs.iter().all(|x| (x - 0.5f64.sqrt()).abs() < 1e-12));
    }

    #[test]
    fn rejects_non_unitary() {
        let m = CMatrix::identity(4).scale_real(1.1);
        assert!(matches!(operator_schmidt(&m, 2), Err(Error::NotUnitary { .. })));
        assert!(matches!(
            operator_schmidt(&CMatrix::identity(3), 2),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}

// SPDX-License-Identifier: Apache-2.0

//! The reconstruction map `Xi`, its reduction `F` to `R_A`, and the Markov
//! state built from them.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::channel::{apply_channel_raw, QChannel};
use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, kron, svd, CMatrix, C64, ONE};
use crate::pauli::max_entangled_vector;
use crate::schmidt::check_bipartite_unitary;
use crate::state::{conditional_mutual_information, QState};
use crate::subsystems::embed_operator;
use crate::tolerance::Tolerances;

/// `Xi(tau) = U*^{R_A R_B} (Tr_{R_B}[U^t tau U*] (x) Phi_d^{B R_B}) U^t`,
/// mapping `[R_A, R_B]` to `[R_A, B, R_B]`. Conjugation and transposition are
/// taken in the computational basis.
pub fn xi_map(u: &CMatrix, d: usize) -> Result<QChannel> {
    check_bipartite_unitary(u, d, 1e-8)?;
    let ut = u.transpose();
    let emb = embed_operator(&u.conj(), &[d, d, d], &[0, 2])?;
    let phi = max_entangled_vector(d);
    // (I (x) |Phi>) : R_A -> R_A B R_B
    let attach = CMatrix::from_fn(d * d * d, d, |row, col| {
        let ra = row / (d * d);
        if ra == col {
            phi[row % (d * d)]
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let head = emb.matmul(&attach);
    let mut kraus = Vec::with_capacity(d);
    for j in 0..d {
        // (I (x) <j|) : R_A R_B -> R_A
        let bra = CMatrix::from_fn(d, d * d, |ra, col| {
            if col / d == ra && col % d == j {
                ONE
            } else {
                C64::new(0.0, 0.0)
            }
        });
        kraus.push(head.matmul(&bra).matmul(&ut));
    }
    QChannel::new(kraus, vec![d, d], vec![d, d, d])
}

/// `F(tau) = Tr_{B R_B} Xi(tau (x) I/d)` on `R_A`.
pub fn f_map(u: &CMatrix, d: usize) -> Result<QChannel> {
    let xi = xi_map(u, d)?;
    let s = 1.0 / (d as f64).sqrt();
    let mut kraus = Vec::with_capacity(d * d * d * d);
    for k in xi.kraus() {
        for r in 0..d {
            let ket = CMatrix::from_fn(d * d, d, |row, col| {
                if row / d == col && row % d == r {
                    ONE
                } else {
                    C64::new(0.0, 0.0)
                }
            });
            let kr = k.matmul(&ket);
            for br in 0..d * d {
                let k_out = CMatrix::from_fn(d, d, |ra, col| kr[(ra * d * d + br, col)] * s);
                kraus.push(k_out);
            }
        }
    }
    Ok(QChannel::new(kraus, vec![d], vec![d])?.simplify())
}

/// Liouville matrix (row-major vectorization) of the projection onto the
/// fixed points of `ch`, i.e. the limit of the Cesàro means of `ch`.
///
/// Self-adjoint channels use the spectral projector onto eigenvalues at
/// least `1 - tol`. Otherwise the projector `R (L^dag R)^-1 L^dag` is built
/// from right and left null vectors of `S - I`.
pub fn fixed_point_projector(ch: &QChannel, tol: f64) -> Result<CMatrix> {
    let s = ch.liouville();
    if !s.is_square() {
        return Err(Error::DimensionMismatch {
            context: "fixed points (square channel)",
            expected: s.rows(),
            found: s.cols(),
        });
    }
    if s.hermitian_residual() <= 1e-9 {
        return Ok(eig_hermitian(&s)?.spectral_projector(|v| v >= 1.0 - tol));
    }
    let n = s.rows();
    let a = &s - &CMatrix::identity(n);
    let right = null_space(&a, tol);
    let left = null_space(&a.dagger(), tol);
    if right.cols() != left.cols() {
        return Err(Error::InvalidArgument(
            "left and right fixed-point spaces differ in dimension".into(),
        ));
    }
    if right.cols() == 0 {
        return Ok(CMatrix::zeros(n, n));
    }
    let gram = left.dagger().matmul(&right).to_nalgebra();
    let inv: DMatrix<C64> = gram
        .try_inverse()
        .ok_or_else(|| Error::InvalidArgument("singular fixed-point pairing".into()))?;
    Ok(right.matmul(&CMatrix::from_nalgebra(&inv)).matmul(&left.dagger()))
}

fn null_space(a: &CMatrix, tol: f64) -> CMatrix {
    let dec = svd(a);
    let n = a.cols();
    let mut cols: Vec<Vec<C64>> = Vec::new();
    for k in 0..n {
        let s = dec.s.get(k).copied().unwrap_or(0.0);
        if s <= tol {
            cols.push(dec.v.col(k));
        }
    }
    let mut m = CMatrix::zeros(n, cols.len());
    for (j, c) in cols.iter().enumerate() {
        m.set_col(j, c);
    }
    m
}

/// `(id (x) P)(rho)` for a superoperator `P` (Liouville form) on the second
/// factor of a bipartite operator with dimensions `[d_first, d]`.
pub fn apply_superoperator_second(p: &CMatrix, rho: &CMatrix, d_first: usize, d: usize) -> CMatrix {
    let mut out = CMatrix::zeros(d_first * d, d_first * d);
    for a in 0..d_first {
        for b in 0..d_first {
            let block: Vec<C64> = (0..d * d).map(|idx| rho[(a * d + idx / d, b * d + idx % d)]).collect();
            let img = p.mul_vec(&block);
            for idx in 0..d * d {
                out[(a * d + idx / d, b * d + idx % d)] = img[idx];
            }
        }
    }
    out
}

/// A Markov state conditioned by `R_A`, with its certificate.
#[derive(Debug, Clone, Serialize)]
pub struct MarkovCandidate {
    /// State on `[A', R_A, B, R_B]`.
    pub state: QState,
    /// `I(A' : B R_B | R_A)` of `state`, in bits.
    pub cmi: f64,
}

/// Builds `(id (x) Xi)(rho_0 (x) I/d)` where `rho_0` is the `A' R_A`
/// marginal of `state` projected onto the fixed points of `id (x) F`.
/// `state` lives on `[A', R_A, B, R_B]`. Fails with
/// [`Error::CertificateFailure`] when the result's conditional mutual
/// information exceeds `tol.markov_cmi`.
pub fn nearest_markov_candidate(state: &QState, u: &CMatrix, tol: &Tolerances) -> Result<MarkovCandidate> {
    let dims = state.dims();
    if dims.len() != 4 || dims[1] != dims[2] || dims[2] != dims[3] {
        return Err(Error::InvalidArgument(
            "candidate input must have dimensions [A', d, d, d]".into(),
        ));
    }
    let (da, d) = (dims[0], dims[1]);
    check_bipartite_unitary(u, d, tol.unitary)?;
    let rho = state.partial_trace(&[0, 1])?;
    let proj = fixed_point_projector(&f_map(u, d)?, tol.fixed_point)?;
    let rho0 = apply_superoperator_second(&proj, rho.matrix(), da, d);
    let with_rb = kron(&rho0, &CMatrix::identity(d).scale_real(1.0 / d as f64));
    let xi = xi_map(u, d)?;
    let (m, out_dims) = apply_channel_raw(&xi, &with_rb, &[da, d, d], &[1, 2])?;
    let candidate = QState::with_tolerance(m, out_dims, 1e-9)?;
    let cmi = conditional_mutual_information(&candidate, &[0], &[2, 3], &[1])?;
    if cmi > tol.markov_cmi {
        return Err(Error::CertificateFailure {
            cmi,
            bound: tol.markov_cmi,
        });
    }
    Ok(MarkovCandidate { state: candidate, cmi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::transfer_matrix;
    use crate::gates;
    use crate::pauli::{max_entangled, traceless_paulis};

    #[test]
    fn xi_of_identity_appends_fresh_pair() {
        let d = 2;
        let xi = xi_map(&gates::identity(d), d).unwrap();
        let input = CMatrix::identity(4).scale_real(0.25);
        let out = xi.apply(&input);
        let expected = {
            let mixed = CMatrix::identity(2).scale_real(0.5);
            kron(&mixed, max_entangled(2).matrix())
        };
        assert!(out.max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn f_map_examples() {
        let f = f_map(&gates::identity(3), 3).unwrap();
        let x = CMatrix::from_fn(3, 3, |i, j| C64::new(i as f64, 1.0 + j as f64));
        assert!(f.apply(&x).max_abs_diff(&x) < 1e-12);
        let f = f_map(&gates::swap(2), 2).unwrap();
        let t = transfer_matrix(&f, &traceless_paulis(2)).unwrap();
        assert!(t.max_abs() < 1e-12);
    }

    #[test]
    fn general_projector_matches_spectral_one() {
        // Amplitude damping is not self-adjoint; its fixed point is |0><0|.
        let g: f64 = 0.3;
        let k0 = CMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, (1.0 - g).sqrt()]).unwrap();
        let k1 = CMatrix::from_real(2, 2, &[0.0, g.sqrt(), 0.0, 0.0]).unwrap();
        let ch = QChannel::new(vec![k0, k1], vec![2], vec![2]).unwrap();
        let p = fixed_point_projector(&ch, 1e-9).unwrap();
        let img = p.mul_vec(&[
            C64::new(0.2, 0.0),
            C64::new(0.1, 0.0),
            C64::new(0.1, 0.0),
            C64::new(0.8, 0.0),
        ]);
        assert!((img[0] - ONE).norm() < 1e-9);
        assert!(img[1].norm() + img[2].norm() + img[3].norm() < 1e-9);
    }
}

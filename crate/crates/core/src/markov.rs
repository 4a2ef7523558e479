// SPDX-License-Identifier: Apache-2.0

//! The fixed-point pipeline for the Markovianizing cost:
//! `U -> E -> Omega -> Omega_inf -> Phi_inf -> S(Phi_inf)`.

use serde::Serialize;

use crate::channel::{transfer_matrix, QChannel};
use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, kron, CMatrix, C64};
use crate::pauli::OperatorBasis;
use crate::schmidt::{check_bipartite_unitary, operator_schmidt_with, SchmidtDecomposition};
use crate::state::{QState, STATE_TOL};
use crate::subsystems;
use crate::tolerance::Tolerances;

/// Number of terms used for the Cesàro cross-check in reports.
pub const CESARO_TERMS: usize = 2000;

/// The unital channel `E(tau) = d^-2 Tr_B[U (Tr_B[U^dag (tau (x) I) U] (x) I) U^dag]`
/// on `A`, built from the operator-Schmidt decomposition: with
/// `U = sum_s c_s E_s (x) F_s` the Kraus operators are `c_s c_t E_t E_s^dag`.
pub fn e_tilde(u: &CMatrix, d: usize) -> Result<QChannel> {
    let sd = operator_schmidt_with(u, d, Tolerances::default().schmidt_cutoff)?;
    e_tilde_from_schmidt(&sd, d)
}

pub fn e_tilde_from_schmidt(sd: &SchmidtDecomposition, d: usize) -> Result<QChannel> {
    let mut kraus = Vec::with_capacity(sd.rank() * sd.rank());
    for (s, es) in sd.left.iter().enumerate() {
        let es_dag = es.dagger();
        for (t, et) in sd.left.iter().enumerate() {
            kraus.push(et.matmul(&es_dag).scale_real(sd.coeffs[s] * sd.coeffs[t]));
        }
    }
    Ok(QChannel::new(kraus, vec![d], vec![d])?.simplify())
}

/// Direct evaluation of the defining double partial trace. Serves as the
/// reference for [`e_tilde`].
pub fn e_tilde_formula(u: &CMatrix, d: usize, tau: &CMatrix) -> Result<CMatrix> {
    check_bipartite_unitary(u, d, 1e-8)?;
    if tau.rows() != d || tau.cols() != d {
        return Err(Error::DimensionMismatch {
            context: "operator on A",
            expected: d,
            found: tau.rows(),
        });
    }
    let id = CMatrix::identity(d);
    let ud = u.dagger();
    let inner = ud.matmul(&kron(tau, &id)).matmul(u);
    let (x, _) = subsystems::partial_trace(&inner, &[d, d], &[0])?;
    let outer = u.matmul(&kron(&x, &id)).matmul(&ud);
    let (y, _) = subsystems::partial_trace(&outer, &[d, d], &[0])?;
    Ok(y.scale_real(1.0 / (d * d) as f64))
}

/// Transfer matrix of [`e_tilde`] on the traceless generalized Paulis in
/// lexicographic `(p, q)` order.
pub fn omega(u: &CMatrix, d: usize) -> Result<CMatrix> {
    omega_in_basis(u, d, &OperatorBasis::pauli(d))
}

pub fn omega_in_basis(u: &CMatrix, d: usize, basis: &OperatorBasis) -> Result<CMatrix> {
    omega_of_channel(&e_tilde(u, d)?, basis)
}

fn omega_of_channel(ch: &QChannel, basis: &OperatorBasis) -> Result<CMatrix> {
    if basis.d() != ch.d_in() {
        return Err(Error::DimensionMismatch {
            context: "operator basis",
            expected: ch.d_in(),
            found: basis.d(),
        });
    }
    transfer_matrix(ch, basis.traceless())
}

/// Orthogonal projector onto the eigenvectors of `om` with eigenvalue at
/// least `1 - tol`. Eigenvalues outside `[-1 - tol, 1 + tol]` are rejected.
pub fn omega_infinity(om: &CMatrix, tol: f64) -> Result<CMatrix> {
    let eig = eig_hermitian(om)?;
    for &v in &eig.values {
        if v > 1.0 + tol || v < -1.0 - tol {
            return Err(Error::SpectrumOutOfRange { eigenvalue: v });
        }
    }
    Ok(eig.spectral_projector(|v| v >= 1.0 - tol))
}

/// `N^-1 sum_{n=1}^N om^n`.
pub fn cesaro_oracle(om: &CMatrix, n_terms: usize) -> CMatrix {
    let n = om.rows();
    let mut power = CMatrix::identity(n);
    let mut acc = CMatrix::zeros(n, n);
    for _ in 0..n_terms {
        power = power.matmul(om);
        acc = &acc + &power;
    }
    acc.scale_real(1.0 / n_terms.max(1) as f64)
}

/// `d^-2 (I (x) I + sum_ij P_ij B_i (x) conj(B_j))` for a projector `P` on
/// the traceless sector of `basis`.
pub fn phi_infinity_from_projector(proj: &CMatrix, basis: &OperatorBasis) -> CMatrix {
    let d = basis.d();
    let tl = basis.traceless();
    let conj: Vec<CMatrix> = tl.iter().map(CMatrix::conj).collect();
    let mut m = CMatrix::identity(d * d);
    for (i, bi) in tl.iter().enumerate() {
        for (j, bj) in conj.iter().enumerate() {
            let w = proj[(i, j)];
            if w.norm() < 1e-15 {
                continue;
            }
            m = &m + &kron(bi, bj).scale(w);
        }
    }
    m.scale_real(1.0 / (d * d) as f64)
}

/// Second route to `Phi_inf`: spectral projection of the Liouville matrix
/// of `E` in the matrix-unit basis, applied to the maximally entangled state.
pub fn phi_infinity_liouville(u: &CMatrix, d: usize, tol: f64) -> Result<CMatrix> {
    let ch = e_tilde(u, d)?;
    let s = ch.liouville();
    let p = eig_hermitian(&s)?.spectral_projector(|v| v >= 1.0 - tol);
    let mut phi = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            let mut e = vec![C64::new(0.0, 0.0); d * d];
            e[i * d + j] = C64::new(1.0, 0.0);
            let img = CMatrix::from_vec_unchecked(d, d, p.mul_vec(&e));
            let mut unit = CMatrix::zeros(d, d);
            unit[(i, j)] = C64::new(1.0, 0.0);
            phi = &phi + &kron(&img, &unit);
        }
    }
    Ok(phi.scale_real(1.0 / d as f64))
}

/// `Phi_inf` on `[A, R]` via the Pauli-sum route with default tolerances.
pub fn phi_infinity(u: &CMatrix, d: usize) -> Result<QState> {
    Ok(markov_cost(u, d)?.phi_infinity)
}

/// Everything the cost pipeline computes along the way.
#[derive(Debug, Clone, Serialize)]
pub struct MarkovCostReport {
    pub d: usize,
    pub schmidt_coeffs: Vec<f64>,
    /// Spectrum of `Omega`, ascending.
    pub omega_eigenvalues: Vec<f64>,
    pub fixed_point_rank: usize,
    pub phi_infinity: QState,
    /// Spectrum of `Phi_inf`, ascending.
    pub phi_infinity_eigenvalues: Vec<f64>,
    pub cost_bits: f64,
    /// Largest entrywise gap between `Omega_inf` and the Cesàro mean.
    pub cesaro_residual: f64,
    pub cesaro_terms: usize,
    pub fixed_point_tolerance: f64,
}

pub fn markov_cost(u: &CMatrix, d: usize) -> Result<MarkovCostReport> {
    markov_cost_with(u, d, &Tolerances::default())
}

pub fn markov_cost_with(u: &CMatrix, d: usize, tol: &Tolerances) -> Result<MarkovCostReport> {
    markov_cost_in_basis(u, d, &OperatorBasis::pauli(d), tol)
}

/// The cost pipeline in an arbitrary orthogonal operator basis. The result
/// does not depend on the basis up to rounding.
pub fn markov_cost_in_basis(
    u: &CMatrix,
    d: usize,
    basis: &OperatorBasis,
    tol: &Tolerances,
) -> Result<MarkovCostReport> {
    check_bipartite_unitary(u, d, tol.unitary)?;
    let sd = operator_schmidt_with(u, d, tol.schmidt_cutoff)?;
    let ch = e_tilde_from_schmidt(&sd, d)?;
    let om = omega_of_channel(&ch, basis)?;
    let eig = eig_hermitian(&om)?;
    let proj = omega_infinity(&om, tol.fixed_point)?;
    let rank = eig.values.iter().filter(|&&v| v >= 1.0 - tol.fixed_point).count();
    let cesaro = cesaro_oracle(&om, CESARO_TERMS);
    let phi = phi_infinity_from_projector(&proj, basis);
    let phi_infinity = QState::with_tolerance(phi, vec![d, d], STATE_TOL.max(1e-9))?;
    let phi_eigs = phi_infinity.eigenvalues();
    let cost_bits = phi_infinity.entropy();
    Ok(MarkovCostReport {
        d,
        schmidt_coeffs: sd.coeffs,
        omega_eigenvalues: eig.values,
        fixed_point_rank: rank,
        phi_infinity,
        phi_infinity_eigenvalues: phi_eigs,
        cost_bits,
        cesaro_residual: proj.max_abs_diff(&cesaro),
        cesaro_terms: CESARO_TERMS,
        fixed_point_tolerance: tol.fixed_point,
    })
}

// SPDX-License-Identifier: Apache-2.0

//! Completely positive maps in Kraus form.

use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian_unchecked, kron, CMatrix, C64};
use crate::pauli::pauli_group;
use crate::state::QState;
use crate::subsystems::{self, total_dim};

/// Completely positive map `rho -> sum_k K_k rho K_k^dag`. Input and output
/// spaces carry their own subsystem structure.
#[derive(Debug, Clone)]
pub struct QChannel {
    kraus: Vec<CMatrix>,
    dims_in: Vec<usize>,
    dims_out: Vec<usize>,
}

/// Residual of `sum_k K_k^dag K_k - I`.
pub fn completeness_residual(ops: &[CMatrix]) -> f64 {
    let Some(first) = ops.first() else {
        return f64::INFINITY;
    };
    let n = first.cols();
    let mut acc = CMatrix::zeros(n, n);
    for k in ops {
        acc = &acc + &k.dagger().matmul(k);
    }
    acc.max_abs_diff(&CMatrix::identity(n))
}

impl QChannel {
    /// Trace-preserving channel; rejects Kraus sets with completeness
    /// residual above `1e-9`.
    pub fn new(kraus: Vec<CMatrix>, dims_in: Vec<usize>, dims_out: Vec<usize>) -> Result<Self> {
        let ch = QChannel::new_cp(kraus, dims_in, dims_out)?;
        let residual = completeness_residual(&ch.kraus);
        if residual > 1e-9 {
            return Err(Error::NotTracePreserving { residual });
        }
        Ok(ch)
    }

    /// Completely positive map with no completeness requirement, as used for
    /// individual instrument branches.
    pub fn new_cp(kraus: Vec<CMatrix>, dims_in: Vec<usize>, dims_out: Vec<usize>) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::InvalidArgument(
                "channel needs at least one Kraus operator".into(),
            ));
        }
        let (din, dout) = (total_dim(&dims_in), total_dim(&dims_out));
        for k in &kraus {
            if k.cols() != din || k.rows() != dout {
                return Err(Error::DimensionMismatch {
                    context: "Kraus operator shape",
                    expected: dout * din,
                    found: k.rows() * k.cols(),
                });
            }
            if !k.is_finite() {
                return Err(Error::NotFinite);
            }
        }
        Ok(QChannel {
            kraus,
            dims_in,
            dims_out,
        })
    }

    pub fn identity(d: usize) -> Self {
        QChannel::unitary(CMatrix::identity(d))
    }

    /// Conjugation by `u` on a single system. `u` is not checked here.
    pub fn unitary(u: CMatrix) -> Self {
        let (r, c) = (u.rows(), u.cols());
        QChannel {
            kraus: vec![u],
            dims_in: vec![c],
            dims_out: vec![r],
        }
    }

    /// `tau -> Tr[tau] I/d`.
    pub fn completely_depolarizing(d: usize) -> Self {
        let s = 1.0 / d as f64;
        QChannel {
            kraus: pauli_group(d).into_iter().map(|p| p.matrix.scale_real(s)).collect(),
            dims_in: vec![d],
            dims_out: vec![d],
        }
    }

    /// Complete dephasing in the computational basis.
    pub fn dephasing(d: usize) -> Self {
        let kraus = (0..d)
            .map(|t| {
                let mut m = CMatrix::zeros(d, d);
                m[(t, t)] = C64::new(1.0, 0.0);
                m
            })
            .collect();
        QChannel {
            kraus,
            dims_in: vec![d],
            dims_out: vec![d],
        }
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn dims_in(&self) -> &[usize] {
        &self.dims_in
    }

    pub fn dims_out(&self) -> &[usize] {
        &self.dims_out
    }

    pub fn d_in(&self) -> usize {
        total_dim(&self.dims_in)
    }

    pub fn d_out(&self) -> usize {
        total_dim(&self.dims_out)
    }

    pub fn completeness_residual(&self) -> f64 {
        completeness_residual(&self.kraus)
    }

    /// Residual of `E(I) - I` (only meaningful when input and output agree).
    pub fn unitality_residual(&self) -> f64 {
        if self.d_in() != self.d_out() {
            return f64::INFINITY;
        }
        self.apply(&CMatrix::identity(self.d_in()))
            .max_abs_diff(&CMatrix::identity(self.d_out()))
    }

    /// Applies the map to an operator on the full input space.
    pub fn apply(&self, x: &CMatrix) -> CMatrix {
        let mut acc = CMatrix::zeros(self.d_out(), self.d_out());
        for k in &self.kraus {
            acc = &acc + &k.matmul(x).matmul(&k.dagger());
        }
        acc
    }

    /// Hilbert-Schmidt adjoint: Kraus operators replaced by their daggers.
    pub fn adjoint(&self) -> QChannel {
        QChannel {
            kraus: self.kraus.iter().map(CMatrix::dagger).collect(),
            dims_in: self.dims_out.clone(),
            dims_out: self.dims_in.clone(),
        }
    }

    /// `next` after `self`.
    pub fn then(&self, next: &QChannel) -> Result<QChannel> {
        if next.d_in() != self.d_out() {
            return Err(Error::DimensionMismatch {
                context: "channel composition",
                expected: self.d_out(),
                found: next.d_in(),
            });
        }
        let mut kraus = Vec::with_capacity(self.kraus.len() * next.kraus.len());
        for b in &next.kraus {
            for a in &self.kraus {
                kraus.push(b.matmul(a));
            }
        }
        Ok(QChannel {
            kraus,
            dims_in: self.dims_in.clone(),
            dims_out: next.dims_out.clone(),
        })
    }

    /// Liouville matrix acting on row-major vectorizations:
    /// `vec(K X K^dag) = (K (x) conj(K)) vec(X)`.
    pub fn liouville(&self) -> CMatrix {
        let n_out = self.d_out() * self.d_out();
        let n_in = self.d_in() * self.d_in();
        let mut s = CMatrix::zeros(n_out, n_in);
        for k in &self.kraus {
            s = &s + &kron(k, &k.conj());
        }
        s
    }

    /// Choi matrix `sum_ij E(|i><j|) (x) |i><j|` on output (x) input.
    pub fn choi(&self) -> CMatrix {
        let (din, dout) = (self.d_in(), self.d_out());
        let mut j = CMatrix::zeros(dout * din, dout * din);
        for k in &self.kraus {
            // vec of K in (out, in) row-major order is K itself flattened.
            let v: Vec<C64> = k.as_slice().to_vec();
            j = &j + &CMatrix::outer(&v, &v);
        }
        j
    }

    /// Equivalent channel with a minimal Kraus set obtained from the
    /// eigendecomposition of the Choi matrix.
    pub fn simplify(&self) -> QChannel {
        let j = self.choi();
        let eig = eig_hermitian_unchecked(&j.hermitian_part());
        let scale = eig.values.iter().copied().fold(0.0, f64::max);
        let (din, dout) = (self.d_in(), self.d_out());
        let mut kraus = Vec::new();
        for (idx, &lambda) in eig.values.iter().enumerate().rev() {
            if lambda <= 1e-13 * scale.max(1.0) {
                continue;
            }
            let v = eig.vectors.col(idx);
            let k = CMatrix::from_vec_unchecked(dout, din, v).scale_real(lambda.sqrt());
            kraus.push(k);
        }
        if kraus.is_empty() {
            kraus.push(CMatrix::zeros(dout, din));
        }
        QChannel {
            kraus,
            dims_in: self.dims_in.clone(),
            dims_out: self.dims_out.clone(),
        }
    }
}

/// Applies `ch` to the `targets` of `state`. Outputs replace the targets
/// in place when the channel preserves the number of subsystems; otherwise
/// they are inserted as a block where the first target was.
pub fn apply_channel(ch: &QChannel, state: &QState, targets: &[usize]) -> Result<QState> {
    let (m, dims) = apply_channel_raw(ch, state.matrix(), state.dims(), targets)?;
    QState::new(m, dims)
}

/// [`apply_channel`] on an arbitrary operator; no state validation.
pub fn apply_channel_raw(
    ch: &QChannel,
    rho: &CMatrix,
    dims: &[usize],
    targets: &[usize],
) -> Result<(CMatrix, Vec<usize>)> {
    let t_in: usize = targets.iter().map(|&t| dims.get(t).copied().unwrap_or(0)).product();
    if t_in != ch.d_in() {
        return Err(Error::DimensionMismatch {
            context: "channel input",
            expected: ch.d_in(),
            found: t_in,
        });
    }
    subsystems::apply_kraus(ch.kraus(), rho, dims, targets, ch.dims_out())
}

/// `T_ij = Tr[B_i^dag E(B_j)] / d` for basis elements normalized so that
/// `Tr[B_i^dag B_j] = d delta_ij`.
pub fn transfer_matrix<B: AsRef<CMatrix>>(ch: &QChannel, basis: &[B]) -> Result<CMatrix> {
    let n = basis.len();
    let d = ch.d_in();
    if ch.d_out() != d {
        return Err(Error::DimensionMismatch {
            context: "transfer matrix (square channel)",
            expected: d,
            found: ch.d_out(),
        });
    }
    for b in basis {
        if b.as_ref().rows() != d || b.as_ref().cols() != d {
            return Err(Error::DimensionMismatch {
                context: "transfer matrix basis element",
                expected: d,
                found: b.as_ref().rows(),
            });
        }
    }
    let images: Vec<CMatrix> = basis.iter().map(|b| ch.apply(b.as_ref())).collect();
    let inv_d = 1.0 / d as f64;
    Ok(CMatrix::from_fn(n, n, |i, j| {
        basis[i].as_ref().hs_inner(&images[j]) * inv_d
    }))
}

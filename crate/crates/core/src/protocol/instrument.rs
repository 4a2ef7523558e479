// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use crate::channel::completeness_residual;
use crate::error::{Error, Result};
use crate::linalg::{kron, CMatrix, C64};
use crate::state::QState;
use crate::subsystems;

/// Measurement operators `M_k : A (x) A_0 -> A'`, complete up to `1e-9`.
#[derive(Debug, Clone)]
pub struct MeasurementInstrument {
    ops: Vec<CMatrix>,
    d_a: usize,
    d_a0: usize,
    d_out: usize,
}

impl MeasurementInstrument {
    /// `ops` act on `A (x) A_0` with `A` the more significant factor.
    pub fn new(ops: Vec<CMatrix>, d_a: usize, d_a0: usize, d_out: usize) -> Result<Self> {
        if ops.is_empty() {
            return Err(Error::InvalidArgument("instrument needs at least one outcome".into()));
        }
        for m in &ops {
            if m.cols() != d_a * d_a0 || m.rows() != d_out {
                return Err(Error::DimensionMismatch {
                    context: "measurement operator shape",
                    expected: d_out * d_a * d_a0,
                    found: m.rows() * m.cols(),
                });
            }
            if !m.is_finite() {
                return Err(Error::NotFinite);
            }
        }
        let residual = completeness_residual(&ops);
        if residual > 1e-9 {
            return Err(Error::Incomplete { residual });
        }
        Ok(MeasurementInstrument { ops, d_a, d_a0, d_out })
    }

    /// Single outcome, no resource, identity map.
    pub fn identity(d: usize) -> Self {
        MeasurementInstrument::new(vec![CMatrix::identity(d)], d, 1, d).expect("complete")
    }

    /// Projective measurement of `A` in the computational basis.
    pub fn computational(d: usize) -> Self {
        let ops = (0..d)
            .map(|t| {
                let mut m = CMatrix::zeros(d, d);
                m[(t, t)] = C64::new(1.0, 0.0);
                m
            })
            .collect();
        MeasurementInstrument::new(ops, d, 1, d).expect("complete")
    }

    pub fn ops(&self) -> &[CMatrix] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn d_a(&self) -> usize {
        self.d_a
    }

    pub fn d_a0(&self) -> usize {
        self.d_a0
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }
}

/// `M_k = K^{-1/2} sum_j exp(2 pi i j k / K) <j|^{A_0} (x) V_j` for the
/// unitaries `V_0, ..., V_{K-1}` on `A`. With `Phi_K` as resource every
/// outcome has probability `1/K` and induces the uniform mixture of the
/// `V_j`.
pub fn build_alice_measurement(v_list: &[CMatrix], d: usize) -> Result<MeasurementInstrument> {
    let k = v_list.len();
    if k == 0 {
        return Err(Error::InvalidArgument("unitary ensemble is empty".into()));
    }
    for v in v_list {
        if v.rows() != d || v.cols() != d {
            return Err(Error::DimensionMismatch {
                context: "ensemble unitary",
                expected: d,
                found: v.rows().max(v.cols()),
            });
        }
        if !v.is_finite() {
            return Err(Error::NotFinite);
        }
        let residual = v.unitary_residual();
        if residual > 1e-8 {
            return Err(Error::NotUnitary { residual });
        }
    }
    let norm = 1.0 / (k as f64).sqrt();
    let mut ops = Vec::with_capacity(k);
    for outcome in 0..k {
        let mut m = CMatrix::zeros(d, d * k);
        for (j, v) in v_list.iter().enumerate() {
            let phase = C64::from_polar(norm, 2.0 * PI * ((j * outcome) % k) as f64 / k as f64);
            for a2 in 0..d {
                for a in 0..d {
                    m[(a2, a * k + j)] = v[(a2, a)] * phase;
                }
            }
        }
        ops.push(m);
    }
    MeasurementInstrument::new(ops, d, k, d)
}

/// Outcome probability and normalized post-measurement state
/// `p^-1 M (tau (x) phi_res^{A_0}) M^dag`, where `M` acts on system `target`
/// of `input` together with the resource marginal `A_0`. The output system
/// takes the place of `target`. `None` signals a zero-probability outcome.
pub fn induced_map(m: &CMatrix, resource: &QState, input: &QState, target: usize) -> Result<(f64, Option<QState>)> {
    let (raw, dims) = induced_unnormalized(m, resource.matrix(), resource.dim(), input, target)?;
    let p = raw.trace().re;
    if p < 1e-14 {
        return Ok((p.max(0.0), None));
    }
    let st = QState::with_tolerance(raw.scale_real(1.0 / p), dims, 1e-9)?;
    Ok((p, Some(st)))
}

pub(crate) fn induced_unnormalized(
    m: &CMatrix,
    resource: &CMatrix,
    d_a0: usize,
    input: &QState,
    target: usize,
) -> Result<(CMatrix, Vec<usize>)> {
    let dims = input.dims();
    if target >= dims.len() {
        return Err(Error::IndexOutOfRange {
            index: target,
            len: dims.len(),
        });
    }
    if m.cols() != dims[target] * d_a0 {
        return Err(Error::DimensionMismatch {
            context: "measurement input (A A_0)",
            expected: dims[target] * d_a0,
            found: m.cols(),
        });
    }
    let joint = kron(input.matrix(), resource);
    let mut jd = dims.to_vec();
    jd.push(d_a0);
    subsystems::apply_to_operator(m, &joint, &jd, &[target, dims.len()], &[m.rows()])
}

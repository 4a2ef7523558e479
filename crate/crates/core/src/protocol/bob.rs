// SPDX-License-Identifier: Apache-2.0

//! Bob's isometry after Alice's measurement, found by aligning the actual
//! purification with a target in which `B R_B` is maximally entangled.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian_unchecked, kron, trace_norm, uhlmann_align, CMatrix, C64};
use crate::state::{QState, StateVector};
use crate::subsystems::total_dim;

/// Largest `delta` accepted by [`find_bob_isometry`].
pub const MAX_DELTA: f64 = 0.1;

#[derive(Debug, Clone, Serialize)]
pub struct BobIsometry {
    /// Isometry `B B_0 -> B B_1`, `(d d_b1) x (d d_b0)`.
    pub w: CMatrix,
    pub d_b1: usize,
    /// `|| psi^{X R_B} - psi^X (x) I/d ||_1` with `X = A' R_A`.
    pub delta: f64,
    /// `|<target| (I (x) W) |psi>|`.
    pub overlap: f64,
    /// Trace distance between the rotated state and the product target,
    /// `2 sqrt(1 - overlap^2)`.
    pub distance: f64,
    /// Rotated state on `[A', R_A, B, R_B, B_1]`.
    #[serde(skip)]
    pub rotated: StateVector,
    /// Pure target on `[A', R_A, B_1]` whose product with `Phi_d^{B R_B}`
    /// the rotated state approximates.
    #[serde(skip)]
    pub product_factor: StateVector,
}

/// Finds `W` on Bob's systems for a pure state on
/// `[A', R_A, B, R_B, B_0...]` such that `(I (x) W)|psi>` is close to
/// `|psi^p>^{A' R_A B_1} (x) |Phi_d>^{B R_B}`. The distance obeys
/// `distance <= 2 sqrt(delta)`. Fails when `delta > 0.1` or the state is
/// not pure.
pub fn find_bob_isometry(state: &QState, d: usize) -> Result<BobIsometry> {
    let psi = purify_rank_one(state)?;
    find_bob_isometry_pure(&psi, d, None, true)
}

fn purify_rank_one(state: &QState) -> Result<StateVector> {
    let eig = eig_hermitian_unchecked(state.matrix());
    let n = state.dim();
    let top = eig.values[n - 1];
    if (top - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidState(format!(
            "expected a pure state, largest eigenvalue is {top:.3e}"
        )));
    }
    let v = eig.vectors.col(n - 1);
    StateVector::normalized(v, state.dims().to_vec())
        .map(|(s, _)| s)
        .ok_or_else(|| Error::InvalidState("zero vector".into()))
}

/// [`find_bob_isometry`] on a state vector. `d_b1` fixes the output
/// dimension (it must be at least the rank of `psi^{A' R_A}` and the
/// dimension of `B_0`); by default the smallest admissible value is used.
pub fn find_bob_isometry_pure(
    psi: &StateVector,
    d: usize,
    d_b1: Option<usize>,
    enforce_delta: bool,
) -> Result<BobIsometry> {
    let dims = psi.dims();
    if dims.len() < 4 || dims[2] != d || dims[3] != d {
        return Err(Error::InvalidArgument(
            "Bob's isometry expects a state on [A', R_A, B, R_B, B_0...] with B and R_B of dimension d".into(),
        ));
    }
    let dx = dims[0] * dims[1];
    let d_b0 = total_dim(&dims[4..]);
    // Rows (A', R_A, R_B), columns (B, B_0...).
    let mut perm = vec![0, 1, 3, 2];
    perm.extend(4..dims.len());
    let staged = psi.permute(&perm)?;
    let rows = dx * d;
    let cols = d * d_b0;
    let m = CMatrix::from_vec(rows, cols, staged.amplitudes().to_vec())?;

    let xr = m.matmul(&m.dagger());
    let mut rho_x = CMatrix::zeros(dx, dx);
    for x in 0..dx {
        for y in 0..dx {
            let mut s = C64::new(0.0, 0.0);
            for r in 0..d {
                s += xr[(x * d + r, y * d + r)];
            }
            rho_x[(x, y)] = s;
        }
    }
    let delta = trace_norm(&(&xr - &kron(&rho_x, &CMatrix::identity(d).scale_real(1.0 / d as f64))));
    if enforce_delta && delta > MAX_DELTA {
        return Err(Error::Precondition {
            what: "R_B correlated with A'R_A",
            value: delta,
            limit: MAX_DELTA,
        });
    }

    let eig = eig_hermitian_unchecked(&rho_x.hermitian_part());
    let spectrum: Vec<(f64, Vec<C64>)> = (0..dx)
        .rev()
        .map(|i| (eig.values[i], eig.vectors.col(i)))
        .filter(|(l, _)| *l > 1e-12)
        .collect();
    let rank = spectrum.len();
    let min_b1 = rank.max(d_b0).max(1);
    let d_b1 = match d_b1 {
        Some(v) if v < min_b1 => {
            return Err(Error::InvalidArgument(format!(
                "B_1 dimension {v} below the required {min_b1}"
            )))
        }
        Some(v) => v,
        None => min_b1,
    };

    let inv_sqrt_d = 1.0 / (d as f64).sqrt();
    let target = CMatrix::from_fn(rows, d * d_b1, |row, col| {
        let (x, r) = (row / d, row % d);
        let (b, i) = (col / d_b1, col % d_b1);
        if r != b || i >= rank {
            return C64::new(0.0, 0.0);
        }
        spectrum[i].1[x] * (spectrum[i].0.sqrt() * inv_sqrt_d)
    });
    let (w, overlap) = uhlmann_align(&m, &target);
    let overlap = overlap.min(1.0);
    let distance = 2.0 * (1.0 - overlap * overlap).max(0.0).sqrt();

    let rotated_m = m.matmul(&w.transpose());
    let staged_dims = vec![dims[0], dims[1], d, d, d_b1];
    let rotated = StateVector::normalized(rotated_m.into_vec(), staged_dims)
        .map(|(s, _)| s)
        .ok_or_else(|| Error::InvalidState("rotation annihilated the state".into()))?
        .permute(&[0, 1, 3, 2, 4])?;

    let mut factor = vec![C64::new(0.0, 0.0); dx * d_b1];
    for (i, (l, v)) in spectrum.iter().enumerate() {
        for x in 0..dx {
            factor[x * d_b1 + i] = v[x] * l.sqrt();
        }
    }
    let product_factor = StateVector::normalized(factor, vec![dims[0], dims[1], d_b1])
        .map(|(s, _)| s)
        .ok_or_else(|| Error::InvalidState("empty A'R_A marginal".into()))?;

    Ok(BobIsometry {
        w,
        d_b1,
        delta,
        overlap,
        distance,
        rotated,
        product_factor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::max_entangled_vector;

    #[test]
    fn product_input_needs_no_rotation() {
        let d = 2;
        let phi = max_entangled_vector(d);
        // [A', R_A, B, R_B] = Phi (x) Phi, no B_0.
        let psi = StateVector::new(crate::linalg::kron_vec(&phi, &phi), vec![2, 2, 2, 2]).unwrap();
        let bob = find_bob_isometry(&psi.to_density().unwrap(), d).unwrap();
        assert!(bob.delta < 1e-12);
        assert!(bob.distance < 1e-6);
        assert_eq!(bob.d_b1, 1);
        assert!(bob.w.isometry_residual() < 1e-10);
        let overlap = bob
            .rotated
            .amplitudes()
            .iter()
            .zip(&psi.amplitudes().to_vec())
            .map(|(a, b)| a.conj() * b)
            .sum::<C64>();
        assert!((overlap.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn correlated_reference_is_rejected() {
        // R_B maximally entangled with A' instead of B.
        let d = 2;
        let mut amps = vec![C64::new(0.0, 0.0); 16];
        let s = 0.5;
        for a in 0..2 {
            for b in 0..2 {
                // |a>_{A'} |b>_{R_A} |b>_B |a>_{R_B}
                amps[a * 8 + b * 4 + b * 2 + a] = C64::new(s, 0.0);
            }
        }
        let psi = QState::pure(&amps, vec![2, 2, 2, 2]).unwrap();
        assert!(matches!(find_bob_isometry(&psi, d), Err(Error::Precondition { .. })));
    }
}

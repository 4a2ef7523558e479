// SPDX-License-Identifier: Apache-2.0

//! Seeded random unitaries and states for tests and sweeps.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;

use crate::linalg::{CMatrix, C64};
use crate::state::QState;
use crate::subsystems::total_dim;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Matrix of i.i.d. standard complex Gaussians.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

/// Haar-distributed unitary via QR of a Ginibre matrix with the phases of
/// `R`'s diagonal absorbed into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let g = ginibre(n, n, rng).to_nalgebra();
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    let mut out = CMatrix::from_nalgebra(&q);
    for j in 0..n {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 {
            rjj / rjj.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..n {
            out[(i, j)] *= phase;
        }
    }
    out
}

/// Random Hermitian matrix `(G + G^dag) / 2`.
pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    ginibre(n, n, rng).hermitian_part()
}

/// Haar-random pure state amplitudes.
pub fn random_pure_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<C64> {
    let v = ginibre(n, 1, rng).into_vec();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Random mixed state `G G^dag / Tr` with `G` of shape `n x rank`.
pub fn random_state<R: Rng + ?Sized>(dims: &[usize], rank: usize, rng: &mut R) -> QState {
    let n = total_dim(dims);
    let g = ginibre(n, rank.max(1), rng);
    let m = g.matmul(&g.dagger());
    QState::from_unnormalized(m, dims.to_vec()).expect("Wishart matrix is a valid state")
}

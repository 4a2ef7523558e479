// SPDX-License-Identifier: Apache-2.0

use proptest::prelude::*;
use umarkov::channel::transfer_matrix;
use umarkov::linalg::c;
use umarkov::pauli::{pauli_group, traceless_paulis};
use umarkov::random::{haar_unitary, rng};
use umarkov::{apply_channel, gen_pauli, operator_schmidt, CMatrix, OperatorBasis, QChannel, QState};

fn random_channel(d: usize, n_kraus: usize, seed: u64) -> QChannel {
    // Kraus operators from blocks of a Haar isometry.
    let v = haar_unitary(d * n_kraus, &mut rng(seed));
    let ops = (0..n_kraus)
        .map(|k| CMatrix::from_fn(d, d, |i, j| v[(k * d + i, j)]))
        .collect();
    QChannel::new(ops, vec![d], vec![d]).unwrap()
}

#[test]
fn pauli_basis_is_orthogonal_for_small_d() {
    for d in [2, 3, 4] {
        let group = pauli_group(d);
        assert_eq!(group.len(), d * d);
        for (i, a) in group.iter().enumerate() {
            assert!(a.matrix.unitary_residual() < 1e-12);
            for (j, b) in group.iter().enumerate() {
                let ip = a.matrix.hs_inner(&b.matrix);
                let expect = if i == j { d as f64 } else { 0.0 };
                assert!((ip - c(expect, 0.0)).norm() < 1e-12, "d={d} ({i},{j}) -> {ip}");
            }
        }
        assert!(OperatorBasis::pauli(d).orthogonality_residual() < 1e-12);
    }
}

#[test]
fn schmidt_reconstructs_50_random_unitaries() {
    let mut r = rng(42);
    for i in 0..50 {
        let d = 2 + i % 2;
        let u = haar_unitary(d * d, &mut r);
        let sd = operator_schmidt(&u, d).unwrap();
        assert!(sd.rank() <= d * d);
        assert!(sd.reconstruct().max_abs_diff(&u) <= 1e-8);
        let norm: f64 = sd.coeffs.iter().map(|c| c * c).sum();
        assert!((norm - 1.0).abs() < 1e-9);
    }
}

#[test]
fn z_dephasing_transfer_matrix_in_xyz_order() {
    let z = gen_pauli(2, 0, 1).unwrap();
    let x = gen_pauli(2, 1, 0).unwrap();
    let y = x.matmul(&z).scale(c(0.0, 1.0));
    let half = std::f64::consts::FRAC_1_SQRT_2;
    let ch = QChannel::new(
        vec![CMatrix::identity(2).scale_real(half), z.scale_real(half)],
        vec![2],
        vec![2],
    )
    .unwrap();
    let t = transfer_matrix(&ch, &[x, y, z]).unwrap();
    assert!(t.max_abs_diff(&CMatrix::diag_real(&[0.0, 0.0, 1.0])) < 1e-12);
}

#[test]
fn identity_and_depolarizing_transfer_matrices() {
    let basis = traceless_paulis(2);
    let t = transfer_matrix(&QChannel::identity(2), &basis).unwrap();
    assert!(t.max_abs_diff(&CMatrix::identity(3)) < 1e-12);
    let t = transfer_matrix(&QChannel::completely_depolarizing(2), &basis).unwrap();
    assert!(t.max_abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn transfer_matrix_of_composition_is_product(seed in any::<u64>(), d in 2usize..4, k1 in 1usize..4, k2 in 1usize..4) {
        let e1 = random_channel(d, k1, seed);
        let e2 = random_channel(d, k2, seed.wrapping_add(7));
        let basis = pauli_group(d);
        let t1 = transfer_matrix(&e1, &basis).unwrap();
        let t2 = transfer_matrix(&e2, &basis).unwrap();
        let t12 = transfer_matrix(&e1.then(&e2).unwrap(), &basis).unwrap();
        prop_assert!(t12.max_abs_diff(&t2.matmul(&t1)) <= 1e-9);
    }

    #[test]
    fn unital_channels_preserve_maximally_mixed(seed in any::<u64>(), d in 2usize..5, k in 1usize..5) {
        let mut r = rng(seed);
        let weights: Vec<f64> = (0..k).map(|i| (i + 1) as f64).collect();
        let total: f64 = weights.iter().sum();
        let ops = weights.iter().map(|w| haar_unitary(d, &mut r).scale_real((w / total).sqrt())).collect();
        let ch = QChannel::new(ops, vec![d], vec![d]).unwrap();
        prop_assert!(ch.unitality_residual() < 1e-9);
        let mixed = QState::maximally_mixed(vec![d, 2]);
        let out = apply_channel(&ch, &mixed, &[0]).unwrap();
        prop_assert!(out.matrix().max_abs_diff(mixed.matrix()) < 1e-12);
    }

    #[test]
    fn adjoint_pairs_with_channel(seed in any::<u64>(), d in 2usize..4, k in 1usize..4) {
        let ch = random_channel(d, k, seed);
        let mut r = rng(seed ^ 5);
        let x = umarkov::random::ginibre(d, d, &mut r);
        let y = umarkov::random::ginibre(d, d, &mut r);
        let lhs = y.hs_inner(&ch.apply(&x));
        let rhs = ch.adjoint().apply(&y).hs_inner(&x);
        prop_assert!((lhs - rhs).norm() < 1e-10);
        prop_assert!(ch.completeness_residual() < 1e-9);
    }
}

#[test]
fn incomplete_kraus_sets_are_rejected() {
    let half = CMatrix::identity(2).scale_real(0.5);
    assert!(QChannel::new(vec![half], vec![2], vec![2]).is_err());
}

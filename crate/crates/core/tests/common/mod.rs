// SPDX-License-Identifier: Apache-2.0

//! Independent reference computations used by the integration tests. Nothing
//! here calls into the Schmidt, transfer-matrix or projector code paths.

#![allow(dead_code)]

use std::f64::consts::PI;

use umarkov::linalg::eigvals_hermitian;
use umarkov::{gates, CMatrix, C64};

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

/// `d^-2 Tr_B[U (Tr_B[U^dag (tau (x) I) U] (x) I) U^dag]` by explicit index sums.
pub fn e_tilde_by_loops(u: &CMatrix, d: usize, tau: &CMatrix) -> CMatrix {
    let idx = |a: usize, b: usize| a * d + b;
    let mut x = CMatrix::zeros(d, d);
    for a in 0..d {
        for a2 in 0..d {
            let mut s = zero();
            for b in 0..d {
                for c in 0..d {
                    for c2 in 0..d {
                        for e in 0..d {
                            s += u[(idx(c, e), idx(a, b))].conj() * tau[(c, c2)] * u[(idx(c2, e), idx(a2, b))];
                        }
                    }
                }
            }
            x[(a, a2)] = s;
        }
    }
    let mut y = CMatrix::zeros(d, d);
    for a in 0..d {
        for a2 in 0..d {
            let mut s = zero();
            for b in 0..d {
                for c in 0..d {
                    for c2 in 0..d {
                        for e in 0..d {
                            s += u[(idx(a, b), idx(c, e))] * x[(c, c2)] * u[(idx(a2, b), idx(c2, e))].conj();
                        }
                    }
                }
            }
            y[(a, a2)] = s;
        }
    }
    y.scale_real(1.0 / (d * d) as f64)
}

/// Row-major Liouville matrix of `e_tilde_by_loops`.
pub fn liouville_by_loops(u: &CMatrix, d: usize) -> CMatrix {
    let mut l = CMatrix::zeros(d * d, d * d);
    for k in 0..d {
        for m in 0..d {
            let mut unit = CMatrix::zeros(d, d);
            unit[(k, m)] = C64::new(1.0, 0.0);
            let out = e_tilde_by_loops(u, d, &unit);
            for i in 0..d {
                for j in 0..d {
                    l[(i * d + j, k * d + m)] = out[(i, j)];
                }
            }
        }
    }
    l
}

/// `((L + I)/2)^(2^30)` followed by McWeeny purification `3P^2 - 2P^3`. The
/// lazy channel has the same fixed points and no eigenvalue on the unit
/// circle other than 1; purification removes the rounding that repeated
/// squaring accumulates on the unit eigenvalues.
pub fn fixed_point_projector_by_squaring(l: &CMatrix) -> CMatrix {
    let n = l.rows();
    let mut p = (l + &CMatrix::identity(n)).scale_real(0.5);
    for _ in 0..30 {
        p = p.matmul(&p).hermitian_part();
    }
    for _ in 0..8 {
        let p2 = p.matmul(&p);
        p = (&p2.scale_real(3.0) - &p2.matmul(&p).scale_real(2.0)).hermitian_part();
    }
    p
}

/// `(E_inf (x) id)(Phi_d)` from the squared projector.
pub fn phi_infinity_oracle(u: &CMatrix, d: usize) -> CMatrix {
    let proj = fixed_point_projector_by_squaring(&liouville_by_loops(u, d));
    let mut out = CMatrix::zeros(d * d, d * d);
    for k in 0..d {
        for m in 0..d {
            for i in 0..d {
                for j in 0..d {
                    let v = proj[(i * d + j, k * d + m)] / d as f64;
                    out[(i * d + k, j * d + m)] += v;
                }
            }
        }
    }
    out
}

pub fn entropy_bits(rho: &CMatrix) -> f64 {
    eigvals_hermitian(&rho.hermitian_part())
        .unwrap()
        .into_iter()
        .filter(|&l| l > 1e-14)
        .map(|l| -l * l.log2())
        .sum()
}

pub fn cost_oracle(u: &CMatrix, d: usize) -> f64 {
    entropy_bits(&phi_infinity_oracle(u, d))
}

/// Named gates with their dimension, as used throughout the acceptance suite.
pub fn gate_library() -> Vec<(String, usize, CMatrix)> {
    let mut out = Vec::new();
    for d in [2, 3] {
        out.push((format!("identity/{d}"), d, gates::identity(d)));
        out.push((format!("swap/{d}"), d, gates::swap(d)));
        out.push((format!("cnot/{d}"), d, gates::cnot(d)));
        out.push((format!("cz/{d}"), d, gates::cz(d)));
        out.push((format!("dft/{d}"), d, gates::dft(d)));
        for theta in [PI / 4.0, PI / 2.0, 0.3] {
            out.push((format!("cphase({theta:.4})/{d}"), d, gates::cphase(d, theta)));
        }
    }
    out.push(("identity/4".into(), 4, gates::identity(4)));
    out
}

/// Elementwise `sum_n Omega^n / N`, accumulated without the library.
pub fn cesaro_by_loop(om: &CMatrix, n_terms: usize) -> CMatrix {
    let n = om.rows();
    let mut acc = CMatrix::zeros(n, n);
    let mut pow = om.clone();
    for _ in 0..n_terms {
        acc = &acc + &pow;
        pow = pow.matmul(om);
    }
    acc.scale_real(1.0 / n_terms as f64)
}

/// Sharp entrywise bound on the Cesàro error for a Hermitian contraction:
/// `max |lambda (1 - lambda^N)| / (N |1 - lambda|)` over sub-unit eigenvalues.
pub fn cesaro_geometric_bound(eigenvalues: &[f64], n_terms: usize, fixed_tol: f64) -> f64 {
    eigenvalues
        .iter()
        .filter(|&&l| l < 1.0 - fixed_tol)
        .map(|&l| (l * (1.0 - l.powi(n_terms as i32))).abs() / (n_terms as f64 * (1.0 - l).abs()))
        .fold(0.0, f64::max)
}

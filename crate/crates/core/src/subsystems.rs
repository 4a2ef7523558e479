// SPDX-License-Identifier: Apache-2.0

//! Index bookkeeping for tensor products of subsystems.
//!
//! A composite system is described by an ordered list of local dimensions.
//! Flat indices are row-major: the first subsystem is the most significant
//! digit. Permutations follow the convention that axis `k` of the result is
//! axis `perm[k]` of the input.

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64, ZERO};

pub fn total_dim(dims: &[usize]) -> usize {
    dims.iter().product()
}

/// Checks that `sel` is a list of distinct indices into `dims`.
pub fn validate_selection(dims: &[usize], sel: &[usize]) -> Result<()> {
    let mut seen = vec![false; dims.len()];
    for &i in sel {
        if i >= dims.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: dims.len(),
            });
        }
        if seen[i] {
            return Err(Error::OverlappingSubsystems);
        }
        seen[i] = true;
    }
    Ok(())
}

/// Checks a full permutation of `0..n`.
fn validate_permutation(n: usize, perm: &[usize]) -> Result<()> {
    if perm.len() != n {
        return Err(Error::DimensionMismatch {
            context: "permutation length",
            expected: n,
            found: perm.len(),
        });
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n {
            return Err(Error::IndexOutOfRange { index: p, len: n });
        }
        if seen[p] {
            return Err(Error::OverlappingSubsystems);
        }
        seen[p] = true;
    }
    Ok(())
}

/// `map[new_flat] = old_flat` for the axis permutation `perm`.
fn permutation_map(dims: &[usize], perm: &[usize]) -> Vec<usize> {
    let n = dims.len();
    let mut old_strides = vec![1usize; n];
    for k in (0..n.saturating_sub(1)).rev() {
        old_strides[k] = old_strides[k + 1] * dims[k + 1];
    }
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let total = total_dim(dims);
    let mut map = Vec::with_capacity(total);
    let mut digits = vec![0usize; n];
    for _ in 0..total {
        let old: usize = digits.iter().zip(perm).map(|(&dg, &p)| dg * old_strides[p]).sum();
        map.push(old);
        for k in (0..n).rev() {
            digits[k] += 1;
            if digits[k] < new_dims[k] {
                break;
            }
            digits[k] = 0;
        }
    }
    map
}

pub fn permute_dims(dims: &[usize], perm: &[usize]) -> Vec<usize> {
    perm.iter().map(|&p| dims[p]).collect()
}

pub fn permute_vector(v: &[C64], dims: &[usize], perm: &[usize]) -> Result<Vec<C64>> {
    validate_permutation(dims.len(), perm)?;
    check_len(v.len(), dims)?;
    Ok(permutation_map(dims, perm).into_iter().map(|o| v[o]).collect())
}

pub fn permute_operator(m: &CMatrix, dims: &[usize], perm: &[usize]) -> Result<CMatrix> {
    validate_permutation(dims.len(), perm)?;
    check_len(m.rows(), dims)?;
    check_len(m.cols(), dims)?;
    let map = permutation_map(dims, perm);
    Ok(CMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(map[i], map[j])]))
}

fn check_len(len: usize, dims: &[usize]) -> Result<()> {
    let t = total_dim(dims);
    if len != t {
        return Err(Error::DimensionMismatch {
            context: "subsystem dimensions",
            expected: t,
            found: len,
        });
    }
    Ok(())
}

/// Layout after an operator maps the `targets` of `dims` onto `out_dims`.
///
/// When `out_dims` has one entry per target, output `i` takes the place of
/// `targets[i]`. Otherwise the outputs form a contiguous block inserted where
/// the first target used to be, and the remaining systems keep their order.
struct Placement {
    /// Untouched system indices in original order.
    rest: Vec<usize>,
    /// Dimensions after the operator, in `[outputs..., rest...]` order.
    staged_dims: Vec<usize>,
    /// Permutation from the staged order to the final order.
    finish: Vec<usize>,
    final_dims: Vec<usize>,
}

fn placement(dims: &[usize], targets: &[usize], out_dims: &[usize]) -> Placement {
    let rest: Vec<usize> = (0..dims.len()).filter(|i| !targets.contains(i)).collect();
    let n_out = out_dims.len();
    let mut staged_dims = out_dims.to_vec();
    staged_dims.extend(rest.iter().map(|&r| dims[r]));

    // Sort key for each staged axis: (position in final layout).
    let mut keys: Vec<(f64, usize)> = Vec::with_capacity(staged_dims.len());
    if n_out == targets.len() {
        for (i, &t) in targets.iter().enumerate() {
            keys.push((t as f64, i));
        }
        for (j, &r) in rest.iter().enumerate() {
            keys.push((r as f64, n_out + j));
        }
    } else {
        let anchor = targets.iter().copied().min().unwrap_or(0) as f64;
        for i in 0..n_out {
            keys.push((anchor - 0.5 + (i as f64 + 1.0) / (n_out as f64 + 2.0), i));
        }
        for (j, &r) in rest.iter().enumerate() {
            keys.push((r as f64, n_out + j));
        }
    }
    keys.sort_by(|a, b| a.0.total_cmp(&b.0));
    let finish: Vec<usize> = keys.iter().map(|k| k.1).collect();
    let final_dims = permute_dims(&staged_dims, &finish);
    Placement {
        rest,
        staged_dims,
        finish,
        final_dims,
    }
}

fn check_operator(op: &CMatrix, dims: &[usize], targets: &[usize], out_dims: &[usize]) -> Result<()> {
    if targets.is_empty() {
        return Err(Error::EmptySelection);
    }
    validate_selection(dims, targets)?;
    let t_in: usize = targets.iter().map(|&t| dims[t]).product();
    if op.cols() != t_in {
        return Err(Error::DimensionMismatch {
            context: "operator input dimension",
            expected: t_in,
            found: op.cols(),
        });
    }
    if op.rows() != total_dim(out_dims) {
        return Err(Error::DimensionMismatch {
            context: "operator output dimension",
            expected: total_dim(out_dims),
            found: op.rows(),
        });
    }
    Ok(())
}

/// Left-multiplies `(op (x) I_rest)` onto a matrix whose rows are ordered
/// `[targets, rest]`. `m` has `t_in * r` rows.
fn left_apply(op: &CMatrix, m: &CMatrix, r: usize) -> CMatrix {
    let t_in = op.cols();
    let t_out = op.rows();
    let cols = m.cols();
    // View m as t_in x (r * cols).
    let view = CMatrix::from_vec_unchecked(t_in, r * cols, m.as_slice().to_vec());
    let out = op.matmul(&view);
    CMatrix::from_vec_unchecked(t_out * r, cols, out.into_vec())
}

/// Applies `op` (mapping the product of the target spaces to `out_dims`) to
/// a state vector. Returns the new vector and its dimension list.
pub fn apply_to_vector(
    op: &CMatrix,
    v: &[C64],
    dims: &[usize],
    targets: &[usize],
    out_dims: &[usize],
) -> Result<(Vec<C64>, Vec<usize>)> {
    check_operator(op, dims, targets, out_dims)?;
    check_len(v.len(), dims)?;
    let pl = placement(dims, targets, out_dims);
    let mut front = targets.to_vec();
    front.extend(&pl.rest);
    let staged = permute_vector(v, dims, &front)?;
    let r = total_dim(&pl.rest.iter().map(|&i| dims[i]).collect::<Vec<_>>());
    let m = CMatrix::from_vec_unchecked(staged.len(), 1, staged);
    let applied = left_apply(op, &m, r);
    let out = permute_vector(applied.as_slice(), &pl.staged_dims, &pl.finish)?;
    Ok((out, pl.final_dims))
}

/// Computes `op rho op^dag` with `op` acting on `targets`.
pub fn apply_to_operator(
    op: &CMatrix,
    rho: &CMatrix,
    dims: &[usize],
    targets: &[usize],
    out_dims: &[usize],
) -> Result<(CMatrix, Vec<usize>)> {
    apply_kraus(std::slice::from_ref(op), rho, dims, targets, out_dims)
}

/// Computes `sum_k K_k rho K_k^dag` with every `K_k` acting on `targets`.
pub fn apply_kraus(
    kraus: &[CMatrix],
    rho: &CMatrix,
    dims: &[usize],
    targets: &[usize],
    out_dims: &[usize],
) -> Result<(CMatrix, Vec<usize>)> {
    for k in kraus {
        check_operator(k, dims, targets, out_dims)?;
    }
    let pl = placement(dims, targets, out_dims);
    let mut front = targets.to_vec();
    front.extend(&pl.rest);
    let staged = permute_operator(rho, dims, &front)?;
    let r = total_dim(&pl.rest.iter().map(|&i| dims[i]).collect::<Vec<_>>());
    let n_out = total_dim(&pl.staged_dims);
    let mut acc = CMatrix::zeros(n_out, n_out);
    for k in kraus {
        let half = left_apply(k, &staged, r);
        let full = left_apply(k, &half.dagger(), r).dagger();
        acc = &acc + &full;
    }
    let out = permute_operator(&acc, &pl.staged_dims, &pl.finish)?;
    Ok((out, pl.final_dims))
}

/// The full matrix of `op` acting on `targets` of `dims` and identity
/// elsewhere. Requires `op` to be square on the targets.
pub fn embed_operator(op: &CMatrix, dims: &[usize], targets: &[usize]) -> Result<CMatrix> {
    let t_dims: Vec<usize> = targets.iter().map(|&t| dims.get(t).copied().unwrap_or(0)).collect();
    let n = total_dim(dims);
    let (out, _) = apply_to_vector_columns(op, &CMatrix::identity(n), dims, targets, &t_dims)?;
    Ok(out)
}

/// Applies `op` to every column of `m` (each column a vector on `dims`).
pub fn apply_to_vector_columns(
    op: &CMatrix,
    m: &CMatrix,
    dims: &[usize],
    targets: &[usize],
    out_dims: &[usize],
) -> Result<(CMatrix, Vec<usize>)> {
    check_operator(op, dims, targets, out_dims)?;
    check_len(m.rows(), dims)?;
    let pl = placement(dims, targets, out_dims);
    let mut front = targets.to_vec();
    front.extend(&pl.rest);
    let map_in = permutation_map(dims, &front);
    let staged = CMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(map_in[i], j)]);
    let r = total_dim(&pl.rest.iter().map(|&i| dims[i]).collect::<Vec<_>>());
    let applied = left_apply(op, &staged, r);
    let map_out = permutation_map(&pl.staged_dims, &pl.finish);
    let out = CMatrix::from_fn(applied.rows(), applied.cols(), |i, j| applied[(map_out[i], j)]);
    Ok((out, pl.final_dims))
}

/// Partial trace keeping `keep` (returned in ascending index order).
pub fn partial_trace(rho: &CMatrix, dims: &[usize], keep: &[usize]) -> Result<(CMatrix, Vec<usize>)> {
    if keep.is_empty() {
        return Err(Error::EmptySelection);
    }
    validate_selection(dims, keep)?;
    check_len(rho.rows(), dims)?;
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !kept.contains(i)).collect();
    let mut front = kept.clone();
    front.extend(&traced);
    let staged = permute_operator(rho, dims, &front)?;
    let k_dims: Vec<usize> = kept.iter().map(|&i| dims[i]).collect();
    let dk = total_dim(&k_dims);
    let dt = total_dim(&traced.iter().map(|&i| dims[i]).collect::<Vec<_>>());
    let mut out = CMatrix::zeros(dk, dk);
    for i in 0..dk {
        for j in 0..dk {
            let mut s = ZERO;
            for t in 0..dt {
                s += staged[(i * dt + t, j * dt + t)];
            }
            out[(i, j)] = s;
        }
    }
    Ok((out, k_dims))
}

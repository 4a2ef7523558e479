// SPDX-License-Identifier: Apache-2.0

//! Dense complex matrices and the handful of decompositions the rest of the
//! crate needs. Eigen- and singular-value decompositions are delegated to
//! `nalgebra`; everything else is plain row-major arithmetic.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Dense complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, " ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, " {:+.4}{:+.4}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMatrix { rows, cols, data }
    }

    /// Builds a matrix from row-major entries, rejecting a wrong entry count
    /// or non-finite values.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidArgument("matrix dimensions must be positive".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: "matrix entries",
                expected: rows * cols,
                found: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NotFinite);
        }
        Ok(CMatrix { rows, cols, data })
    }

    pub(crate) fn from_vec_unchecked(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        CMatrix { rows, cols, data }
    }

    pub fn from_real(rows: usize, cols: usize, re: &[f64]) -> Result<Self> {
        CMatrix::from_vec(rows, cols, re.iter().map(|&x| c(x, 0.0)).collect())
    }

    pub fn diag(values: &[C64]) -> Self {
        let n = values.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m.data[i * n + i] = v;
        }
        m
    }

    pub fn diag_real(values: &[f64]) -> Self {
        CMatrix::diag(&values.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>())
    }

    /// Column vector.
    pub fn column(v: &[C64]) -> Self {
        CMatrix::from_vec_unchecked(v.len(), 1, v.to_vec())
    }

    /// Outer product `|a><b|`.
    pub fn outer(a: &[C64], b: &[C64]) -> Self {
        CMatrix::from_fn(a.len(), b.len(), |i, j| a[i] * b[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn col(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_col(&mut self, j: usize, v: &[C64]) {
        for (i, &z) in v.iter().enumerate() {
            self[(i, j)] = z;
        }
    }

    pub fn dagger(&self) -> Self {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(
            self.cols, other.rows,
            "matmul shape mismatch {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let (n, m, p) = (self.rows, self.cols, other.cols);
        let mut out = vec![ZERO; n * p];
        for i in 0..n {
            let row = &mut out[i * p..(i + 1) * p];
            for k in 0..m {
                let a = self.data[i * m + k];
                if a == ZERO {
                    continue;
                }
                let orow = &other.data[k * p..(k + 1) * p];
                for (o, &b) in row.iter_mut().zip(orow) {
                    *o += a * b;
                }
            }
        }
        CMatrix::from_vec_unchecked(n, p, out)
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// `Tr[self^dag other]`.
    pub fn hs_inner(&self, other: &CMatrix) -> C64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest elementwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest elementwise modulus of `self - self^dag`.
    pub fn hermitian_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut r: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                r = r.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        r
    }

    /// Largest elementwise modulus of `self^dag self - I`.
    pub fn unitary_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.isometry_residual()
    }

    pub fn isometry_residual(&self) -> f64 {
        self.dagger().matmul(self).max_abs_diff(&CMatrix::identity(self.cols))
    }

    /// `(A + A^dag) / 2`.
    pub fn hermitian_part(&self) -> CMatrix {
        let d = self.dagger();
        CMatrix::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + d[(i, j)]) * 0.5)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub fn from_nalgebra(m: &DMatrix<C64>) -> CMatrix {
        CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }
}

impl AsRef<CMatrix> for CMatrix {
    fn as_ref(&self) -> &CMatrix {
        self
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.matmul(rhs)
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix::from_vec_unchecked(
            self.rows,
            self.cols,
            self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        )
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix::from_vec_unchecked(
            self.rows,
            self.cols,
            self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        )
    }
}

#[derive(Serialize, Deserialize)]
struct RawMatrix {
    rows: usize,
    cols: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl Serialize for CMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawMatrix {
            rows: self.rows,
            cols: self.cols,
            re: self.data.iter().map(|z| z.re).collect(),
            im: self.data.iter().map(|z| z.im).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawMatrix::deserialize(d)?;
        if raw.re.len() != raw.im.len() {
            return Err(D::Error::custom("\"re\" and \"im\" differ in length"));
        }
        let data = raw.re.iter().zip(&raw.im).map(|(&a, &b)| c(a, b)).collect();
        CMatrix::from_vec(raw.rows, raw.cols, data).map_err(D::Error::custom)
    }
}

/// Kronecker product in the standard blockwise layout.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (br, bc) = (b.rows, b.cols);
    CMatrix::from_fn(a.rows * br, a.cols * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a CMatrix>) -> CMatrix {
    factors.into_iter().fold(CMatrix::identity(1), |acc, f| kron(&acc, f))
}

pub fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &x in a {
        for &y in b {
            out.push(x * y);
        }
    }
    out
}

/// Spectrum of a Hermitian matrix: ascending eigenvalues and the matching
/// eigenvectors as columns of a unitary.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn reconstruct(&self) -> CMatrix {
        let v = &self.vectors;
        let scaled = CMatrix::from_fn(v.rows(), v.cols(), |i, j| v[(i, j)] * self.values[j]);
        scaled.matmul(&v.dagger())
    }

    /// Projector onto the span of eigenvectors whose eigenvalue satisfies `keep`.
    pub fn spectral_projector(&self, keep: impl Fn(f64) -> bool) -> CMatrix {
        let n = self.vectors.rows();
        let mut p = CMatrix::zeros(n, n);
        for (k, &lambda) in self.values.iter().enumerate() {
            if keep(lambda) {
                let v = self.vectors.col(k);
                for i in 0..n {
                    for j in 0..n {
                        p[(i, j)] += v[i] * v[j].conj();
                    }
                }
            }
        }
        p
    }

    /// Applies `f` to the spectrum: `V f(diag) V^dag`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let v = &self.vectors;
        let fv: Vec<f64> = self.values.iter().map(|&x| f(x)).collect();
        let scaled = CMatrix::from_fn(v.rows(), v.cols(), |i, j| v[(i, j)] * fv[j]);
        scaled.matmul(&v.dagger())
    }
}

/// Eigendecomposition of a Hermitian matrix. Rejects inputs whose
/// Hermiticity residual exceeds `1e-8`.
pub fn eig_hermitian(a: &CMatrix) -> Result<HermitianEigen> {
    eig_hermitian_tol(a, 1e-8)
}

pub fn eig_hermitian_tol(a: &CMatrix, tol: f64) -> Result<HermitianEigen> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            context: "eigendecomposition (square input)",
            expected: a.rows(),
            found: a.cols(),
        });
    }
    let residual = a.hermitian_residual();
    if residual > tol {
        return Err(Error::NotHermitian { residual });
    }
    Ok(eig_hermitian_unchecked(&a.hermitian_part()))
}

pub(crate) fn eig_hermitian_unchecked(a: &CMatrix) -> HermitianEigen {
    let n = a.rows();
    let eig = nalgebra::linalg::SymmetricEigen::new(a.to_nalgebra());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    HermitianEigen { values, vectors }
}

/// Eigenvalues only, ascending.
pub fn eigvals_hermitian(a: &CMatrix) -> Result<Vec<f64>> {
    Ok(eig_hermitian(a)?.values)
}

/// Thin singular value decomposition `a = u diag(s) v^dag` with `s`
/// nonincreasing. `u` is `rows x k`, `v` is `cols x k`, `k = min(rows, cols)`;
/// both have orthonormal columns.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMatrix,
    pub s: Vec<f64>,
    pub v: CMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> CMatrix {
        let u = &self.u;
        let scaled = CMatrix::from_fn(u.rows(), u.cols(), |i, j| u[(i, j)] * self.s[j]);
        scaled.matmul(&self.v.dagger())
    }
}

pub fn svd(a: &CMatrix) -> Svd {
    let k = a.rows().min(a.cols());
    let dec = a.to_nalgebra().svd(true, true);
    let u = dec.u.expect("u requested");
    let v_t = dec.v_t.expect("v_t requested");
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| dec.singular_values[j].total_cmp(&dec.singular_values[i]));
    let s = order.iter().map(|&i| dec.singular_values[i]).collect();
    let u = CMatrix::from_fn(a.rows(), k, |i, j| u[(i, order[j])]);
    let v = CMatrix::from_fn(a.cols(), k, |i, j| v_t[(order[j], i)].conj());
    Svd { u, s, v }
}

/// Sum of singular values.
pub fn trace_norm(a: &CMatrix) -> f64 {
    if a.hermitian_residual() <= 1e-12 {
        // Hermitian fast path: |eigenvalues|.
        return eig_hermitian_unchecked(&a.hermitian_part())
            .values
            .iter()
            .map(|x| x.abs())
            .sum();
    }
    svd(a).s.iter().sum()
}

/// Unitary `W` maximising `|<target| (I (x) W) |source>|` where both states
/// are given as matrices with rows indexed by the untouched systems and
/// columns by the systems `W` acts on (`source` columns are the input space,
/// `target` columns the output space). Returns `W` (output x input) and the
/// achieved overlap. When the output space is larger, `W` is an isometry.
pub(crate) fn uhlmann_align(source: &CMatrix, target: &CMatrix) -> (CMatrix, f64) {
    assert_eq!(source.rows(), target.rows());
    assert!(target.cols() >= source.cols());
    // <target| (I (x) W) |source> = Tr[target^dag source W^T]
    let m = target.dagger().matmul(source);
    let dec = svd(&m);
    // W^T = Q P^dag  =>  W = conj(P) Q^T
    let mut w = dec.u.conj().matmul(&dec.v.transpose());
    if w.isometry_residual() > 1e-10 {
        // Rank-deficient overlaps can leave non-orthonormal singular vectors.
        let polar = svd(&w);
        w = polar.u.matmul(&polar.v.dagger());
    }
    let overlap = m.matmul(&w.transpose()).trace().norm();
    (w, overlap)
}

// SPDX-License-Identifier: Apache-2.0

//! Density matrices on labelled tensor factors, pure state vectors, and the
//! entropic functionals built on them. All logarithms are base 2.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian_unchecked, trace_norm, CMatrix, C64};
use crate::subsystems::{self, total_dim, validate_selection};

/// Eigenvalues down to this (negative) value are treated as numerical noise.
pub const NEGATIVE_EIGENVALUE_TOL: f64 = 1e-10;
/// Hermiticity and trace tolerance enforced on every [`QState`].
pub const STATE_TOL: f64 = 1e-10;

/// A validated density matrix together with its subsystem dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct QState {
    matrix: CMatrix,
    dims: Vec<usize>,
}

impl QState {
    /// Validates Hermiticity, unit trace and positivity (all at `1e-10`).
    pub fn new(matrix: CMatrix, dims: Vec<usize>) -> Result<Self> {
        Self::with_tolerance(matrix, dims, STATE_TOL)
    }

    pub fn with_tolerance(matrix: CMatrix, dims: Vec<usize>, tol: f64) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidState("density matrix is not square".into()));
        }
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidState("subsystem dimensions must be positive".into()));
        }
        if total_dim(&dims) != matrix.rows() {
            return Err(Error::DimensionMismatch {
                context: "state dimensions",
                expected: matrix.rows(),
                found: total_dim(&dims),
            });
        }
        if !matrix.is_finite() {
            return Err(Error::NotFinite);
        }
        let residual = matrix.hermitian_residual();
        if residual > tol {
            return Err(Error::NotHermitian { residual });
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidState(format!(
                "trace {:.3e}{:+.3e}i differs from 1",
                tr.re, tr.im
            )));
        }
        let h = matrix.hermitian_part();
        let min = eig_hermitian_unchecked(&h).values[0];
        if min < -NEGATIVE_EIGENVALUE_TOL.max(tol) {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(QState { matrix: h, dims })
    }

    /// Normalizes a positive operator by its trace before validating.
    pub fn from_unnormalized(matrix: CMatrix, dims: Vec<usize>) -> Result<Self> {
        let tr = matrix.trace().re;
        if tr <= 0.0 || !tr.is_finite() {
            return Err(Error::InvalidState("operator has non-positive trace".into()));
        }
        QState::new(matrix.scale_real(1.0 / tr), dims)
    }

    pub fn pure(amplitudes: &[C64], dims: Vec<usize>) -> Result<Self> {
        StateVector::new(amplitudes.to_vec(), dims)?.to_density()
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Self {
        let n = total_dim(&dims);
        QState {
            matrix: CMatrix::identity(n).scale_real(1.0 / n as f64),
            dims,
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// Marginal on `keep`, with subsystems in ascending index order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<QState> {
        let (m, dims) = subsystems::partial_trace(&self.matrix, &self.dims, keep)?;
        Ok(QState {
            matrix: m.hermitian_part(),
            dims,
        })
    }

    pub fn tensor(&self, other: &QState) -> QState {
        let mut dims = self.dims.clone();
        dims.extend(&other.dims);
        QState {
            matrix: crate::linalg::kron(&self.matrix, &other.matrix),
            dims,
        }
    }

    /// Reorders subsystems: subsystem `k` of the result is `perm[k]` here.
    pub fn permute(&self, perm: &[usize]) -> Result<QState> {
        let m = subsystems::permute_operator(&self.matrix, &self.dims, perm)?;
        Ok(QState {
            matrix: m,
            dims: subsystems::permute_dims(&self.dims, perm),
        })
    }

    /// Conjugates by a unitary acting on `targets`.
    pub fn evolve(&self, u: &CMatrix, targets: &[usize]) -> Result<QState> {
        let t_dims: Vec<usize> = targets.iter().map(|&t| self.dims[t]).collect();
        let (m, dims) = subsystems::apply_to_operator(u, &self.matrix, &self.dims, targets, &t_dims)?;
        QState::new(m, dims)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        eig_hermitian_unchecked(&self.matrix).values
    }

    pub fn purity(&self) -> f64 {
        self.matrix.hs_inner(&self.matrix).re
    }

    pub fn entropy(&self) -> f64 {
        von_neumann_entropy(self)
    }

    /// Entropy of the marginal on `sel`; the empty selection has entropy 0.
    pub fn entropy_of(&self, sel: &[usize]) -> Result<f64> {
        if sel.is_empty() {
            validate_selection(&self.dims, sel)?;
            return Ok(0.0);
        }
        Ok(self.partial_trace(sel)?.entropy())
    }

    /// `S(AB) - S(A)`.
    pub fn conditional_entropy(&self, b: &[usize], a: &[usize]) -> Result<f64> {
        check_disjoint(&self.dims, &[a, b])?;
        Ok(self.entropy_of(&union(&[a, b]))? - self.entropy_of(a)?)
    }

    /// `S(A) + S(B) - S(AB)`.
    pub fn mutual_information(&self, a: &[usize], b: &[usize]) -> Result<f64> {
        check_disjoint(&self.dims, &[a, b])?;
        let v = self.entropy_of(a)? + self.entropy_of(b)? - self.entropy_of(&union(&[a, b]))?;
        Ok(clamp_small_negative(v))
    }
}

fn union(sets: &[&[usize]]) -> Vec<usize> {
    let mut u: Vec<usize> = sets.iter().flat_map(|s| s.iter().copied()).collect();
    u.sort_unstable();
    u
}

fn check_disjoint(dims: &[usize], sets: &[&[usize]]) -> Result<()> {
    validate_selection(dims, &sets.iter().flat_map(|s| s.iter().copied()).collect::<Vec<_>>())
}

fn clamp_small_negative(v: f64) -> f64 {
    if (-1e-9..0.0).contains(&v) {
        0.0
    } else {
        v
    }
}

impl Serialize for QState {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("QState", 5)?;
        st.serialize_field("dims", &self.dims)?;
        st.serialize_field("rows", &self.matrix.rows())?;
        st.serialize_field("cols", &self.matrix.cols())?;
        st.serialize_field("re", &self.matrix.as_slice().iter().map(|z| z.re).collect::<Vec<_>>())?;
        st.serialize_field("im", &self.matrix.as_slice().iter().map(|z| z.im).collect::<Vec<_>>())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for QState {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            dims: Vec<usize>,
            #[serde(flatten)]
            matrix: CMatrix,
        }
        let raw = Raw::deserialize(d)?;
        QState::new(raw.matrix, raw.dims).map_err(serde::de::Error::custom)
    }
}

/// A normalized pure state on labelled subsystems.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<C64>,
    dims: Vec<usize>,
}

impl StateVector {
    pub fn new(amps: Vec<C64>, dims: Vec<usize>) -> Result<Self> {
        if total_dim(&dims) != amps.len() {
            return Err(Error::DimensionMismatch {
                context: "state vector dimensions",
                expected: amps.len(),
                found: total_dim(&dims),
            });
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NotFinite);
        }
        let n = norm(&amps);
        if (n - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("vector norm {n} differs from 1")));
        }
        Ok(StateVector { amps, dims })
    }

    /// Normalizes `amps`; returns the squared norm alongside, or `None` when
    /// the vector is (numerically) zero.
    pub fn normalized(amps: Vec<C64>, dims: Vec<usize>) -> Option<(Self, f64)> {
        let n2: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if n2 < 1e-28 {
            return None;
        }
        let s = 1.0 / n2.sqrt();
        let amps = amps.into_iter().map(|z| z * s).collect();
        Some((StateVector { amps, dims }, n2))
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut dims = self.dims.clone();
        dims.extend(&other.dims);
        StateVector {
            amps: crate::linalg::kron_vec(&self.amps, &other.amps),
            dims,
        }
    }

    pub fn permute(&self, perm: &[usize]) -> Result<StateVector> {
        Ok(StateVector {
            amps: subsystems::permute_vector(&self.amps, &self.dims, perm)?,
            dims: subsystems::permute_dims(&self.dims, perm),
        })
    }

    /// Applies a norm-preserving operator on `targets`.
    pub fn evolve(&self, op: &CMatrix, targets: &[usize], out_dims: &[usize]) -> Result<StateVector> {
        let (amps, dims) = subsystems::apply_to_vector(op, &self.amps, &self.dims, targets, out_dims)?;
        StateVector::new(amps, dims)
    }

    /// Applies an arbitrary operator; the result is left unnormalized.
    pub fn apply_raw(&self, op: &CMatrix, targets: &[usize], out_dims: &[usize]) -> Result<(Vec<C64>, Vec<usize>)> {
        subsystems::apply_to_vector(op, &self.amps, &self.dims, targets, out_dims)
    }

    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn to_density(&self) -> Result<QState> {
        QState::new(CMatrix::outer(&self.amps, &self.amps), self.dims.clone())
    }

    /// Reduced state on `keep` (sorted ascending), computed as `M M^dag` with
    /// `M` the amplitudes reshaped to kept x traced.
    pub fn marginal(&self, keep: &[usize]) -> Result<QState> {
        if keep.is_empty() {
            return Err(Error::EmptySelection);
        }
        validate_selection(&self.dims, keep)?;
        let mut kept = keep.to_vec();
        kept.sort_unstable();
        let mut perm = kept.clone();
        perm.extend((0..self.dims.len()).filter(|i| !kept.contains(i)));
        let staged = subsystems::permute_vector(&self.amps, &self.dims, &perm)?;
        let k_dims: Vec<usize> = kept.iter().map(|&i| self.dims[i]).collect();
        let dk = total_dim(&k_dims);
        let m = CMatrix::from_vec(dk, self.amps.len() / dk, staged)?;
        QState::new(m.matmul(&m.dagger()), k_dims)
    }
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Shannon entropy of a probability vector, in bits.
pub fn shannon_entropy(p: &[f64]) -> f64 {
    p.iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.log2())
        .sum::<f64>()
        .max(0.0)
}

/// `-sum lambda log2 lambda` with small negative eigenvalues clamped to zero.
pub fn von_neumann_entropy(state: &QState) -> f64 {
    let vals: Vec<f64> = state
        .eigenvalues()
        .into_iter()
        .map(|x| if x < 0.0 { 0.0 } else { x })
        .collect();
    shannon_entropy(&vals)
}

/// Entropy of an arbitrary Hermitian positive operator of unit trace. Fails
/// when an eigenvalue lies below `-1e-10`.
pub fn entropy_of_matrix(rho: &CMatrix) -> Result<f64> {
    let vals = crate::linalg::eig_hermitian(rho)?.values;
    if let Some(&min) = vals.first() {
        if min < -NEGATIVE_EIGENVALUE_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:.3e}")));
        }
    }
    Ok(shannon_entropy(
        &vals.into_iter().map(|x| x.max(0.0)).collect::<Vec<_>>(),
    ))
}

/// Uhlmann fidelity in the squared convention `(Tr|sqrt(rho) sqrt(sigma)|)^2`.
/// For a pure `sigma = |psi><psi|` this is `<psi|rho|psi>`.
pub fn fidelity(rho: &QState, sigma: &QState) -> Result<f64> {
    Ok(root_fidelity(rho, sigma)?.powi(2).min(1.0))
}

/// `Tr|sqrt(rho) sqrt(sigma)|`, the square root of [`fidelity`].
pub fn root_fidelity(rho: &QState, sigma: &QState) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            context: "fidelity",
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    let sr = eig_hermitian_unchecked(rho.matrix()).apply(|x| x.max(0.0).sqrt());
    let ss = eig_hermitian_unchecked(sigma.matrix()).apply(|x| x.max(0.0).sqrt());
    Ok(trace_norm(&sr.matmul(&ss)).clamp(0.0, 1.0))
}

/// `||rho - sigma||_1`.
pub fn trace_distance(rho: &QState, sigma: &QState) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            context: "trace distance",
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    Ok(trace_norm(&(rho.matrix() - sigma.matrix())))
}

/// `I(A:C|B) = S(AB) + S(BC) - S(B) - S(ABC)`, clamped to zero when within
/// `-1e-9` of it.
pub fn conditional_mutual_information(state: &QState, a: &[usize], c: &[usize], b: &[usize]) -> Result<f64> {
    if a.is_empty() || c.is_empty() {
        return Err(Error::EmptySelection);
    }
    check_disjoint(state.dims(), &[a, b, c])?;
    let v = state.entropy_of(&union(&[a, b]))? + state.entropy_of(&union(&[b, c]))?
        - state.entropy_of(b)?
        - state.entropy_of(&union(&[a, b, c]))?;
    Ok(clamp_small_negative(v))
}

/// One named entropic quantity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyEntry {
    pub label: String,
    /// Subsystem index sets the quantity refers to.
    pub subsystems: Vec<Vec<usize>>,
    pub bits: f64,
}

/// A list of labelled entropic values, in bits.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub entries: Vec<EntropyEntry>,
}

impl EntropyReport {
    pub fn push(&mut self, label: impl Into<String>, subsystems: Vec<Vec<usize>>, bits: f64) {
        self.entries.push(EntropyEntry {
            label: label.into(),
            subsystems,
            bits,
        });
    }

    pub fn get(&self, label: &str) -> Option<f64> {
        self.entries.iter().find(|e| e.label == label).map(|e| e.bits)
    }

    pub fn extend(&mut self, other: EntropyReport) {
        self.entries.extend(other.entries);
    }

    /// Entropies of the marginals on each set in `sets`.
    pub fn marginals(state: &QState, sets: &[Vec<usize>]) -> Result<EntropyReport> {
        let mut r = EntropyReport::default();
        for s in sets {
            r.push(format!("S{s:?}"), vec![s.clone()], state.entropy_of(s)?);
        }
        Ok(r)
    }
}

//! Structure tuples and the metric 2-step nilpotent Lie algebras they encode.
//!
//! A tuple `C = (C^1, ..., C^p)` of skew-symmetric `q × q` matrices defines a
//! bracket on `R^q ⊕ R^p` by
//!
//! ```text
//! [e_i, e_j] = Σ_k C^k_{ij} e_{q+k}      1 ≤ i, j ≤ q
//! ```
//!
//! with every bracket involving `e_{q+1}, ..., e_{q+p}` equal to zero. The
//! commutator is the span of the tuple, so its dimension is the numerical rank
//! of `(C^1, ..., C^p)` inside `so(q)`.
//!
//! The same type doubles as the tangent space: results of the infinitesimal
//! action and flow gradients are returned as `StructureTuple` values too.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Largest supported `q`. Everything here is dense and desk-scale.
pub const MAX_Q: usize = 64;

pub const DEFAULT_SKEW_TOL: f64 = 1e-12;
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// A `p`-tuple of real `q × q` matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureTuple {
    q: usize,
    matrices: Vec<DMatrix<f64>>,
    label: Option<String>,
}

impl StructureTuple {
    /// Builds a tuple, checking only shapes. Skewness is reported by
    /// [`validate`], not enforced here.
    pub fn new(q: usize, matrices: Vec<DMatrix<f64>>) -> Result<Self> {
        if q == 0 {
            return Err(Error::Structural("q must be at least 1".into()));
        }
        if q > MAX_Q {
            return Err(Error::Structural(format!(
                "q = {q} exceeds the supported maximum {MAX_Q}"
            )));
        }
        if matrices.is_empty() {
            return Err(Error::Structural("a tuple needs at least one matrix (p ≥ 1)".into()));
        }
        for (k, m) in matrices.iter().enumerate() {
            if m.nrows() != q || m.ncols() != q {
                return Err(Error::Structural(format!(
                    "matrix {k} is {}x{}, expected {q}x{q}",
                    m.nrows(),
                    m.ncols()
                )));
            }
        }
        Ok(Self {
            q,
            matrices,
            label: None,
        })
    }

    /// Builds a tuple from row-major entry lists, one per matrix.
    pub fn from_row_major(q: usize, rows: &[Vec<f64>]) -> Result<Self> {
        let mut matrices = Vec::with_capacity(rows.len());
        for (k, entries) in rows.iter().enumerate() {
            if entries.len() != q * q {
                return Err(Error::Structural(format!(
                    "matrix {k} has {} entries, expected {}",
                    entries.len(),
                    q * q
                )));
            }
            matrices.push(DMatrix::from_row_slice(q, q, entries));
        }
        Self::new(q, matrices)
    }

    pub fn zeros(q: usize, p: usize) -> Result<Self> {
        Self::new(q, vec![DMatrix::zeros(q, q); p])
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn set_label(&mut self, label: Option<String>) {
        self.label = label;
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn p(&self) -> usize {
        self.matrices.len()
    }

    /// Dimension `q + p` of the associated Lie algebra.
    pub fn dim(&self) -> usize {
        self.q + self.matrices.len()
    }

    pub fn matrices(&self) -> &[DMatrix<f64>] {
        &self.matrices
    }

    pub fn matrix(&self, k: usize) -> &DMatrix<f64> {
        &self.matrices[k]
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn into_matrices(self) -> Vec<DMatrix<f64>> {
        self.matrices
    }

    /// Applies `f` to every coordinate; the label is dropped.
    pub fn map(&self, mut f: impl FnMut(&DMatrix<f64>) -> DMatrix<f64>) -> Self {
        Self {
            q: self.q,
            matrices: self.matrices.iter().map(|m| f(m)).collect(),
            label: None,
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        self.map(|m| m * c)
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.q == other.q && self.p() == other.p()
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::Structural(format!(
                "shape mismatch: (p, q) = ({}, {}) vs ({}, {})",
                self.p(),
                self.q,
                other.p(),
                other.q
            )))
        }
    }

    /// `self + c · other`.
    pub fn axpy(&self, c: f64, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        Ok(Self {
            q: self.q,
            matrices: self
                .matrices
                .iter()
                .zip(&other.matrices)
                .map(|(a, b)| a + b * c)
                .collect(),
            label: None,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.axpy(1.0, other)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.axpy(-1.0, other)
    }

    /// Frobenius norm of the whole tuple, `sqrt(Σ_α ‖C^α‖²)`.
    pub fn norm(&self) -> f64 {
        self.matrices
            .iter()
            .map(|m| m.norm_squared())
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.matrices.iter().all(|m| m.iter().all(|&x| x == 0.0))
    }

    pub fn is_finite(&self) -> bool {
        self.matrices.iter().all(|m| m.iter().all(|x| x.is_finite()))
    }

    /// Largest entry of `|C^k + (C^k)ᵗ|` for each coordinate.
    pub fn skew_defects(&self) -> Vec<f64> {
        self.matrices.iter().map(skew_defect).collect()
    }

    pub fn is_skew(&self, skew_tol: f64) -> bool {
        self.skew_defects().iter().all(|&d| d <= skew_tol)
    }

    /// Row-major entries of every coordinate.
    pub fn to_row_major(&self) -> Vec<Vec<f64>> {
        self.matrices
            .iter()
            .map(|m| {
                let mut out = Vec::with_capacity(self.q * self.q);
                for i in 0..self.q {
                    for j in 0..self.q {
                        out.push(m[(i, j)]);
                    }
                }
                out
            })
            .collect()
    }
}

pub(crate) fn skew_defect(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] + m[(j, i)]).abs());
        }
    }
    worst
}

/// Outcome of [`validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub is_skew: Vec<bool>,
    pub effective_p: usize,
    pub is_regular: bool,
    pub messages: Vec<String>,
}

impl ValidationReport {
    pub fn all_skew(&self) -> bool {
        self.is_skew.iter().all(|&s| s)
    }
}

/// Checks skewness of each coordinate and computes the numerical rank of the
/// tuple's span.
///
/// The rank is the number of singular values of the `p × q(q−1)/2` matrix of
/// strictly-upper-triangular entries exceeding `rank_tol` times the largest
/// singular value.
pub fn validate(tuple: &StructureTuple, skew_tol: f64, rank_tol: f64) -> ValidationReport {
    let q = tuple.q();
    let p = tuple.p();
    let mut messages = Vec::new();

    let mut is_skew = Vec::with_capacity(p);
    for (k, m) in tuple.matrices().iter().enumerate() {
        let mut worst = (0.0_f64, 0, 0);
        for i in 0..q {
            for j in i..q {
                let d = (m[(i, j)] + m[(j, i)]).abs();
                if d > worst.0 {
                    worst = (d, i, j);
                }
            }
        }
        let ok = worst.0 <= skew_tol;
        if !ok {
            messages.push(format!(
                "matrix {k} is not skew-symmetric: |C[{i}][{j}] + C[{j}][{i}]| = {d:e} at entry ({i}, {j})",
                d = worst.0,
                i = worst.1,
                j = worst.2
            ));
        }
        is_skew.push(ok);
    }

    let effective_p = numerical_rank(tuple, rank_tol);
    let is_regular = effective_p == p;
    if !is_regular {
        messages.push(format!(
            "tuple is not regular: coordinates span a {effective_p}-dimensional subspace, p = {p}"
        ));
    }
    if p > q * (q.saturating_sub(1)) / 2 {
        messages.push(format!(
            "p = {p} exceeds dim so({q}) = {}; the coordinates cannot be independent",
            q * (q.saturating_sub(1)) / 2
        ));
    }

    ValidationReport {
        is_skew,
        effective_p,
        is_regular,
        messages,
    }
}

/// Validation at the default tolerances.
pub fn validate_default(tuple: &StructureTuple) -> ValidationReport {
    validate(tuple, DEFAULT_SKEW_TOL, DEFAULT_RANK_TOL)
}

fn numerical_rank(tuple: &StructureTuple, rank_tol: f64) -> usize {
    let q = tuple.q();
    let p = tuple.p();
    let cols = q * q.saturating_sub(1) / 2;
    if cols == 0 {
        return 0;
    }
    let mut flat = DMatrix::<f64>::zeros(p, cols);
    for (k, m) in tuple.matrices().iter().enumerate() {
        let mut c = 0;
        for i in 0..q {
            for j in (i + 1)..q {
                flat[(k, c)] = m[(i, j)];
                c += 1;
            }
        }
    }
    let sv = flat.singular_values();
    let largest = sv.iter().cloned().fold(0.0_f64, f64::max);
    if largest == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rank_tol * largest).count()
}

/// Lie bracket of `N_C` in the standard orthonormal basis `e_1, ..., e_{q+p}`.
pub fn bracket(tuple: &StructureTuple, u: &DVector<f64>, v: &DVector<f64>) -> Result<DVector<f64>> {
    let q = tuple.q();
    let n = tuple.dim();
    if u.len() != n || v.len() != n {
        return Err(Error::Structural(format!(
            "bracket arguments have lengths {} and {}, expected q + p = {n}",
            u.len(),
            v.len()
        )));
    }
    let uh = u.rows(0, q);
    let vh = v.rows(0, q);
    let mut out = DVector::zeros(n);
    for (k, m) in tuple.matrices().iter().enumerate() {
        out[q + k] = uh.dot(&(m * vh));
    }
    Ok(out)
}

/// Type `(p, q)` of the nilalgebra generated by the tuple: commutator
/// dimension and its codimension.
///
/// The commutator (span of the tuple) is used, never the possibly larger
/// center.
pub fn algebra_type(tuple: &StructureTuple) -> (usize, usize) {
    (validate_default(tuple).effective_p, tuple.q())
}

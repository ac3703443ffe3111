//! Dense complex linear algebra with explicit numerical contracts.
//!
//! Everything downstream (functional validation, Gram factorization,
//! representation building) routes through the handful of primitives here,
//! so the tolerance semantics are spelled out once:
//!
//! - `Tolerance.rel` gates *relative* eigenvalue decisions (PSD verdicts,
//!   numerical rank);
//! - `Tolerance.abs` gates *absolute* entrywise comparisons (Hermitian
//!   symmetry, unitarity residuals).
//!
//! The inner product is linear in the **first** argument:
//! `inner(x, y) = Σ_k x_k · conj(y_k)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

/// Numerical comparison thresholds. `rel` scales eigenvalue decisions,
/// `abs` is the floor for entrywise residuals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        // Double-precision eigensolvers land around 1e-13 for the matrix
        // sizes in scope; 1e-9 leaves headroom without masking real defects.
        Tolerance { rel: 1e-9, abs: 1e-9 }
    }
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64) -> Self {
        assert!(rel >= 0.0 && abs >= 0.0, "tolerances must be nonnegative");
        Tolerance { rel, abs }
    }

    /// Uniform tolerance: both thresholds set to `eps`.
    pub fn uniform(eps: f64) -> Self {
        Self::new(eps, eps)
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum LinalgError {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian: max |M_ij - conj(M_ji)| = {residual:.3e}")]
    NotHermitian { residual: f64 },
    #[error("matrix is not positive semi-definite: min eigenvalue = {min_eigenvalue:.6e}")]
    NotPsd { min_eigenvalue: f64 },
    #[error("dimension mismatch: left {left}, right {right}")]
    DimMismatch { left: usize, right: usize },
}

/// Column vector over ℂ.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    entries: Vec<Complex64>,
}

impl ComplexVector {
    pub fn new(entries: Vec<Complex64>) -> Self {
        ComplexVector { entries }
    }

    pub fn zeros(dim: usize) -> Self {
        ComplexVector { entries: vec![Complex64::ZERO; dim] }
    }

    /// Standard basis vector `e_k` in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index {k} out of range for dim {dim}");
        let mut v = Self::zeros(dim);
        v.entries[k] = Complex64::ONE;
        v
    }

    pub fn from_real(entries: &[f64]) -> Self {
        ComplexVector { entries: entries.iter().map(|&x| Complex64::new(x, 0.0)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, k: usize) -> Complex64 {
        self.entries[k]
    }

    pub fn set(&mut self, k: usize, value: Complex64) {
        self.entries[k] = value;
    }

    /// `⟨self, other⟩ = Σ_k self_k · conj(other_k)` — linear in the first
    /// argument. A dim-0 inner product is 0.
    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim(), other.dim(), "inner product dimension mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(x, y)| x * y.conj())
            .sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        ComplexVector {
            entries: self.entries.iter().zip(&other.entries).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        ComplexVector {
            entries: self.entries.iter().zip(&other.entries).map(|(x, y)| x - y).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        ComplexVector { entries: self.entries.iter().map(|x| x * c).collect() }
    }

    /// `self / ‖self‖`; panics on the zero vector.
    pub fn normalized(&self) -> Self {
        let n = self.norm();
        assert!(n > 0.0, "cannot normalize the zero vector");
        self.scale(Complex64::new(1.0 / n, 0.0))
    }

    /// Rank-1 matrix `|self⟩⟨other|`, i.e. `M_rs = self_r · conj(other_s)`.
    pub fn outer(&self, other: &Self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.dim(), other.dim());
        for r in 0..self.dim() {
            for s in 0..other.dim() {
                m.set(r, s, self.entries[r] * other.entries[s].conj());
            }
        }
        m
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Dense row-major matrix over ℂ.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    entries: Vec<Complex64>,
    rows: usize,
    cols: usize,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix { entries: vec![Complex64::ZERO; rows * cols], rows, cols }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::ONE);
        }
        m
    }

    /// Build from nested rows; every row must have the same length.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            entries.extend_from_slice(row);
        }
        ComplexMatrix { entries, rows: r, cols: c }
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Self {
        let lifted: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|row| row.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&lifted)
    }

    pub fn diagonal(diag: &[Complex64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
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

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Complex64) {
        debug_assert!(r < self.rows && c < self.cols);
        self.entries[r * self.cols + c] = value;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn row(&self, r: usize) -> ComplexVector {
        ComplexVector::new(self.entries[r * self.cols..(r + 1) * self.cols].to_vec())
    }

    pub fn col(&self, c: usize) -> ComplexVector {
        ComplexVector::new((0..self.rows).map(|r| self.get(r, c)).collect())
    }

    /// Conjugate transpose `M*`.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).conj());
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        ComplexMatrix {
            entries: self.entries.iter().zip(&other.entries).map(|(x, y)| x + y).collect(),
            rows: self.rows,
            cols: self.cols,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        ComplexMatrix {
            entries: self.entries.iter().zip(&other.entries).map(|(x, y)| x - y).collect(),
            rows: self.rows,
            cols: self.cols,
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        ComplexMatrix {
            entries: self.entries.iter().map(|x| x * c).collect(),
            rows: self.rows,
            cols: self.cols,
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == Complex64::ZERO {
                    continue;
                }
                for c in 0..other.cols {
                    let v = out.get(r, c) + a * other.get(k, c);
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &ComplexVector) -> ComplexVector {
        assert_eq!(self.cols, v.dim(), "matvec dimension mismatch");
        let mut out = ComplexVector::zeros(self.rows);
        for r in 0..self.rows {
            let mut acc = Complex64::ZERO;
            for c in 0..self.cols {
                acc += self.get(r, c) * v.get(c);
            }
            out.set(r, acc);
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    /// `max_ij |M_ij|`.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max_ij |M_ij - conj(M_ji)|`; 0 for exactly Hermitian matrices.
    pub fn hermitian_residual(&self) -> Result<f64, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let mut worst = 0.0f64;
        for r in 0..self.rows {
            for c in r..self.cols {
                let d = (self.get(r, c) - self.get(c, r).conj()).norm();
                worst = worst.max(d);
            }
        }
        Ok(worst)
    }

    /// Sum of all entries (the total mass `Σ_ij M_ij`).
    pub fn entry_sum(&self) -> Complex64 {
        self.entries.iter().sum()
    }

    fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_iterator(self.rows, self.cols, self.entries.iter().copied())
    }

    fn from_nalgebra(m: &DMatrix<Complex64>) -> Self {
        let mut out = Self::zeros(m.nrows(), m.ncols());
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                out.set(r, c, m[(r, c)]);
            }
        }
        out
    }
}

/// Eigendecomposition of a Hermitian matrix: `M = V · diag(λ) · V*` with
/// real `λ` sorted descending and the k-th column of `V` the k-th
/// eigenvector.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `V · diag(λ) · V*` — for residual checks against the input.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let mut out = ComplexMatrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                let mut acc = Complex64::ZERO;
                for (k, &lam) in self.eigenvalues.iter().enumerate() {
                    acc += self.eigenvectors.get(r, k)
                        * lam
                        * self.eigenvectors.get(c, k).conj();
                }
                out.set(r, c, acc);
            }
        }
        out
    }
}

/// Eigendecomposition for Hermitian input. Inputs with asymmetry at most
/// `tol.abs` are symmetrized to `(M + M*)/2` first; larger asymmetry is an
/// error — silently symmetrizing genuinely non-Hermitian data would mask
/// modeling bugs upstream.
pub fn hermitian_eigen(m: &ComplexMatrix, tol: Tolerance) -> Result<HermitianEigen, LinalgError> {
    let residual = m.hermitian_residual()?;
    if residual > tol.abs {
        return Err(LinalgError::NotHermitian { residual });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(HermitianEigen { eigenvalues: vec![], eigenvectors: ComplexMatrix::zeros(0, 0) });
    }
    let sym = m.add(&m.adjoint()).scale(Complex64::new(0.5, 0.0));
    let eig = sym.to_nalgebra().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for r in 0..n {
            vectors.set(r, dst, eig.eigenvectors[(r, src)]);
        }
    }
    Ok(HermitianEigen { eigenvalues, eigenvectors: vectors })
}

/// PSD verdict with the minimum eigenvalue as evidence.
#[derive(Debug, Clone, PartialEq)]
pub struct PsdVerdict {
    pub is_psd: bool,
    pub min_eigenvalue: f64,
}

/// `is_psd ⇔ λ_min ≥ -tol.rel · max(1, λ_max)`. The relative gate makes the
/// verdict scale-covariant: `psd_check(c·M)` agrees with `psd_check(M)` for
/// every `c > 0`.
pub fn psd_check(m: &ComplexMatrix, tol: Tolerance) -> Result<PsdVerdict, LinalgError> {
    Ok(psd_verdict_from_spectrum(&hermitian_eigen(m, tol)?.eigenvalues, tol))
}

/// The [`psd_check`] gate applied to an already-computed descending
/// spectrum — for callers that need both the verdict and the eigenvalues
/// without decomposing twice.
pub fn psd_verdict_from_spectrum(eigenvalues: &[f64], tol: Tolerance) -> PsdVerdict {
    let (Some(&max), Some(&min)) = (eigenvalues.first(), eigenvalues.last()) else {
        return PsdVerdict { is_psd: true, min_eigenvalue: 0.0 };
    };
    PsdVerdict { is_psd: min >= -tol.rel * max.max(1.0), min_eigenvalue: min }
}

/// Count of eigenvalues above `tol.rel · λ_max`. The zero matrix has rank 0;
/// the threshold is relative, so rank is scale-invariant.
pub fn numerical_rank(m: &ComplexMatrix, tol: Tolerance) -> Result<usize, LinalgError> {
    let eig = hermitian_eigen(m, tol)?;
    if eig.eigenvalues.is_empty() {
        return Ok(0);
    }
    let cutoff = tol.rel * eig.eigenvalues[0];
    Ok(eig.eigenvalues.iter().filter(|&&lam| lam > cutoff && lam > 0.0).count())
}

/// Spectral Gram factorization: vectors `e_1..e_n`, each of dimension
/// `m = numerical_rank(D)`, with `⟨e_i, e_j⟩ = D_ij`.
///
/// Spectral rather than pivoted-triangular because rank-deficient inputs
/// (rank-1 amplitude functionals, boundary q-measures) are first-class: the
/// quotient construction is exactly "drop null eigendirections". For the
/// zero matrix this returns `n` vectors of dimension 0, and dim-0 inner
/// products are 0 downstream.
pub fn gram_factorize(
    d: &ComplexMatrix,
    tol: Tolerance,
) -> Result<Vec<ComplexVector>, LinalgError> {
    let eig = hermitian_eigen(d, tol)?;
    let n = d.rows();
    if n == 0 {
        return Ok(vec![]);
    }
    let max = eig.eigenvalues[0];
    let min = *eig.eigenvalues.last().unwrap();
    if min < -tol.rel * max.max(1.0) {
        return Err(LinalgError::NotPsd { min_eigenvalue: min });
    }
    let cutoff = tol.rel * max;
    let kept: Vec<usize> = (0..n)
        .filter(|&k| eig.eigenvalues[k] > cutoff && eig.eigenvalues[k] > 0.0)
        .collect();
    let mut vectors = Vec::with_capacity(n);
    for i in 0..n {
        let mut e = ComplexVector::zeros(kept.len());
        for (slot, &k) in kept.iter().enumerate() {
            e.set(slot, eig.eigenvectors.get(i, k) * eig.eigenvalues[k].sqrt());
        }
        vectors.push(e);
    }
    Ok(vectors)
}

/// True iff `max |U*U - I| ≤ tol.abs`.
pub fn is_unitary(u: &ComplexMatrix, tol: Tolerance) -> Result<bool, LinalgError> {
    if !u.is_square() {
        return Err(LinalgError::NotSquare { rows: u.rows(), cols: u.cols() });
    }
    let residual = u.adjoint().matmul(u).sub(&ComplexMatrix::identity(u.rows())).max_abs();
    Ok(residual <= tol.abs)
}

/// Gram matrix `G_ij = ⟨v_i, v_j⟩` of a vector family.
pub fn gram_matrix(vectors: &[ComplexVector]) -> ComplexMatrix {
    let n = vectors.len();
    let mut g = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            g.set(i, j, vectors[i].inner(&vectors[j]));
        }
    }
    g
}

/// Solve `A·X = B` for square `A` via LU with partial pivoting.
/// Used by the intertwiner construction; not exposed as a general solver.
pub(crate) fn solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Option<ComplexMatrix> {
    assert!(a.is_square());
    assert_eq!(a.rows(), b.rows());
    let lu = a.to_nalgebra().lu();
    lu.solve(&b.to_nalgebra()).map(|x| ComplexMatrix::from_nalgebra(&x))
}

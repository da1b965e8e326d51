//! Dense complex matrices and the handful of factorizations the rest of the
//! crate needs.
//!
//! [`ComplexMatrix`] wraps an `nalgebra` matrix and guarantees every entry is
//! finite. Storage is column-major, so [`ComplexMatrix::vec`] is exactly the
//! column-stacking vectorization used for superoperators.

use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub const C0: Complex64 = Complex64::new(0.0, 0.0);
pub const C1: Complex64 = Complex64::new(1.0, 0.0);

/// Numeric tolerances passed explicitly into every decision procedure.
///
/// `eq_tol` is used for "these two numbers are equal" checks on values that
/// are exact in real arithmetic; `decision_tol` for boolean verdicts such as
/// unitarity, quasiability or the MUM relations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub eq_tol: f64,
    pub decision_tol: f64,
}

impl Tolerance {
    pub const DEFAULT_EQ: f64 = 1e-9;
    pub const DEFAULT_DECISION: f64 = 1e-8;

    pub fn new(eq_tol: f64, decision_tol: f64) -> Result<Self> {
        if !(eq_tol.is_finite() && decision_tol.is_finite()) || eq_tol < 0.0 || decision_tol < 0.0 {
            return Err(Error::invalid(format!(
                "tolerances must be finite and non-negative (eq {eq_tol}, decision {decision_tol})"
            )));
        }
        if eq_tol > decision_tol {
            return Err(Error::invalid(format!(
                "eq_tol {eq_tol} must not exceed decision_tol {decision_tol}"
            )));
        }
        Ok(Self { eq_tol, decision_tol })
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            eq_tol: Self::DEFAULT_EQ,
            decision_tol: Self::DEFAULT_DECISION,
        }
    }
}

/// Dense `rows × cols` complex matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    /// Wrap an nalgebra matrix, rejecting empty shapes and non-finite entries.
    pub fn from_dmatrix(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() == 0 || m.ncols() == 0 {
            return Err(Error::dim("matrix must have at least one row and one column"));
        }
        if let Some((idx, _)) = m
            .iter()
            .enumerate()
            .find(|(_, z)| !(z.re.is_finite() && z.im.is_finite()))
        {
            let (i, j) = (idx % m.nrows(), idx / m.nrows());
            return Err(Error::invalid(format!("entry ({i}, {j}) is not finite")));
        }
        Ok(Self(m))
    }

    /// Build from row-major rows; all rows must have the same length.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != ncols) {
            return Err(Error::dim(format!(
                "row {i} has {} entries, expected {ncols}",
                r.len()
            )));
        }
        Self::from_dmatrix(DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]))
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    /// Entries from a closure. The caller is responsible for finiteness;
    /// used internally where the closure is built from finite data.
    pub(crate) fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self(DMatrix::from_fn(rows, cols, f))
    }

    pub(crate) fn wrap(m: DMatrix<Complex64>) -> Self {
        debug_assert!(m.iter().all(|z| z.re.is_finite() && z.im.is_finite()));
        Self(m)
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn diagonal(values: &[Complex64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { values[i] } else { C0 })
    }

    /// Outer product `u v*` of two column vectors.
    pub fn outer(u: &DVector<Complex64>, v: &DVector<Complex64>) -> Self {
        Self(u * v.adjoint())
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<Complex64> {
        self.0
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(&self.0 * Complex64::new(s, 0.0))
    }

    pub fn scale_c(&self, s: Complex64) -> Self {
        Self(&self.0 * s)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        Self(self.0.kronecker(&other.0))
    }

    /// Contiguous column range `start..start+len` as a new matrix.
    pub fn column_block(&self, start: usize, len: usize) -> Self {
        Self(self.0.columns(start, len).into_owned())
    }

    /// Submatrix with rows `r0..r0+nr` and columns `c0..c0+nc`.
    pub fn submatrix(&self, r0: usize, nr: usize, c0: usize, nc: usize) -> Self {
        Self(self.0.view((r0, c0), (nr, nc)).into_owned())
    }

    pub fn column(&self, j: usize) -> DVector<Complex64> {
        self.0.column(j).into_owned()
    }

    /// Column-stacking vectorization: `vec(X)[i + j·rows] = X[i, j]`.
    pub fn vec(&self) -> DVector<Complex64> {
        DVector::from_column_slice(self.0.as_slice())
    }

    /// Inverse of [`ComplexMatrix::vec`] for a square `n × n` result.
    pub fn unvec(v: &DVector<Complex64>, n: usize) -> Result<Self> {
        if v.len() != n * n {
            return Err(Error::dim(format!("vector of length {} is not {n}²", v.len())));
        }
        Ok(Self(DMatrix::from_column_slice(n, n, v.as_slice())))
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.0.shape(), other.0.shape());
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Hermitian part `(A + A*)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self((&self.0 + self.0.adjoint()) * Complex64::new(0.5, 0.0))
    }

    /// Block-diagonal direct sum of square blocks.
    pub fn direct_sum(blocks: &[ComplexMatrix]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows()).sum();
        let mut out = DMatrix::zeros(n, n);
        let mut off = 0;
        for b in blocks {
            out.view_mut((off, off), (b.rows(), b.cols())).copy_from(&b.0);
            off += b.rows();
        }
        Self(out)
    }

    pub(crate) fn ensure_square(&self, what: &str) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows())
        } else {
            Err(Error::dim(format!(
                "{what} must be square, got {}x{}",
                self.rows(),
                self.cols()
            )))
        }
    }

    pub(crate) fn ensure_same_shape(&self, other: &Self, what: &str) -> Result<()> {
        if self.0.shape() == other.0.shape() {
            Ok(())
        } else {
            Err(Error::dim(format!(
                "{what}: shape {}x{} vs {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            )))
        }
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

/// `‖M M* − I‖_F ≤ decision_tol · √n`.
pub fn is_unitary(m: &ComplexMatrix, tol: &Tolerance) -> Result<bool> {
    let n = m.ensure_square("unitarity test input")?;
    Ok(unitarity_defect(m) <= tol.decision_tol * (n as f64).sqrt())
}

/// `‖M M* − I‖_F` for a square matrix.
pub fn unitarity_defect(m: &ComplexMatrix) -> f64 {
    let n = m.rows();
    let g = &m.0 * m.0.adjoint() - DMatrix::<Complex64>::identity(n, n);
    g.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Trace inner product `⟨A, B⟩ = Tr(A B*)`.
pub fn trace_inner_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Complex64> {
    a.ensure_same_shape(b, "trace inner product")?;
    Ok(inner_unchecked(a, b))
}

pub(crate) fn inner_unchecked(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    a.0.iter().zip(b.0.iter()).map(|(x, y)| x * y.conj()).sum()
}

/// `Σ |a_ij|²`.
pub fn frobenius_norm_sq(a: &ComplexMatrix) -> f64 {
    a.0.iter().map(|z| z.norm_sqr()).sum()
}

/// Eigen-decomposition of the Hermitian part: eigenvalues ascending, with
/// the matching unit eigenvectors as columns.
pub fn hermitian_eigen(a: &ComplexMatrix, tol: &Tolerance) -> Result<(Vec<f64>, ComplexMatrix)> {
    check_hermitian(a, tol)?;
    let eig = nalgebra::SymmetricEigen::new(a.hermitian_part().0);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let n = a.rows();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

/// Largest eigenvalue of the Hermitian part of `a`.
pub fn hermitian_eigen_max(a: &ComplexMatrix, tol: &Tolerance) -> Result<f64> {
    check_hermitian(a, tol)?;
    let values = a.hermitian_part().0.symmetric_eigenvalues();
    Ok(values.iter().copied().fold(f64::NEG_INFINITY, f64::max))
}

fn check_hermitian(a: &ComplexMatrix, tol: &Tolerance) -> Result<()> {
    a.ensure_square("Hermitian eigenproblem input")?;
    let skew = (&a.0 - a.0.adjoint()).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt() * 0.5;
    let scale = frobenius_norm_sq(a).sqrt().max(1.0);
    if skew > tol.decision_tol * scale {
        return Err(Error::domain(format!(
            "matrix is not Hermitian: ‖(A − A*)/2‖_F = {skew:.3e}"
        )));
    }
    Ok(())
}

/// Largest singular value (spectral norm).
pub fn largest_singular_value(a: &ComplexMatrix) -> f64 {
    a.0.singular_values().iter().copied().fold(0.0, f64::max)
}

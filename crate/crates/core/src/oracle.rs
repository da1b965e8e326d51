//! Reference computations built only from orthonormal bases.
//!
//! Nothing here touches the block-index or Γ machinery, so agreement with
//! [`crate::general::q_general`] is a genuine cross-check rather than a
//! restatement. Superoperators use the column-stacking convention
//! `vec(X)[i + j·n] = X[i, j]`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::{orthonormal_basis, AlgebraSpec};
use crate::error::{Error, Result};
use crate::matcore::{frobenius_norm_sq, inner_unchecked, largest_singular_value, ComplexMatrix, Tolerance, C0};
use crate::par::{self, Execution};

/// Largest `n` for which `n² × n²` superoperators are materialized.
pub const DENSE_LIMIT: usize = 32;

/// Matrix of a linear map on `M_n`, acting on `vec(X)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    n: usize,
    matrix: ComplexMatrix,
}

impl Superoperator {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.rows() != self.n || x.cols() != self.n {
            return Err(Error::dim(format!(
                "superoperator on M_{} applied to a {}x{} matrix",
                self.n,
                x.rows(),
                x.cols()
            )));
        }
        let v = self.matrix.as_dmatrix() * x.vec();
        ComplexMatrix::unvec(&v, self.n)
    }

    pub fn compose(&self, other: &Superoperator) -> Result<Superoperator> {
        if self.n != other.n {
            return Err(Error::dim(format!("superoperators on M_{} and M_{}", self.n, other.n)));
        }
        Ok(Superoperator {
            n: self.n,
            matrix: &self.matrix * &other.matrix,
        })
    }
}

fn check_dense(n: usize) -> Result<()> {
    if n > DENSE_LIMIT {
        return Err(Error::dim(format!(
            "dense superoperators are limited to n ≤ {DENSE_LIMIT}, got {n}"
        )));
    }
    Ok(())
}

fn projector_from_basis(n: usize, basis: &[ComplexMatrix]) -> Superoperator {
    let cols: Vec<Complex64> = basis.iter().flat_map(|b| b.as_dmatrix().iter().copied()).collect();
    let v = DMatrix::from_column_slice(n * n, basis.len(), &cols);
    Superoperator {
        n,
        matrix: ComplexMatrix::wrap(&v * v.adjoint()),
    }
}

/// `T_A = Σ_i vec(A_i) vec(A_i)*` over an orthonormal basis of `A`.
pub fn expectation_superoperator(a: &AlgebraSpec) -> Result<Superoperator> {
    check_dense(a.n())?;
    Ok(projector_from_basis(a.n(), &orthonormal_basis(a)))
}

/// Completely depolarizing channel `X ↦ Tr(X)/n · I`.
pub fn depolarizing_superoperator(n: usize) -> Result<Superoperator> {
    check_dense(n)?;
    Ok(projector_from_basis(n, &[ComplexMatrix::identity(n).scale(1.0 / (n as f64).sqrt())]))
}

/// `E_A(X) = Σ_i ⟨X, A_i⟩ A_i`.
pub fn apply_expectation(a: &AlgebraSpec, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    if x.rows() != a.n() || x.cols() != a.n() {
        return Err(Error::dim(format!(
            "conditional expectation on M_{} applied to a {}x{} matrix",
            a.n(),
            x.rows(),
            x.cols()
        )));
    }
    Ok(project(&orthonormal_basis(a), x))
}

pub(crate) fn project(basis: &[ComplexMatrix], x: &ComplexMatrix) -> ComplexMatrix {
    let mut acc = ComplexMatrix::zeros(x.rows(), x.cols());
    for b in basis {
        acc = &acc + &b.scale_c(inner_unchecked(x, b));
    }
    acc
}

fn check_same_n(a: &AlgebraSpec, b: &AlgebraSpec) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::dim(format!("algebras act on M_{} and M_{}", a.n(), b.n())));
    }
    Ok(())
}

/// `Q(A, B) = Tr(T_A T_B)`.
pub fn q_oracle(a: &AlgebraSpec, b: &AlgebraSpec) -> Result<f64> {
    q_oracle_with(a, b, Execution::default())
}

/// `Tr(T_A T_B)` from dense superoperators when `n ≤ DENSE_LIMIT`, otherwise
/// the equivalent basis form `Σ_{i,j} |Tr(A_i B_j)|²`. Terms are produced in
/// parallel and summed in a fixed order.
pub fn q_oracle_with(a: &AlgebraSpec, b: &AlgebraSpec, exec: Execution) -> Result<f64> {
    check_same_n(a, b)?;
    let n = a.n();
    if n <= DENSE_LIMIT {
        let (ta, tb) = (expectation_superoperator(a)?, expectation_superoperator(b)?);
        let (ma, mb) = (ta.matrix.as_dmatrix(), tb.matrix.as_dmatrix());
        let rows = par::map_indexed(exec, n * n, |i| {
            let mut s = C0;
            for j in 0..n * n {
                s += ma[(i, j)] * mb[(j, i)];
            }
            s.re
        });
        return Ok(par::ordered_sum(&rows));
    }
    let (ba, bb) = (orthonormal_basis(a), orthonormal_basis(b));
    let rows = par::map_slice(exec, &ba, |ai| {
        let terms: Vec<f64> = bb.iter().map(|bj| (ai * bj).trace().norm_sqr()).collect();
        par::ordered_sum(&terms)
    });
    Ok(par::ordered_sum(&rows))
}

/// Result of testing `E_A(B) = Tr(B)/n · I` on both bases.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleCheck {
    pub quasiorthogonal: bool,
    /// Largest `‖E_A(B_j) − Tr(B_j)/n I‖_F` (and symmetrically).
    pub max_deviation: f64,
    pub q: f64,
    /// Whether the verdict agrees with `|q − 1| ≤ decision_tol`.
    pub consistent: bool,
}

fn max_deviation(onto: &[ComplexMatrix], from: &[ComplexMatrix], n: usize) -> f64 {
    let id = ComplexMatrix::identity(n);
    from.iter()
        .map(|x| {
            let d = &project(onto, x) - &id.scale_c(x.trace() / n as f64);
            frobenius_norm_sq(&d).sqrt()
        })
        .fold(0.0, f64::max)
}

pub fn is_quasiorthogonal_oracle(a: &AlgebraSpec, b: &AlgebraSpec, tol: &Tolerance) -> Result<OracleCheck> {
    check_same_n(a, b)?;
    let n = a.n();
    let (ba, bb) = (orthonormal_basis(a), orthonormal_basis(b));
    let dev = max_deviation(&ba, &bb, n).max(max_deviation(&bb, &ba, n));
    let q = q_oracle(a, b)?;
    let quasiorthogonal = dev <= tol.decision_tol;
    Ok(OracleCheck {
        quasiorthogonal,
        max_deviation: dev,
        q,
        consistent: quasiorthogonal == ((q - 1.0).abs() <= tol.decision_tol),
    })
}

/// `‖(E_A − D_n) ∘ E_B‖₂`, the largest singular value of `(T_A − T_D) T_B`.
pub fn privacy_norm(a: &AlgebraSpec, b: &AlgebraSpec) -> Result<f64> {
    check_same_n(a, b)?;
    let (ta, tb) = (expectation_superoperator(a)?, expectation_superoperator(b)?);
    let td = depolarizing_superoperator(a.n())?;
    let m = &(&ta.matrix - &td.matrix) * &tb.matrix;
    Ok(largest_singular_value(&m))
}

/// `√(ε(2+ε)(d−1))`.
pub fn privacy_bound(epsilon: f64, d: usize) -> Result<f64> {
    if !(epsilon >= 0.0) || !epsilon.is_finite() {
        return Err(Error::domain(format!("epsilon must be finite and non-negative, got {epsilon}")));
    }
    if d == 0 {
        return Err(Error::invalid("outcome count d must be positive"));
    }
    Ok((epsilon * (2.0 + epsilon) * (d - 1) as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Block;
    use crate::latin::fourier_matrix;
    use crate::matcore::hermitian_eigen;
    use crate::random;
    use proptest::prelude::*;

    fn fourier_masa(n: usize) -> AlgebraSpec {
        AlgebraSpec::new(fourier_matrix(n), vec![Block::new(1, 1); n], &Tolerance::default()).unwrap()
    }

    #[test]
    fn superoperator_examples() {
        let n = 3;
        let t = expectation_superoperator(&AlgebraSpec::scalars(n)).unwrap();
        let d = depolarizing_superoperator(n).unwrap();
        assert!(t.matrix().max_abs_diff(d.matrix()) < 1e-15);

        let full = expectation_superoperator(&AlgebraSpec::full(n)).unwrap();
        assert!(full.matrix().max_abs_diff(&ComplexMatrix::identity(n * n)) < 1e-15);

        let mut r = random::rng(1);
        let x = random::complex_gaussian(n, n, &mut r);
        let e = expectation_superoperator(&AlgebraSpec::diagonal(n)).unwrap().apply(&x).unwrap();
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { x.get(i, j) } else { C0 };
                assert!((e.get(i, j) - want).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn apply_expectation_examples() {
        let mut r = random::rng(2);
        let x = random::complex_gaussian(4, 4, &mut r);
        let e = apply_expectation(&AlgebraSpec::scalars(4), &x).unwrap();
        assert!(e.max_abs_diff(&ComplexMatrix::identity(4).scale_c(x.trace() / 4.0)) < 1e-14);
        assert!(apply_expectation(&AlgebraSpec::scalars(3), &x).is_err());
    }

    #[test]
    fn q_oracle_examples() {
        for n in 1..=6 {
            let diag = AlgebraSpec::diagonal(n);
            assert!((q_oracle(&diag, &diag).unwrap() - n as f64).abs() < 1e-12);
            assert!((q_oracle(&diag, &fourier_masa(n)).unwrap() - 1.0).abs() < 1e-12);
            let mut r = random::rng(n as u64);
            let b = random::algebra_spec(n, false, &mut r);
            assert!((q_oracle(&AlgebraSpec::scalars(n), &b).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn basis_form_beyond_dense_limit() {
        let n = DENSE_LIMIT + 1;
        let a = AlgebraSpec::diagonal(n);
        assert!((q_oracle(&a, &a).unwrap() - n as f64).abs() < 1e-9);
        assert!(expectation_superoperator(&a).is_err());
    }

    #[test]
    fn oracle_verdicts() {
        let tol = Tolerance::default();
        let c = is_quasiorthogonal_oracle(&AlgebraSpec::diagonal(4), &fourier_masa(4), &tol).unwrap();
        assert!(c.quasiorthogonal && c.consistent && c.max_deviation < 1e-12);
        let d2 = AlgebraSpec::diagonal(2);
        let c = is_quasiorthogonal_oracle(&d2, &d2, &tol).unwrap();
        assert!(!c.quasiorthogonal && c.consistent);
    }

    #[test]
    fn privacy_examples() {
        for n in 2..=5 {
            let diag = AlgebraSpec::diagonal(n);
            assert!(privacy_norm(&diag, &fourier_masa(n)).unwrap() < 1e-9);
            assert!((privacy_norm(&diag, &diag).unwrap() - 1.0).abs() < 1e-9);
            let mut r = random::rng(n as u64);
            let a = random::algebra_spec(n, false, &mut r);
            assert!(privacy_norm(&a, &AlgebraSpec::scalars(n)).unwrap() < 1e-9);
        }
        assert_eq!(privacy_bound(0.0, 7).unwrap(), 0.0);
        assert_eq!(privacy_bound(0.4, 1).unwrap(), 0.0);
        assert!((privacy_bound(1.0, 2).unwrap() - 3f64.sqrt()).abs() < 1e-15);
        assert!(matches!(privacy_bound(-0.1, 2), Err(Error::Domain(_))));
        assert!(matches!(privacy_bound(f64::NAN, 2), Err(Error::Domain(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn superoperator_is_hermitian_idempotent_with_trace_dim(seed in any::<u64>(), n in 1usize..=5) {
            let a = random::algebra_spec(n, false, &mut random::rng(seed));
            let t = expectation_superoperator(&a).unwrap();
            let m = t.matrix();
            let tol = 1e-9 * (n * n) as f64;
            prop_assert!(m.max_abs_diff(&m.adjoint()) < tol);
            prop_assert!(m.max_abs_diff(&(m * m)) < tol);
            prop_assert!((m.trace().re - a.dim() as f64).abs() < 1e-9);
        }

        #[test]
        fn expectation_axioms(seed in any::<u64>(), n in 1usize..=5) {
            let tol = Tolerance::default();
            let mut r = random::rng(seed);
            let a = random::algebra_spec(n, false, &mut r);
            let basis = orthonormal_basis(&a);
            let x = random::complex_gaussian(n, n, &mut r);
            let e = apply_expectation(&a, &x).unwrap();
            prop_assert!((e.trace() - x.trace()).norm() < 1e-9);
            let a1 = &basis[0];
            let a2 = &basis[basis.len() - 1];
            let lhs = apply_expectation(&a, &(&(a1 * &x) * a2)).unwrap();
            let rhs = &(a1 * &e) * a2;
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-9);
            prop_assert!(apply_expectation(&a, a1).unwrap().max_abs_diff(a1) < 1e-9);
            let p = random::psd(n, &mut r);
            let (vals, _) = hermitian_eigen(&apply_expectation(&a, &p).unwrap(), &tol).unwrap();
            prop_assert!(vals[0] >= -1e-9);
        }

        #[test]
        fn privacy_zero_iff_quasiorthogonal(seed in any::<u64>(), n in 2usize..=4) {
            let tol = Tolerance::default();
            let mut r = random::rng(seed);
            let a = if seed % 3 == 0 { AlgebraSpec::diagonal(n) } else { random::algebra_spec(n, false, &mut r) };
            let b = if seed % 3 == 0 { fourier_masa(n) } else { random::algebra_spec(n, false, &mut r) };
            let c = is_quasiorthogonal_oracle(&a, &b, &tol).unwrap();
            prop_assert!(c.consistent);
            prop_assert_eq!(c.quasiorthogonal, privacy_norm(&a, &b).unwrap() <= 1e-8);
        }
    }
}

//! Commutative algebras `U (⊕ ℂ I_{m_i}) U*` and `V (⊕ ℂ I_{n_j}) V*`.
//!
//! The measure of orthogonality reduces to the block-index matrix
//! `X = |U*V|²` (entrywise), summed over the blocks cut out by the row
//! partition `r = (m_i)` and column partition `c = (n_j)`:
//!
//! ```text
//! y_ij = (Σ_{block (i,j)} x) / √(m_i n_j),      Q(A, B) = ‖Y‖_F²
//! ```
//!
//! The algebras are quasiorthogonal exactly when every block sums to
//! `m_i n_j / n` ("quasiable"), equivalently `Q = 1`.

use nalgebra::DMatrix;

use crate::algebra::{induced_partition, AlgebraSpec, Partition};
use crate::error::{Error, Result};
use crate::matcore::{is_unitary, ComplexMatrix, Tolerance};
use crate::par::{self, Execution};

/// Largest order accepted by [`quasiable_scan`]; the scan visits `4^{n-1}`
/// partition pairs.
pub const MAX_SCAN_ORDER: usize = 10;

/// Dense real matrix used for block-index and doubly stochastic inputs.
pub type RealMatrix = DMatrix<f64>;

/// Square non-negative matrix with unit row and column sums.
#[derive(Debug, Clone, PartialEq)]
pub struct DoublyStochasticMatrix {
    entries: DMatrix<f64>,
}

impl DoublyStochasticMatrix {
    pub fn new(entries: DMatrix<f64>, tol: &Tolerance) -> Result<Self> {
        let n = entries.nrows();
        if n == 0 || entries.ncols() != n {
            return Err(Error::dim(format!(
                "doubly stochastic matrix must be square, got {}x{}",
                n,
                entries.ncols()
            )));
        }
        let eps = tol.eq_tol;
        for i in 0..n {
            for j in 0..n {
                let x = entries[(i, j)];
                if !x.is_finite() || x < -eps || x > 1.0 + eps {
                    return Err(Error::domain(format!("entry ({i}, {j}) = {x} is outside [0, 1]")));
                }
            }
        }
        for i in 0..n {
            let row: f64 = entries.row(i).sum();
            if (row - 1.0).abs() > eps {
                return Err(Error::domain(format!("row {i} sums to {row}, not 1")));
            }
            let col: f64 = entries.column(i).sum();
            if (col - 1.0).abs() > eps {
                return Err(Error::domain(format!("column {i} sums to {col}, not 1")));
            }
        }
        Ok(Self { entries })
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }
}

/// `Y(X; r, c)` together with the partitions that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockSumMatrix {
    entries: DMatrix<f64>,
    r: Partition,
    c: Partition,
}

impl BlockSumMatrix {
    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn row_partition(&self) -> &Partition {
        &self.r
    }

    pub fn col_partition(&self) -> &Partition {
        &self.c
    }

    pub fn frobenius_norm_sq(&self) -> f64 {
        self.entries.iter().map(|y| y * y).sum()
    }

    /// `Σ_ij y_ij √(m_i n_j)`, which is always `n` for a doubly stochastic `X`.
    pub fn weighted_mass(&self) -> f64 {
        let mut s = 0.0;
        for (i, &m) in self.r.parts().iter().enumerate() {
            for (j, &k) in self.c.parts().iter().enumerate() {
                s += self.entries[(i, j)] * ((m * k) as f64).sqrt();
            }
        }
        s
    }
}

/// `X(U, V) = (U*V) ∘ conj(U*V)`.
pub fn block_index_matrix(u: &ComplexMatrix, v: &ComplexMatrix, tol: &Tolerance) -> Result<DoublyStochasticMatrix> {
    u.ensure_square("U")?;
    u.ensure_same_shape(v, "block-index matrix")?;
    if !is_unitary(u, tol)? || !is_unitary(v, tol)? {
        return Err(Error::domain("block-index matrix needs unitary U and V"));
    }
    Ok(block_index_unchecked(u, v))
}

pub(crate) fn block_index_unchecked(u: &ComplexMatrix, v: &ComplexMatrix) -> DoublyStochasticMatrix {
    let w = &u.adjoint() * v;
    let n = w.rows();
    DoublyStochasticMatrix {
        entries: DMatrix::from_fn(n, n, |i, j| w.get(i, j).norm_sqr()),
    }
}

fn check_partitions(n: usize, r: &Partition, c: &Partition) -> Result<()> {
    if r.n() != n || c.n() != n {
        return Err(Error::dim(format!(
            "partitions {r} and {c} must both sum to {n}"
        )));
    }
    Ok(())
}

/// Raw block sums of `x` over the blocks of `r × c`.
fn block_sums(x: &DMatrix<f64>, r: &Partition, c: &Partition) -> DMatrix<f64> {
    let rr = r.ranges();
    let cr = c.ranges();
    DMatrix::from_fn(rr.len(), cr.len(), |i, j| {
        let mut s = 0.0;
        for a in rr[i].clone() {
            for b in cr[j].clone() {
                s += x[(a, b)];
            }
        }
        s
    })
}

/// `Y(X; r, c)`: block sums scaled by `1/√(m_i n_j)`.
pub fn block_sum_matrix(x: &DoublyStochasticMatrix, r: &Partition, c: &Partition) -> Result<BlockSumMatrix> {
    check_partitions(x.n(), r, c)?;
    Ok(block_sum_unchecked(x, r, c))
}

fn block_sum_unchecked(x: &DoublyStochasticMatrix, r: &Partition, c: &Partition) -> BlockSumMatrix {
    let mut y = block_sums(&x.entries, r, c);
    for (i, &m) in r.parts().iter().enumerate() {
        for (j, &k) in c.parts().iter().enumerate() {
            y[(i, j)] /= ((m * k) as f64).sqrt();
        }
    }
    BlockSumMatrix {
        entries: y,
        r: r.clone(),
        c: c.clone(),
    }
}

/// `‖Y(X(U,V); r, c)‖_F²`; the shared first term of both Q formulas.
pub(crate) fn y_norm_sq(u: &ComplexMatrix, v: &ComplexMatrix, r: &Partition, c: &Partition) -> f64 {
    let x = block_index_unchecked(u, v);
    block_sum_unchecked(&x, r, c).frobenius_norm_sq()
}

/// `Q(A, B) = ‖Y(X; r, c)‖_F²` for two commutative algebras.
pub fn q_commutative(a: &AlgebraSpec, b: &AlgebraSpec, _tol: &Tolerance) -> Result<f64> {
    if a.n() != b.n() {
        return Err(Error::dim(format!("algebras act on M_{} and M_{}", a.n(), b.n())));
    }
    if !a.is_commutative() || !b.is_commutative() {
        return Err(Error::domain(
            "q_commutative needs commutative algebras (all a_k = 1); use q_general",
        ));
    }
    Ok(y_norm_sq(
        a.unitary(),
        b.unitary(),
        &induced_partition(a),
        &induced_partition(b),
    ))
}

/// A block whose sum misses `m_i n_j / n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuasiableViolation {
    pub row_block: usize,
    pub col_block: usize,
    pub block_sum: f64,
    pub target: f64,
}

/// First block (row-major) whose `y_ij` differs from `√(m_i n_j)/n` by more
/// than `decision_tol`.
pub fn quasiable_violation(
    x: &DoublyStochasticMatrix,
    r: &Partition,
    c: &Partition,
    tol: &Tolerance,
) -> Result<Option<QuasiableViolation>> {
    check_partitions(x.n(), r, c)?;
    let y = block_sum_unchecked(x, r, c);
    Ok(first_violation(&y, x.n(), tol))
}

fn first_violation(y: &BlockSumMatrix, n: usize, tol: &Tolerance) -> Option<QuasiableViolation> {
    let nf = n as f64;
    for (i, &m) in y.r.parts().iter().enumerate() {
        for (j, &k) in y.c.parts().iter().enumerate() {
            let w = ((m * k) as f64).sqrt();
            let target_y = w / nf;
            if (y.entries[(i, j)] - target_y).abs() > tol.decision_tol {
                return Some(QuasiableViolation {
                    row_block: i,
                    col_block: j,
                    block_sum: y.entries[(i, j)] * w,
                    target: (m * k) as f64 / nf,
                });
            }
        }
    }
    None
}

pub fn is_quasiable(x: &DoublyStochasticMatrix, r: &Partition, c: &Partition, tol: &Tolerance) -> Result<bool> {
    Ok(quasiable_violation(x, r, c, tol)?.is_none())
}

/// Every `(r, c)` pair of compositions of `n` for which `x` is quasiable,
/// in lexicographic (r, c) mask order.
pub fn quasiable_scan(x: &DoublyStochasticMatrix, tol: &Tolerance, exec: Execution) -> Result<Vec<(Partition, Partition)>> {
    let n = x.n();
    if n > MAX_SCAN_ORDER {
        return Err(Error::dim(format!(
            "partition scan limited to n ≤ {MAX_SCAN_ORDER}, got {n}"
        )));
    }
    let comps = Partition::compositions(n);
    let total = comps.len() * comps.len();
    let hits = par::map_indexed(exec, total, |idx| {
        let (r, c) = (&comps[idx / comps.len()], &comps[idx % comps.len()]);
        first_violation(&block_sum_unchecked(x, r, c), n, tol).is_none()
    });
    Ok(hits
        .iter()
        .enumerate()
        .filter(|(_, &h)| h)
        .map(|(idx, _)| (comps[idx / comps.len()].clone(), comps[idx % comps.len()].clone()))
        .collect())
}

/// `|h_ij| = 1` for all entries and `‖HH* − nI‖_F ≤ decision_tol · n`.
pub fn is_complex_hadamard(h: &ComplexMatrix, tol: &Tolerance) -> bool {
    if !h.is_square() {
        return false;
    }
    let n = h.rows();
    let unimodular = h.as_dmatrix().iter().all(|z| (z.norm() - 1.0).abs() <= tol.decision_tol);
    if !unimodular {
        return false;
    }
    let g = &(h * &h.adjoint()) - &ComplexMatrix::identity(n).scale(n as f64);
    crate::matcore::frobenius_norm_sq(&g).sqrt() <= tol.decision_tol * n as f64
}

/// `Δ_n` and `U Δ_n U*` are quasiorthogonal iff `√n U` is complex Hadamard.
pub fn masa_quasiorthogonal(u: &ComplexMatrix, tol: &Tolerance) -> Result<bool> {
    let n = u.ensure_square("U")?;
    if !is_unitary(u, tol)? {
        return Err(Error::domain("masa_quasiorthogonal needs a unitary matrix"));
    }
    Ok(is_complex_hadamard(&u.scale((n as f64).sqrt()), tol))
}

/// Verdict of the 3×3 test for one column pair `(j, j')`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnPairVerdict {
    pub columns: (usize, usize),
    /// Rows `l` where `√(a_lj a_lj') > Σ_{i≠l} √(a_ij a_ij')`.
    pub violated_rows: Vec<usize>,
}

impl ColumnPairVerdict {
    pub fn holds(&self) -> bool {
        self.violated_rows.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnistochasticVerdict {
    pub unistochastic: bool,
    pub pairs: Vec<ColumnPairVerdict>,
}

impl UnistochasticVerdict {
    /// First `(column pair, row)` violating the inequality, 0-based.
    pub fn first_violation(&self) -> Option<((usize, usize), usize)> {
        self.pairs
            .iter()
            .find_map(|p| p.violated_rows.first().map(|&l| (p.columns, l)))
    }
}

/// Unistochasticity of a 3×3 doubly stochastic matrix.
///
/// The matrix is unistochastic iff some column pair satisfies the
/// square-root triangle inequality in every row; in that case every pair
/// does. The per-pair table is returned either way.
pub fn is_unistochastic_3x3(x: &DoublyStochasticMatrix, tol: &Tolerance) -> Result<UnistochasticVerdict> {
    if x.n() != 3 {
        return Err(Error::dim(format!("unistochastic test is 3x3 only, got {}x{}", x.n(), x.n())));
    }
    let s = |i: usize, j: usize, k: usize| (x.get(i, j).max(0.0) * x.get(i, k).max(0.0)).sqrt();
    let pairs: Vec<ColumnPairVerdict> = [(0, 1), (0, 2), (1, 2)]
        .into_iter()
        .map(|(j, k)| {
            let violated_rows = (0..3)
                .filter(|&l| {
                    let rhs: f64 = (0..3).filter(|&i| i != l).map(|i| s(i, j, k)).sum();
                    s(l, j, k) > rhs + tol.decision_tol
                })
                .collect();
            ColumnPairVerdict {
                columns: (j, k),
                violated_rows,
            }
        })
        .collect();
    Ok(UnistochasticVerdict {
        unistochastic: pairs.iter().any(ColumnPairVerdict::holds),
        pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Block;
    use crate::latin::fourier_matrix;
    use crate::{fixtures, random};
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn part(p: &[usize]) -> Partition {
        Partition::new(p.to_vec()).unwrap()
    }

    #[test]
    fn block_index_examples() {
        let tol = Tolerance::default();
        let v = fixtures::cyclic_shift3();
        let x = block_index_matrix(&ComplexMatrix::identity(3), &v, &tol).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(x.get(i, j), v.get(i, j).re);
            }
        }
        let mut r = random::rng(4);
        let u = random::haar_unitary(5, &mut r);
        let x = block_index_matrix(&u, &u, &tol).unwrap();
        assert!((x.entries() - DMatrix::identity(5, 5)).abs().max() < 1e-12);

        let f = fourier_matrix(6);
        let x = block_index_matrix(&ComplexMatrix::identity(6), &f, &tol).unwrap();
        assert!(x.entries().iter().all(|&e| (e - 1.0 / 6.0).abs() < 1e-14));

        let shear = ComplexMatrix::from_real_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(
            block_index_matrix(&shear, &ComplexMatrix::identity(2), &tol),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn y_of_permutation_example() {
        let tol = Tolerance::default();
        let x = block_index_matrix(&ComplexMatrix::identity(3), &fixtures::cyclic_shift3(), &tol).unwrap();
        let y = block_sum_matrix(&x, &part(&[2, 1]), &part(&[2, 1])).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let expected = DMatrix::from_row_slice(2, 2, &[0.5, s, s, 0.0]);
        assert!((y.entries() - expected).abs().max() < 1e-12);
        assert!((y.frobenius_norm_sq() - 1.25).abs() < 1e-12);
        assert!((y.weighted_mass() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn y_for_whole_and_flat() {
        let tol = Tolerance::default();
        let mut r = random::rng(8);
        let u = random::haar_unitary(5, &mut r);
        let x = block_index_matrix(&ComplexMatrix::identity(5), &u, &tol).unwrap();
        let y = block_sum_matrix(&x, &Partition::whole(5), &Partition::whole(5)).unwrap();
        assert!((y.entries()[(0, 0)] - 1.0).abs() < 1e-12);

        let flat = DoublyStochasticMatrix::new(DMatrix::from_element(5, 5, 0.2), &tol).unwrap();
        let (rp, cp) = (part(&[2, 3]), part(&[1, 1, 3]));
        let y = block_sum_matrix(&flat, &rp, &cp).unwrap();
        for (i, &m) in rp.parts().iter().enumerate() {
            for (j, &k) in cp.parts().iter().enumerate() {
                assert!((y.entries()[(i, j)] - ((m * k) as f64).sqrt() / 5.0).abs() < 1e-14);
            }
        }
        assert!(matches!(
            block_sum_matrix(&flat, &part(&[2, 2]), &cp),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn two_by_two_closed_form() {
        let tol = Tolerance::default();
        for step in 0..=12 {
            let theta = step as f64 * std::f64::consts::FRAC_PI_2 / 12.0;
            let w = fixtures::su2(
                Complex64::from_polar(theta.cos(), 0.3),
                Complex64::from_polar(theta.sin(), -1.1),
                0.4,
            );
            let a = AlgebraSpec::diagonal(2);
            let b = AlgebraSpec::new(w, vec![Block::new(1, 1); 2], &tol).unwrap();
            let q = q_commutative(&a, &b, &tol).unwrap();
            let expected = 2.0 * (theta.cos().powi(4) + theta.sin().powi(4));
            assert!((q - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn same_unitary_gives_number_of_blocks() {
        let tol = Tolerance::default();
        let mut r = random::rng(12);
        let u = random::haar_unitary(6, &mut r);
        let p = part(&[1, 3, 2]);
        let a = AlgebraSpec::commutative(u.clone(), &p, &tol).unwrap();
        assert!((q_commutative(&a, &a, &tol).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn hadamard_related_is_one_for_any_partitions() {
        let tol = Tolerance::default();
        let f = fourier_matrix(6);
        for (rp, cp) in [(part(&[1, 5]), part(&[2, 2, 2])), (part(&[3, 3]), part(&[6]))] {
            let a = AlgebraSpec::commutative(ComplexMatrix::identity(6), &rp, &tol).unwrap();
            let b = AlgebraSpec::commutative(f.clone(), &cp, &tol).unwrap();
            assert!((q_commutative(&a, &b, &tol).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn q_commutative_rejects_noncommutative() {
        let tol = Tolerance::default();
        assert!(matches!(
            q_commutative(&AlgebraSpec::full(2), &AlgebraSpec::diagonal(2), &tol),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            q_commutative(&AlgebraSpec::diagonal(3), &AlgebraSpec::diagonal(2), &tol),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn quasiable_examples() {
        let tol = Tolerance::default();
        let x = DoublyStochasticMatrix::new(fixtures::quasiable_not_unistochastic(), &tol).unwrap();
        assert!(!is_quasiable(&x, &Partition::ones(3), &Partition::ones(3), &tol).unwrap());
        assert!(is_quasiable(&x, &part(&[2, 1]), &part(&[2, 1]), &tol).unwrap());
        let v = quasiable_violation(&x, &Partition::ones(3), &Partition::ones(3), &tol).unwrap().unwrap();
        // x_00 = 1/3 already matches; x_01 = 2/3 is the first miss.
        assert_eq!((v.row_block, v.col_block), (0, 1));
        assert!((v.block_sum - 2.0 / 3.0).abs() < 1e-15);
        assert!((v.target - 1.0 / 3.0).abs() < 1e-15);

        let mut r = random::rng(13);
        for _ in 0..10 {
            let u = random::haar_unitary(4, &mut r);
            let x = block_index_matrix(&ComplexMatrix::identity(4), &u, &tol).unwrap();
            let c = random::partition(4, &mut r);
            assert!(is_quasiable(&x, &Partition::whole(4), &c, &tol).unwrap());
            assert!(is_quasiable(&x, &c, &Partition::whole(4), &tol).unwrap());
        }
    }

    #[test]
    fn quasiable_scan_finds_the_two_one_pair() {
        let tol = Tolerance::default();
        let x = DoublyStochasticMatrix::new(fixtures::quasiable_not_unistochastic(), &tol).unwrap();
        let hits = quasiable_scan(&x, &tol, Execution::default()).unwrap();
        assert!(hits.contains(&(part(&[2, 1]), part(&[2, 1]))));
        assert!(!hits.contains(&(Partition::ones(3), Partition::ones(3))));
        // (3) on either side is always quasiable: 4 + 4 - 1 pairs.
        let trivial = hits.iter().filter(|(r, c)| r.len() == 1 || c.len() == 1).count();
        assert_eq!(trivial, 7);
        assert_eq!(hits, quasiable_scan(&x, &tol, Execution::Sequential).unwrap());
    }

    #[test]
    fn hadamard_examples() {
        let tol = Tolerance::default();
        assert!(is_complex_hadamard(&fixtures::sylvester(0), &tol));
        for n in 1..=9 {
            assert!(is_complex_hadamard(&fourier_matrix(n).scale((n as f64).sqrt()), &tol));
        }
        assert!(!is_complex_hadamard(&ComplexMatrix::identity(2), &tol));
        assert!(!is_complex_hadamard(&ComplexMatrix::zeros(2, 3), &tol));
        // unimodular but not orthogonal
        let ones = ComplexMatrix::from_real_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert!(!is_complex_hadamard(&ones, &tol));
    }

    #[test]
    fn masa_quasiorthogonal_examples() {
        let tol = Tolerance::default();
        assert!(masa_quasiorthogonal(&fixtures::sylvester(0).scale(std::f64::consts::FRAC_1_SQRT_2), &tol).unwrap());
        assert!(!masa_quasiorthogonal(&fixtures::cyclic_shift3(), &tol).unwrap());
        assert!(masa_quasiorthogonal(&fourier_matrix(7), &tol).unwrap());
        let shear = ComplexMatrix::from_real_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        assert!(masa_quasiorthogonal(&shear, &tol).is_err());
    }

    #[test]
    fn unistochastic_examples() {
        let tol = Tolerance::default();
        let x = DoublyStochasticMatrix::new(fixtures::quasiable_not_unistochastic(), &tol).unwrap();
        let v = is_unistochastic_3x3(&x, &tol).unwrap();
        assert!(!v.unistochastic);
        assert_eq!(v.first_violation(), Some(((0, 1), 0)));
        assert!(v.pairs.iter().all(|p| !p.holds()));

        let flat = DoublyStochasticMatrix::new(DMatrix::from_element(3, 3, 1.0 / 3.0), &tol).unwrap();
        assert!(is_unistochastic_3x3(&flat, &tol).unwrap().unistochastic);
        let id = DoublyStochasticMatrix::new(DMatrix::identity(3, 3), &tol).unwrap();
        let v = is_unistochastic_3x3(&id, &tol).unwrap();
        assert!(v.unistochastic && v.first_violation().is_none());

        let four = DoublyStochasticMatrix::new(DMatrix::identity(4, 4), &tol).unwrap();
        assert!(matches!(is_unistochastic_3x3(&four, &tol), Err(Error::Dimension(_))));
    }

    #[test]
    fn doubly_stochastic_validation() {
        let tol = Tolerance::default();
        assert!(DoublyStochasticMatrix::new(DMatrix::from_row_slice(2, 2, &[0.5, 0.5, 0.6, 0.4]), &tol).is_err());
        assert!(DoublyStochasticMatrix::new(DMatrix::from_row_slice(2, 2, &[1.5, -0.5, -0.5, 1.5]), &tol).is_err());
        assert!(DoublyStochasticMatrix::new(DMatrix::zeros(2, 3), &tol).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn unistochastic_from_unitaries_always_passes(seed in any::<u64>()) {
            let tol = Tolerance::default();
            let u = random::haar_unitary(3, &mut random::rng(seed));
            let x = block_index_matrix(&ComplexMatrix::identity(3), &u, &tol).unwrap();
            let v = is_unistochastic_3x3(&x, &tol).unwrap();
            // clause (i): every pair holds for an actual unistochastic matrix
            prop_assert!(v.unistochastic);
            prop_assert!(v.pairs.iter().all(ColumnPairVerdict::holds));
        }

        #[test]
        fn block_index_rows_and_columns_sum_to_one(seed in any::<u64>(), n in 1usize..=9) {
            let mut r = random::rng(seed);
            let (u, v) = (random::haar_unitary(n, &mut r), random::haar_unitary(n, &mut r));
            let x = block_index_matrix(&u, &v, &Tolerance::default()).unwrap();
            for i in 0..n {
                prop_assert!((x.entries().row(i).sum() - 1.0).abs() < 1e-10);
                prop_assert!((x.entries().column(i).sum() - 1.0).abs() < 1e-10);
            }
        }

        #[test]
        fn q_commutative_bounds_and_symmetry(seed in any::<u64>(), n in 1usize..=8) {
            let tol = Tolerance::default();
            let mut r = random::rng(seed);
            let a = random::algebra_spec(n, true, &mut r);
            let b = random::algebra_spec(n, true, &mut r);
            let q = q_commutative(&a, &b, &tol).unwrap();
            let qt = q_commutative(&b, &a, &tol).unwrap();
            prop_assert!((q - qt).abs() < 1e-10);
            prop_assert!(q >= 1.0 - tol.eq_tol);
            prop_assert!(q <= a.dim().min(b.dim()) as f64 + 1e-9);
            let w = random::haar_unitary(n, &mut r);
            let qw = q_commutative(&a.conjugated(&w, &tol).unwrap(), &b.conjugated(&w, &tol).unwrap(), &tol).unwrap();
            prop_assert!((q - qw).abs() < 1e-8);
        }

        #[test]
        fn quasiable_iff_q_is_one(seed in any::<u64>(), n in 2usize..=6) {
            let tol = Tolerance::default();
            let mut r = random::rng(seed);
            // Mix Fourier-related pairs (often quasiable) with Haar pairs.
            let u = if seed % 2 == 0 { fourier_matrix(n) } else { random::haar_unitary(n, &mut r) };
            let (rp, cp) = (random::partition(n, &mut r), random::partition(n, &mut r));
            let a = AlgebraSpec::commutative(ComplexMatrix::identity(n), &rp, &tol).unwrap();
            let b = AlgebraSpec::commutative(u.clone(), &cp, &tol).unwrap();
            let x = block_index_matrix(a.unitary(), b.unitary(), &tol).unwrap();
            let q = q_commutative(&a, &b, &tol).unwrap();
            prop_assert_eq!(is_quasiable(&x, &rp, &cp, &tol).unwrap(), (q - 1.0).abs() <= tol.decision_tol);
            let y = block_sum_matrix(&x, &rp, &cp).unwrap();
            prop_assert!((y.weighted_mass() - n as f64).abs() < 1e-9);
            if y.entries().iter().any(|&e| e <= tol.eq_tol) {
                prop_assert!(!is_quasiable(&x, &rp, &cp, &tol).unwrap());
            }
        }
    }
}

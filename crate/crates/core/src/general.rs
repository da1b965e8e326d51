//! Non-commutative algebras: the commutative measure plus a correction.
//!
//! With `W = U*V` cut into slices `U_{k,p}* V_{l,q}` (an `m_k × n_l` matrix
//! per pair of column slices), the cell `Γ_{k,l}` collects all `a_k b_l`
//! such matrices and
//!
//! ```text
//! Q(A, B) = ‖Y(X; r, c)‖_F² + Σ_{k,l} γ_{k,l} / (m_k n_l)
//! ```
//!
//! where `r`, `c` repeat each `m_k` (resp. `n_l`) `a_k` (resp. `b_l`) times and
//! `γ_{k,l}` is the sum of `|⟨M, M'⟩|²` over *ordered* pairs of distinct
//! members of `Γ_{k,l}`. Counting ordered pairs is what makes the identity
//! hold; see the oracle cross-checks in the tests.

use rand::Rng;

use crate::algebra::{induced_partition, masa_of, AlgebraSpec};
use crate::commutative::{block_index_unchecked, quasiable_violation, y_norm_sq, QuasiableViolation};
use crate::error::{Error, Result};
use crate::matcore::{frobenius_norm_sq, inner_unchecked, ComplexMatrix, Tolerance};
use crate::par::{self, Execution};
use crate::random;

/// `U_{k,p}* V_{l,q}` tagged with its slice indices.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaMember {
    pub p: usize,
    pub q: usize,
    pub matrix: ComplexMatrix,
}

/// The multiset `Γ_{k,l}`, members ordered by `(p, q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaCell {
    pub k: usize,
    pub l: usize,
    pub members: Vec<GammaMember>,
}

/// `d_A × d_B` table of cells in row-major `(k, l)` order.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaTable {
    rows: usize,
    cols: usize,
    cells: Vec<GammaCell>,
}

impl GammaTable {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn cell(&self, k: usize, l: usize) -> &GammaCell {
        &self.cells[k * self.cols + l]
    }

    pub fn cells(&self) -> &[GammaCell] {
        &self.cells
    }
}

fn check_same_n(a: &AlgebraSpec, b: &AlgebraSpec) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::dim(format!("algebras act on M_{} and M_{}", a.n(), b.n())));
    }
    Ok(())
}

pub fn gamma_cells(a: &AlgebraSpec, b: &AlgebraSpec) -> Result<GammaTable> {
    gamma_cells_with(a, b, Execution::default())
}

pub fn gamma_cells_with(a: &AlgebraSpec, b: &AlgebraSpec, exec: Execution) -> Result<GammaTable> {
    check_same_n(a, b)?;
    let w = &a.unitary().adjoint() * b.unitary();
    let (ia, ib) = (a.block_columns(), b.block_columns());
    let (rows, cols) = (ia.num_blocks(), ib.num_blocks());
    let cells = par::map_indexed(exec, rows * cols, |idx| {
        let (k, l) = (idx / cols, idx % cols);
        let mut members = Vec::with_capacity(ia.block(k).len() * ib.block(l).len());
        for (p, rp) in ia.block(k).iter().enumerate() {
            for (q, rq) in ib.block(l).iter().enumerate() {
                members.push(GammaMember {
                    p,
                    q,
                    matrix: w.submatrix(rp.start, rp.len(), rq.start, rq.len()),
                });
            }
        }
        GammaCell { k, l, members }
    });
    Ok(GammaTable { rows, cols, cells })
}

/// `Σ_{i≠j} |⟨M_i, M_j⟩|²` over ordered pairs of distinct members.
pub fn gamma_value(cell: &GammaCell) -> f64 {
    let ms = &cell.members;
    let mut s = 0.0;
    for i in 0..ms.len() {
        for j in i + 1..ms.len() {
            s += inner_unchecked(&ms[i].matrix, &ms[j].matrix).norm_sqr();
        }
    }
    2.0 * s
}

/// `Σ_{k,l} γ_{k,l} / (m_k n_l)`; exactly zero when every cell is a singleton.
fn gamma_correction(a: &AlgebraSpec, b: &AlgebraSpec, exec: Execution) -> Result<f64> {
    if a.is_commutative() && b.is_commutative() {
        return Ok(0.0);
    }
    let table = gamma_cells_with(a, b, exec)?;
    let terms = par::map_slice(exec, table.cells(), |cell| {
        let (m, n) = (a.blocks()[cell.k].m, b.blocks()[cell.l].m);
        gamma_value(cell) / (m * n) as f64
    });
    Ok(par::ordered_sum(&terms))
}

/// `Q(A, B)` for arbitrary unital *-subalgebras given in canonical form.
pub fn q_general(a: &AlgebraSpec, b: &AlgebraSpec, tol: &Tolerance) -> Result<f64> {
    q_general_with(a, b, tol, Execution::default())
}

pub fn q_general_with(a: &AlgebraSpec, b: &AlgebraSpec, _tol: &Tolerance, exec: Execution) -> Result<f64> {
    check_same_n(a, b)?;
    let y = y_norm_sq(a.unitary(), b.unitary(), &induced_partition(a), &induced_partition(b));
    Ok(y + gamma_correction(a, b, exec)?)
}

/// Two members of one cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MemberPair {
    pub k: usize,
    pub l: usize,
    pub first: (usize, usize),
    pub second: (usize, usize),
}

/// Why a pair of algebras fails to be quasiorthogonal.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// `X` is not quasiable for the induced partitions.
    NotQuasiable(QuasiableViolation),
    /// A cell holds the same (non-zero) matrix twice.
    Multiplicity(MemberPair),
    /// Two members of a cell have a non-negligible inner product.
    NonOrthogonal { pair: MemberPair, inner_abs: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneralVerdict {
    pub quasiorthogonal: bool,
    pub witness: Option<Witness>,
}

/// First pair of equal members (entrywise within `decision_tol`), scanning
/// cells in `(k, l)` order. Members that are themselves zero are skipped:
/// repeated zeros are orthogonal and do not obstruct quasiorthogonality.
pub fn multiplicity_violation(table: &GammaTable, tol: &Tolerance) -> Option<MemberPair> {
    for cell in table.cells() {
        let live: Vec<&GammaMember> = cell
            .members
            .iter()
            .filter(|m| frobenius_norm_sq(&m.matrix).sqrt() > tol.decision_tol)
            .collect();
        for i in 0..live.len() {
            for j in i + 1..live.len() {
                if live[i].matrix.max_abs_diff(&live[j].matrix) <= tol.decision_tol {
                    return Some(MemberPair {
                        k: cell.k,
                        l: cell.l,
                        first: (live[i].p, live[i].q),
                        second: (live[j].p, live[j].q),
                    });
                }
            }
        }
    }
    None
}

fn non_orthogonal_pair(table: &GammaTable, tol: &Tolerance) -> Option<(MemberPair, f64)> {
    for cell in table.cells() {
        let ms = &cell.members;
        for i in 0..ms.len() {
            for j in i + 1..ms.len() {
                let z = inner_unchecked(&ms[i].matrix, &ms[j].matrix).norm();
                if z > tol.decision_tol {
                    let pair = MemberPair {
                        k: cell.k,
                        l: cell.l,
                        first: (ms[i].p, ms[i].q),
                        second: (ms[j].p, ms[j].q),
                    };
                    return Some((pair, z));
                }
            }
        }
    }
    None
}

/// Quasiorthogonality from the block structure: `X` quasiable for the
/// induced partitions, and every cell an orthogonal set.
///
/// Conditions are checked in that order; a repeated member is reported in
/// preference to a generic non-orthogonal pair.
pub fn is_quasiorthogonal_general(a: &AlgebraSpec, b: &AlgebraSpec, tol: &Tolerance) -> Result<GeneralVerdict> {
    check_same_n(a, b)?;
    let x = block_index_unchecked(a.unitary(), b.unitary());
    if let Some(v) = quasiable_violation(&x, &induced_partition(a), &induced_partition(b), tol)? {
        return Ok(GeneralVerdict {
            quasiorthogonal: false,
            witness: Some(Witness::NotQuasiable(v)),
        });
    }
    let table = gamma_cells(a, b)?;
    let witness = match multiplicity_violation(&table, tol) {
        Some(pair) => Some(Witness::Multiplicity(pair)),
        None => non_orthogonal_pair(&table, tol).map(|(pair, inner_abs)| Witness::NonOrthogonal { pair, inner_abs }),
    };
    Ok(GeneralVerdict {
        quasiorthogonal: witness.is_none(),
        witness,
    })
}

/// Largest `Q` over randomly sampled pairs of maximal commutative subalgebras.
#[derive(Debug, Clone, PartialEq)]
pub struct MasaSample {
    pub samples: usize,
    pub max_q: f64,
    /// Index of the first sample with `Q > 1 + decision_tol`.
    pub first_excess: Option<usize>,
}

/// Draws `samples` pairs `(masa_of(A, W), masa_of(B, W'))` with Haar inner
/// unitaries and records their commutative measure. If `A` and `B` are
/// quasiorthogonal, every such pair is too.
pub fn sample_masa_pairs<R: Rng + ?Sized>(
    a: &AlgebraSpec,
    b: &AlgebraSpec,
    samples: usize,
    rng: &mut R,
    tol: &Tolerance,
) -> Result<MasaSample> {
    check_same_n(a, b)?;
    let mut max_q = f64::NEG_INFINITY;
    let mut first_excess = None;
    for s in 0..samples {
        let wa: Vec<ComplexMatrix> = a.blocks().iter().map(|blk| random::haar_unitary(blk.a, rng)).collect();
        let wb: Vec<ComplexMatrix> = b.blocks().iter().map(|blk| random::haar_unitary(blk.a, rng)).collect();
        let (ma, mb) = (masa_of(a, &wa, tol)?, masa_of(b, &wb, tol)?);
        let q = crate::commutative::q_commutative(&ma, &mb, tol)?;
        if q > 1.0 + tol.decision_tol && first_excess.is_none() {
            first_excess = Some(s);
        }
        max_q = max_q.max(q);
    }
    Ok(MasaSample {
        samples,
        max_q,
        first_excess,
    })
}

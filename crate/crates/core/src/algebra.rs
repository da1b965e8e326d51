//! Unital *-subalgebras of `M_n` in canonical form `U (⊕_k M_{a_k} ⊗ I_{m_k}) U*`.
//!
//! Column groups of `U` are taken consecutively: block `k` owns `a_k · m_k`
//! columns, split into `a_k` slices `U_{k,1}, …, U_{k,a_k}` of width `m_k`.
//! The matrix units of block `k` are then `U_{k,p} U_{k,q}*`, and scaling by
//! `1/√m_k` gives an orthonormal basis in the trace inner product.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::matcore::{is_unitary, ComplexMatrix, Tolerance};

/// Ordered composition of `n` into positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<usize>,
    n: usize,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::invalid("partition must have at least one part"));
        }
        if let Some(i) = parts.iter().position(|&p| p == 0) {
            return Err(Error::invalid(format!("partition part {i} is zero")));
        }
        let n = parts.iter().sum();
        Ok(Self { parts, n })
    }

    /// `(1, 1, …, 1)`.
    pub fn ones(n: usize) -> Self {
        Self { parts: vec![1; n], n }
    }

    /// The single-part partition `(n)`.
    pub fn whole(n: usize) -> Self {
        Self { parts: vec![n], n }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Consecutive index ranges, one per part.
    pub fn ranges(&self) -> Vec<Range<usize>> {
        let mut start = 0;
        self.parts
            .iter()
            .map(|&p| {
                let r = start..start + p;
                start += p;
                r
            })
            .collect()
    }

    /// All `2^{n-1}` compositions of `n`, in lexicographic order of the
    /// cut-point bitmask.
    pub fn compositions(n: usize) -> Vec<Partition> {
        assert!(n >= 1 && n < 64, "compositions: n out of range");
        (0u64..1 << (n - 1))
            .map(|mask| {
                let mut parts = Vec::new();
                let mut cur = 1;
                for bit in 0..n - 1 {
                    if mask >> bit & 1 == 1 {
                        parts.push(cur);
                        cur = 1;
                    } else {
                        cur += 1;
                    }
                }
                parts.push(cur);
                Partition { parts, n }
            })
            .collect()
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// One direct summand `M_a ⊗ I_m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Block {
    pub a: usize,
    pub m: usize,
}

impl Block {
    pub const fn new(a: usize, m: usize) -> Self {
        Self { a, m }
    }
}

/// `U (⊕_k M_{a_k} ⊗ I_{m_k}) U*`. Blocks keep the order they were given in.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraSpec {
    unitary: ComplexMatrix,
    blocks: Vec<Block>,
}

impl AlgebraSpec {
    pub fn new(unitary: ComplexMatrix, blocks: Vec<Block>, tol: &Tolerance) -> Result<Self> {
        let n = unitary.ensure_square("algebra unitary")?;
        if blocks.is_empty() {
            return Err(Error::invalid("algebra needs at least one block"));
        }
        if let Some((k, b)) = blocks.iter().enumerate().find(|(_, b)| b.a == 0 || b.m == 0) {
            return Err(Error::invalid(format!(
                "block {k} has a zero size ({}, {})",
                b.a, b.m
            )));
        }
        let total: usize = blocks.iter().map(|b| b.a * b.m).sum();
        if total != n {
            return Err(Error::dim(format!(
                "blocks cover {total} columns but the unitary is {n}x{n}"
            )));
        }
        if !is_unitary(&unitary, tol)? {
            return Err(Error::domain("algebra matrix is not unitary within tolerance"));
        }
        Ok(Self { unitary, blocks })
    }

    /// Commutative algebra `U (⊕_k ℂ I_{m_k}) U*`.
    pub fn commutative(unitary: ComplexMatrix, partition: &Partition, tol: &Tolerance) -> Result<Self> {
        let blocks = partition.parts().iter().map(|&m| Block::new(1, m)).collect();
        Self::new(unitary, blocks, tol)
    }

    /// Diagonal MASA `Δ_n`.
    pub fn diagonal(n: usize) -> Self {
        Self {
            unitary: ComplexMatrix::identity(n),
            blocks: vec![Block::new(1, 1); n],
        }
    }

    /// Scalars `ℂ I_n`.
    pub fn scalars(n: usize) -> Self {
        Self {
            unitary: ComplexMatrix::identity(n),
            blocks: vec![Block::new(1, n)],
        }
    }

    /// All of `M_n`.
    pub fn full(n: usize) -> Self {
        Self {
            unitary: ComplexMatrix::identity(n),
            blocks: vec![Block::new(n, 1)],
        }
    }

    /// Same block structure conjugated by `w`: the algebra `W A W*`.
    pub fn conjugated(&self, w: &ComplexMatrix, tol: &Tolerance) -> Result<Self> {
        Self::new(w * &self.unitary, self.blocks.clone(), tol)
    }

    pub fn n(&self) -> usize {
        self.unitary.rows()
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.unitary
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn is_commutative(&self) -> bool {
        self.blocks.iter().all(|b| b.a == 1)
    }

    /// Vector-space dimension `Σ a_k²`.
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|b| b.a * b.a).sum()
    }

    pub fn block_columns(&self) -> BlockColumnIndex {
        let mut start = 0;
        let slices = self
            .blocks
            .iter()
            .map(|b| {
                (0..b.a)
                    .map(|_| {
                        let r = start..start + b.m;
                        start += b.m;
                        r
                    })
                    .collect()
            })
            .collect();
        BlockColumnIndex { slices }
    }

    pub(crate) fn slice(&self, range: &Range<usize>) -> ComplexMatrix {
        self.unitary.column_block(range.start, range.len())
    }
}

/// Column ranges `U_{k,p}` for every block `k` and slice `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockColumnIndex {
    slices: Vec<Vec<Range<usize>>>,
}

impl BlockColumnIndex {
    pub fn block(&self, k: usize) -> &[Range<usize>] {
        &self.slices[k]
    }

    pub fn num_blocks(&self) -> usize {
        self.slices.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &[Range<usize>]> {
        self.slices.iter().map(Vec::as_slice)
    }
}

/// Row/column partition `(m_1 1_{a_1}, m_2 1_{a_2}, …)`: each `m_k` repeated
/// `a_k` times, in block order.
pub fn induced_partition(spec: &AlgebraSpec) -> Partition {
    let parts = spec
        .blocks
        .iter()
        .flat_map(|b| std::iter::repeat_n(b.m, b.a))
        .collect();
    Partition { parts, n: spec.n() }
}

/// Basis element `(1/√m_k) U_{k,p} U_{k,q}*` tagged with its indices.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisElement {
    pub k: usize,
    pub p: usize,
    pub q: usize,
    pub matrix: ComplexMatrix,
}

/// Orthonormal basis with `(k, p, q)` labels, ordered by `k`, then `p`, then `q`.
pub fn labelled_basis(spec: &AlgebraSpec) -> Vec<BasisElement> {
    let index = spec.block_columns();
    let mut out = Vec::with_capacity(spec.dim());
    for (k, (block, slices)) in spec.blocks.iter().zip(index.iter()).enumerate() {
        let cols: Vec<ComplexMatrix> = slices.iter().map(|r| spec.slice(r)).collect();
        let adj: Vec<ComplexMatrix> = cols.iter().map(ComplexMatrix::adjoint).collect();
        let s = 1.0 / (block.m as f64).sqrt();
        for p in 0..block.a {
            for q in 0..block.a {
                out.push(BasisElement {
                    k,
                    p,
                    q,
                    matrix: (&cols[p] * &adj[q]).scale(s),
                });
            }
        }
    }
    out
}

/// Orthonormal basis of the algebra in the trace inner product
/// (`Σ_k a_k²` matrices).
pub fn orthonormal_basis(spec: &AlgebraSpec) -> Vec<ComplexMatrix> {
    labelled_basis(spec).into_iter().map(|e| e.matrix).collect()
}

/// A separating vector exists iff `a_k ≤ m_k` for every block.
pub fn has_separating_vector(spec: &AlgebraSpec) -> bool {
    spec.blocks.iter().all(|b| b.a <= b.m)
}

/// Maximal commutative subalgebra `U (⊕_k (W_k Δ_{a_k} W_k*) ⊗ I_{m_k}) U*`
/// picked out by one `a_k × a_k` unitary `W_k` per block.
pub fn masa_of(spec: &AlgebraSpec, inner: &[ComplexMatrix], tol: &Tolerance) -> Result<AlgebraSpec> {
    if inner.len() != spec.blocks.len() {
        return Err(Error::dim(format!(
            "need one inner unitary per block: got {}, expected {}",
            inner.len(),
            spec.blocks.len()
        )));
    }
    let mut summands = Vec::with_capacity(inner.len());
    for (k, (w, b)) in inner.iter().zip(&spec.blocks).enumerate() {
        if w.rows() != b.a || w.cols() != b.a {
            return Err(Error::dim(format!(
                "inner unitary {k} is {}x{}, block needs {}x{}",
                w.rows(),
                w.cols(),
                b.a,
                b.a
            )));
        }
        if !is_unitary(w, tol)? {
            return Err(Error::domain(format!("inner matrix {k} is not unitary")));
        }
        summands.push(w.kron(&ComplexMatrix::identity(b.m)));
    }
    let unitary = &spec.unitary * &ComplexMatrix::direct_sum(&summands);
    let blocks = spec
        .blocks
        .iter()
        .flat_map(|b| std::iter::repeat_n(Block::new(1, b.m), b.a))
        .collect();
    AlgebraSpec::new(unitary, blocks, tol)
}

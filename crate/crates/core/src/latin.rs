//! Latin squares and abelian group algebras.
//!
//! A Latin square `L` of order `n` splits `J_n` into `n` permutation
//! matrices, one per symbol. Under the Schur product these span a
//! commutative algebra, and for two squares the measure reduces to symbol
//! pair counts: `Q = n⁻² Σ_{i,j} |S_{ij}|²` with `S_{ij}` the cells where `L₁`
//! reads `i` and `L₂` reads `j`. Symbols are `1..=n`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::algebra::{AlgebraSpec, Partition};
use crate::error::{Error, Result};
use crate::matcore::{ComplexMatrix, Tolerance, C0, C1};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatinSquare {
    cells: Vec<Vec<usize>>,
}

impl LatinSquare {
    pub fn order(&self) -> usize {
        self.cells.len()
    }

    pub fn get(&self, i: usize, j: usize) -> usize {
        self.cells[i][j]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.cells
    }

    /// `L_{ij} = ((i + j) mod n) + 1` with 0-based `i, j`.
    pub fn cyclic(n: usize) -> Self {
        Self::linear(n, 1, 1)
    }

    /// `L_{ij} = ((a·i + b·j) mod n) + 1`; Latin when `a` and `b` are units mod `n`.
    pub fn linear(n: usize, a: usize, b: usize) -> Self {
        let cells = (0..n)
            .map(|i| (0..n).map(|j| (a * i + b * j) % n + 1).collect())
            .collect();
        Self { cells }
    }
}

/// Validates an `n × n` array of symbols `1..=n`.
pub fn validate_latin(cells: Vec<Vec<usize>>) -> Result<LatinSquare> {
    let n = cells.len();
    if n == 0 {
        return Err(Error::invalid("Latin square must be non-empty"));
    }
    if let Some(i) = cells.iter().position(|r| r.len() != n) {
        return Err(Error::dim(format!(
            "row {} has {} entries, expected {n}",
            i + 1,
            cells[i].len()
        )));
    }
    for (i, row) in cells.iter().enumerate() {
        for (j, &s) in row.iter().enumerate() {
            if s == 0 || s > n {
                return Err(Error::invalid(format!(
                    "symbol {s} at row {}, column {} is outside 1..={n}",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    for i in 0..n {
        if let Some(s) = repeated((0..n).map(|j| cells[i][j]), n) {
            return Err(Error::invalid(format!("symbol {s} repeats in row {}", i + 1)));
        }
    }
    for j in 0..n {
        if let Some(s) = repeated((0..n).map(|i| cells[i][j]), n) {
            return Err(Error::invalid(format!("symbol {s} repeats in column {}", j + 1)));
        }
    }
    Ok(LatinSquare { cells })
}

fn repeated(symbols: impl Iterator<Item = usize>, n: usize) -> Option<usize> {
    let mut seen = vec![false; n + 1];
    for s in symbols {
        if std::mem::replace(&mut seen[s], true) {
            return Some(s);
        }
    }
    None
}

/// `P_s` has a one wherever `L` holds symbol `s + 1`.
pub fn symbol_permutations(l: &LatinSquare) -> Vec<ComplexMatrix> {
    let n = l.order();
    (1..=n)
        .map(|s| ComplexMatrix::from_fn(n, n, |i, j| if l.get(i, j) == s { C1 } else { C0 }))
        .collect()
}

fn check_orders(l1: &LatinSquare, l2: &LatinSquare) -> Result<()> {
    if l1.order() != l2.order() {
        return Err(Error::dim(format!(
            "Latin squares of orders {} and {}",
            l1.order(),
            l2.order()
        )));
    }
    Ok(())
}

/// `S[i][j]` = number of cells where `L₁` has symbol `i+1` and `L₂` has `j+1`.
pub fn pair_counts(l1: &LatinSquare, l2: &LatinSquare) -> Result<Vec<Vec<usize>>> {
    check_orders(l1, l2)?;
    let n = l1.order();
    let mut s = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            s[l1.get(i, j) - 1][l2.get(i, j) - 1] += 1;
        }
    }
    Ok(s)
}

pub fn q_latin(l1: &LatinSquare, l2: &LatinSquare) -> Result<f64> {
    let s = pair_counts(l1, l2)?;
    let n = l1.order() as f64;
    let total: usize = s.iter().flatten().map(|c| c * c).sum();
    Ok(total as f64 / (n * n))
}

/// Every symbol pair occurs exactly once.
pub fn are_orthogonal_latin(l1: &LatinSquare, l2: &LatinSquare, tol: &Tolerance) -> Result<bool> {
    let s = pair_counts(l1, l2)?;
    let orthogonal = s.iter().flatten().all(|&c| c == 1);
    debug_assert_eq!(orthogonal, (q_latin(l1, l2)? - 1.0).abs() <= tol.decision_tol);
    Ok(orthogonal)
}

/// `F_m[j, k] = e^{−2πi jk/m} / √m`: the character table of `ℤ_m`.
pub fn fourier_matrix(m: usize) -> ComplexMatrix {
    assert!(m >= 1, "fourier_matrix: order must be positive");
    let s = 1.0 / (m as f64).sqrt();
    ComplexMatrix::from_fn(m, m, |j, k| {
        Complex64::from_polar(s, -2.0 * PI * ((j * k) % m) as f64 / m as f64)
    })
}

/// `ℤ_{p₁} × ⋯ × ℤ_{p_r}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianGroupSpec {
    factors: Vec<usize>,
}

impl AbelianGroupSpec {
    pub fn new(factors: Vec<usize>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::invalid("group needs at least one cyclic factor"));
        }
        if factors.contains(&0) {
            return Err(Error::invalid("cyclic factor orders must be positive"));
        }
        Ok(Self { factors })
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.factors.iter().product()
    }
}

/// `F_{p₁} ⊗ ⋯ ⊗ F_{p_r}`.
pub fn group_algebra_unitary(g: &AbelianGroupSpec) -> ComplexMatrix {
    g.factors[1..]
        .iter()
        .fold(fourier_matrix(g.factors[0]), |u, &p| u.kron(&fourier_matrix(p)))
}

/// `ℂ[G]` as the MASA `U Δ_n U*` with `U` the character table.
pub fn group_algebra(g: &AbelianGroupSpec) -> AlgebraSpec {
    AlgebraSpec::commutative(group_algebra_unitary(g), &Partition::ones(g.order()), &Tolerance::default())
        .expect("character tables are unitary")
}

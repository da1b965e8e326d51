//! Worked constructions reused by tests, benches and the CLI golden files.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::{AlgebraSpec, Block};
use crate::error::{Error, Result};
use crate::matcore::{ComplexMatrix, Tolerance, C0, C1};

/// Sylvester Hadamard matrix: `H_0 = [[1,1],[1,-1]]`, `H_k = [[H,H],[H,-H]]`.
/// `H_k` has order `2^{k+1}`.
pub fn sylvester(k: u32) -> ComplexMatrix {
    let h0 = ComplexMatrix::from_real_rows(&[vec![1.0, 1.0], vec![1.0, -1.0]]).expect("finite");
    (0..k).fold(h0.clone(), |h, _| h0.kron(&h))
}

/// The pair `A_{p,q} = U (⊕ M_{2^p} ⊗ I_{2^q}) U*`, `B_{p,q} = ⊕ M_{2^p} ⊗ I_{2^q}`
/// with `U = H_k / √(2^{k+1})`, for `p, q ≥ 1` and `p + q ≤ k`.
pub fn hadamard_family(p: u32, q: u32, k: u32) -> Result<(AlgebraSpec, AlgebraSpec)> {
    if p < 1 || q < 1 || p + q > k {
        return Err(Error::invalid(format!(
            "hadamard family needs p, q ≥ 1 and p + q ≤ k (got p={p}, q={q}, k={k})"
        )));
    }
    let n = 1usize << (k + 1);
    let copies = 1usize << (k + 1 - p - q);
    let blocks = vec![Block::new(1 << p, 1 << q); copies];
    let tol = Tolerance::default();
    let u = sylvester(k).scale(1.0 / (n as f64).sqrt());
    let a = AlgebraSpec::new(u, blocks.clone(), &tol)?;
    let b = AlgebraSpec::new(ComplexMatrix::identity(n), blocks, &tol)?;
    Ok((a, b))
}

/// `[[a, b], [−e^{iτ} b̄, e^{iτ} ā]]`; unitary when `|a|² + |b|² = 1`.
pub fn su2(a: Complex64, b: Complex64, tau: f64) -> ComplexMatrix {
    let e = Complex64::from_polar(1.0, tau);
    ComplexMatrix::from_rows(&[vec![a, b], vec![-e * b.conj(), e * a.conj()]]).expect("finite")
}

/// Permutation matrix with a one at `(i, perm[i])`.
pub fn permutation(perm: &[usize]) -> ComplexMatrix {
    let n = perm.len();
    ComplexMatrix::from_rows(
        &(0..n)
            .map(|i| (0..n).map(|j| if perm[i] == j { C1 } else { C0 }).collect())
            .collect::<Vec<_>>(),
    )
    .expect("finite")
}

/// `[[0,1,0],[0,0,1],[1,0,0]]`.
pub fn cyclic_shift3() -> ComplexMatrix {
    permutation(&[1, 2, 0])
}

/// Doubly stochastic `[[1/3,2/3,0],[0,1/3,2/3],[2/3,0,1/3]]`: quasiable for
/// `(2,1)/(2,1)`, not for `(1,1,1)/(1,1,1)`, and not unistochastic.
pub fn quasiable_not_unistochastic() -> DMatrix<f64> {
    let (a, b) = (1.0 / 3.0, 2.0 / 3.0);
    DMatrix::from_row_slice(3, 3, &[a, b, 0.0, 0.0, a, b, b, 0.0, a])
}

/// `A = W (M_2 ⊗ I_2) W*` with `W = H_1 / 2`, and `B = Δ_2 ⊗ I_2`.
pub fn masa_example_pair() -> (AlgebraSpec, AlgebraSpec) {
    let tol = Tolerance::default();
    let w = sylvester(1).scale(0.5);
    let a = AlgebraSpec::new(w, vec![Block::new(2, 2)], &tol).expect("valid");
    let b = AlgebraSpec::new(ComplexMatrix::identity(4), vec![Block::new(1, 2); 2], &tol).expect("valid");
    (a, b)
}

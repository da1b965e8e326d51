//! Seeded random generators for unitaries, Hermitian matrices and algebra
//! specs. Everything is deterministic given the seed.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::{AlgebraSpec, Block, Partition};
use crate::matcore::{hermitian_eigen, ComplexMatrix, Tolerance};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_c<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Matrix of i.i.d. standard complex Gaussians.
pub fn complex_gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    let data: Vec<Complex64> = (0..rows * cols).map(|_| gaussian_c(rng)).collect();
    ComplexMatrix::wrap(DMatrix::from_vec(rows, cols, data))
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the
/// triangular factor's diagonal made positive real.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = complex_gaussian(n, n, rng).into_dmatrix();
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    ComplexMatrix::wrap(q)
}

/// Random Hermitian matrix `(G + G*)/2`.
pub fn hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    complex_gaussian(n, n, rng).hermitian_part()
}

/// Random positive semidefinite matrix `G G*`.
pub fn psd<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = complex_gaussian(n, n, rng);
    &g * &g.adjoint()
}

/// `exp(i·t·K)` for Hermitian `K`, through its eigendecomposition.
pub fn expi_hermitian(k: &ComplexMatrix, t: f64) -> ComplexMatrix {
    let (vals, vecs) = hermitian_eigen(k, &Tolerance::new(1e-9, 1e-6).expect("static tolerance"))
        .expect("expi_hermitian requires a Hermitian input");
    let d: Vec<Complex64> = vals.iter().map(|&v| Complex64::from_polar(1.0, t * v)).collect();
    &(&vecs * &ComplexMatrix::diagonal(&d)) * &vecs.adjoint()
}

/// `U · exp(i·strength·K)` with `K` a random Hermitian matrix normalized to
/// unit spectral radius.
pub fn perturb_unitary<R: Rng + ?Sized>(u: &ComplexMatrix, strength: f64, rng: &mut R) -> ComplexMatrix {
    let k = hermitian(u.rows(), rng);
    let radius = crate::matcore::largest_singular_value(&k).max(f64::MIN_POSITIVE);
    u * &expi_hermitian(&k.scale(1.0 / radius), strength)
}

/// Uniformly random composition of `n` (every one of the `2^{n-1}`
/// compositions is equally likely).
pub fn partition<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Partition {
    let mut parts = Vec::new();
    let mut cur = 1;
    for _ in 1..n {
        if rng.random::<bool>() {
            parts.push(cur);
            cur = 1;
        } else {
            cur += 1;
        }
    }
    parts.push(cur);
    Partition::new(parts).expect("composition parts are positive")
}

/// Random block descriptor `[(a_k, m_k)]` with `Σ a_k m_k = n`.
///
/// With `commutative` every `a_k = 1`; otherwise `a_k` is drawn from
/// `1..=remaining` so full matrix blocks and multiplicity blocks both occur.
pub fn blocks<R: Rng + ?Sized>(n: usize, commutative: bool, rng: &mut R) -> Vec<Block> {
    if commutative {
        return partition(n, rng).parts().iter().map(|&m| Block::new(1, m)).collect();
    }
    let mut rest = n;
    let mut out = Vec::new();
    while rest > 0 {
        let a = rng.random_range(1..=rest);
        let m = rng.random_range(1..=rest / a);
        out.push(Block::new(a, m));
        rest -= a * m;
    }
    out
}

/// Random algebra: Haar unitary plus random blocks.
pub fn algebra_spec<R: Rng + ?Sized>(n: usize, commutative: bool, rng: &mut R) -> AlgebraSpec {
    let u = haar_unitary(n, rng);
    let b = blocks(n, commutative, rng);
    AlgebraSpec::new(u, b, &Tolerance::default()).expect("random spec is valid")
}

//! Projective measurements, mutual unbiasedness and its approximate form.
//!
//! Two `d`-outcome measurements `{P_a}`, `{Q_b}` of uniform rank `k = n/d`
//! are mutually unbiased when `P_a Q_b P_a = P_a / d` and
//! `Q_b P_a Q_b = Q_b / d`. That holds exactly when the commutative
//! algebras `span{P_a}` and `span{Q_b}` are quasiorthogonal *and* every
//! product `P_a Q_b P_a` (resp. `Q_b P_a Q_b`) stays inside the algebra; both
//! routes are implemented so they can be compared.

use num_complex::Complex64;
use rand::Rng;

use crate::algebra::{AlgebraSpec, Block, Partition};
use crate::error::{Error, Result};
use crate::matcore::{frobenius_norm_sq, hermitian_eigen, hermitian_eigen_max, is_unitary, ComplexMatrix, Tolerance};
use crate::oracle::{apply_expectation, is_quasiorthogonal_oracle, q_oracle};
use crate::random;

/// Complete family of mutually orthogonal projections summing to `I_n`.
///
/// Stored as a unitary whose consecutive column groups span the ranges of
/// the projections, plus the ranks.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    unitary: ComplexMatrix,
    ranks: Partition,
    projections: Vec<ComplexMatrix>,
}

impl Measurement {
    /// `P_a = U_a U_a*` for consecutive column groups of sizes `ranks`.
    pub fn from_unitary(unitary: ComplexMatrix, ranks: &Partition, tol: &Tolerance) -> Result<Self> {
        let n = unitary.ensure_square("measurement unitary")?;
        if ranks.n() != n {
            return Err(Error::dim(format!("ranks {ranks} do not sum to {n}")));
        }
        if !is_unitary(&unitary, tol)? {
            return Err(Error::domain("measurement basis is not unitary within tolerance"));
        }
        let projections = ranks
            .ranges()
            .iter()
            .map(|r| {
                let c = unitary.column_block(r.start, r.len());
                &c * &c.adjoint()
            })
            .collect();
        Ok(Self {
            unitary,
            ranks: ranks.clone(),
            projections,
        })
    }

    /// Validates the projections and recovers an orthonormal basis of each
    /// range from its eigenvectors.
    pub fn from_projections(projections: Vec<ComplexMatrix>, tol: &Tolerance) -> Result<Self> {
        let first = projections
            .first()
            .ok_or_else(|| Error::invalid("measurement needs at least one projection"))?;
        let n = first.ensure_square("projection")?;
        let mut sum = ComplexMatrix::zeros(n, n);
        let mut columns = Vec::with_capacity(n * n);
        let mut ranks = Vec::with_capacity(projections.len());
        for (a, p) in projections.iter().enumerate() {
            if p.rows() != n || p.cols() != n {
                return Err(Error::dim(format!(
                    "projection {a} is {}x{}, expected {n}x{n}",
                    p.rows(),
                    p.cols()
                )));
            }
            let scale = frobenius_norm_sq(p).sqrt().max(1.0);
            let idem = frobenius_norm_sq(&(&(p * p) - p)).sqrt();
            if p.max_abs_diff(&p.adjoint()) > tol.eq_tol * scale || idem > tol.eq_tol * scale {
                return Err(Error::domain(format!("element {a} is not an orthogonal projection")));
            }
            let (vals, vecs) = hermitian_eigen(p, tol)?;
            let rank = vals.iter().filter(|&&v| v > 0.5).count();
            if rank == 0 {
                return Err(Error::domain(format!("projection {a} is zero")));
            }
            for j in n - rank..n {
                columns.extend(vecs.column(j).iter().copied());
            }
            ranks.push(rank);
            sum = &sum + p;
        }
        if sum.max_abs_diff(&ComplexMatrix::identity(n)) > tol.eq_tol * (n as f64).sqrt() {
            return Err(Error::domain("projections do not sum to the identity"));
        }
        for a in 0..projections.len() {
            for b in a + 1..projections.len() {
                let z = frobenius_norm_sq(&(&projections[a] * &projections[b])).sqrt();
                if z > tol.eq_tol * (n as f64).sqrt() {
                    return Err(Error::domain(format!("projections {a} and {b} are not orthogonal")));
                }
            }
        }
        if columns.len() != n * n {
            return Err(Error::domain("projection ranks do not add up to n"));
        }
        let unitary = ComplexMatrix::from_dmatrix(nalgebra::DMatrix::from_column_slice(n, n, &columns))?;
        Ok(Self {
            unitary,
            ranks: Partition::new(ranks)?,
            projections,
        })
    }

    pub fn n(&self) -> usize {
        self.unitary.rows()
    }

    /// Number of outcomes `d`.
    pub fn outcomes(&self) -> usize {
        self.projections.len()
    }

    pub fn ranks(&self) -> &Partition {
        &self.ranks
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.unitary
    }

    pub fn projections(&self) -> &[ComplexMatrix] {
        &self.projections
    }

    /// `Some(k)` when every projection has rank `k`.
    pub fn uniform_rank(&self) -> Option<usize> {
        let k = self.ranks.parts()[0];
        self.ranks.parts().iter().all(|&r| r == k).then_some(k)
    }
}

/// `span{P_a}` as the commutative spec `U (⊕ ℂ I_{k_a}) U*`.
pub fn algebra_of(m: &Measurement) -> AlgebraSpec {
    AlgebraSpec::commutative(m.unitary.clone(), &m.ranks, &Tolerance::default())
        .expect("measurement bases are validated unitaries")
}

/// `⊕_a M_{k_a}` in the measurement basis: everything commuting with every `P_a`.
pub fn commutant_of(m: &Measurement) -> AlgebraSpec {
    let blocks = m.ranks.parts().iter().map(|&k| Block::new(k, 1)).collect();
    AlgebraSpec::new(m.unitary.clone(), blocks, &Tolerance::default()).expect("measurement bases are validated unitaries")
}

fn check_pair(p: &Measurement, q: &Measurement) -> Result<()> {
    if p.n() != q.n() {
        return Err(Error::dim(format!("measurements on ℂ^{} and ℂ^{}", p.n(), q.n())));
    }
    if p.outcomes() != q.outcomes() {
        return Err(Error::domain(format!(
            "outcome counts differ: {} vs {}",
            p.outcomes(),
            q.outcomes()
        )));
    }
    Ok(())
}

/// Common rank `k` of both measurements, or a domain error.
fn uniform_pair(p: &Measurement, q: &Measurement) -> Result<usize> {
    check_pair(p, q)?;
    match (p.uniform_rank(), q.uniform_rank()) {
        (Some(k), Some(l)) if k == l => Ok(k),
        _ => Err(Error::domain(format!(
            "mutual unbiasedness needs one common rank, got {} and {}",
            p.ranks, q.ranks
        ))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MumCheck {
    pub mum: bool,
    pub max_residual: f64,
}

fn sandwich_residual(p: &Measurement, q: &Measurement, target: impl Fn(usize, usize) -> f64) -> f64 {
    let mut worst: f64 = 0.0;
    for (a, pa) in p.projections.iter().enumerate() {
        for (b, qb) in q.projections.iter().enumerate() {
            let r = &(&(pa * qb) * pa) - &pa.scale(target(a, b));
            worst = worst.max(frobenius_norm_sq(&r).sqrt());
        }
    }
    worst
}

/// `max ‖P_a Q_b P_a − P_a/d‖_F` (and symmetrically) against `decision_tol · √k`.
pub fn is_mum(p: &Measurement, q: &Measurement, tol: &Tolerance) -> Result<MumCheck> {
    let k = uniform_pair(p, q)?;
    let d = p.outcomes() as f64;
    let res = sandwich_residual(p, q, |_, _| 1.0 / d).max(sandwich_residual(q, p, |_, _| 1.0 / d));
    Ok(MumCheck {
        mum: res <= tol.decision_tol * (k as f64).sqrt(),
        max_residual: res,
    })
}

/// Unequal-rank variant: `P_a Q_b P_a = (Tr Q_b / n) P_a` and
/// `Q_b P_a Q_b = (Tr P_a / n) Q_b`.
pub fn is_mum_generalized(p: &Measurement, q: &Measurement, tol: &Tolerance) -> Result<MumCheck> {
    check_pair(p, q)?;
    let n = p.n() as f64;
    let (rp, rq) = (p.ranks.parts(), q.ranks.parts());
    let res = sandwich_residual(p, q, |_, b| rq[b] as f64 / n).max(sandwich_residual(q, p, |_, a| rp[a] as f64 / n));
    let k = rp.iter().chain(rq).copied().max().unwrap_or(1);
    Ok(MumCheck {
        mum: res <= tol.decision_tol * (k as f64).sqrt(),
        max_residual: res,
    })
}

/// The two clauses of the algebraic characterisation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MumDiagnosis {
    pub quasiorthogonal: bool,
    pub products_in_algebra: bool,
    /// Largest `‖X − E(X)‖_F / ‖X‖_F` over the sandwiched products.
    pub max_membership_residual: f64,
}

impl MumDiagnosis {
    pub fn mum(&self) -> bool {
        self.quasiorthogonal && self.products_in_algebra
    }

    pub fn diagnosis(&self) -> &'static str {
        match (self.quasiorthogonal, self.products_in_algebra) {
            (true, true) => "both clauses hold",
            (true, false) => "product not in algebra",
            (false, true) => "algebras not quasiorthogonal",
            (false, false) => "algebras not quasiorthogonal; product not in algebra",
        }
    }
}

fn membership_residual(p: &Measurement, q: &Measurement, alg: &AlgebraSpec) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for pa in &p.projections {
        for qb in &q.projections {
            let x = &(pa * qb) * pa;
            let norm = frobenius_norm_sq(&x).sqrt();
            if norm == 0.0 {
                continue;
            }
            let r = &x - &apply_expectation(alg, &x)?;
            worst = worst.max(frobenius_norm_sq(&r).sqrt() / norm);
        }
    }
    Ok(worst)
}

/// Quasiorthogonality of the two algebras plus membership of every
/// `P_a Q_b P_a` in `span{P_a}` and `Q_b P_a Q_b` in `span{Q_b}`.
pub fn mum_via_quasiorthogonality(p: &Measurement, q: &Measurement, tol: &Tolerance) -> Result<MumDiagnosis> {
    uniform_pair(p, q)?;
    let (ap, aq) = (algebra_of(p), algebra_of(q));
    let quasiorthogonal = is_quasiorthogonal_oracle(&ap, &aq, tol)?.quasiorthogonal;
    let res = membership_residual(p, q, &ap)?.max(membership_residual(q, p, &aq)?);
    Ok(MumDiagnosis {
        quasiorthogonal,
        products_in_algebra: res <= tol.decision_tol,
        max_membership_residual: res,
    })
}

/// Orthonormal basis of the range of `P_a`: the `a`-th column group.
fn range_basis(m: &Measurement, a: usize) -> ComplexMatrix {
    let r = &m.ranks.ranges()[a];
    m.unitary.column_block(r.start, r.len())
}

/// `max_{a,b} λ_max(B_a* Q_b B_a)` over both orders.
fn max_compression(p: &Measurement, q: &Measurement) -> Result<f64> {
    let tol = Tolerance::default();
    let mut worst = f64::NEG_INFINITY;
    for a in 0..p.outcomes() {
        let ba = range_basis(p, a);
        for qb in &q.projections {
            let c = &(&ba.adjoint() * qb) * &ba;
            worst = worst.max(hermitian_eigen_max(&c.hermitian_part(), &tol)?);
        }
    }
    Ok(worst)
}

/// Smallest `ε ≥ 0` with `P_a Q_b P_a ≤ (1+ε)/d · P_a` and
/// `Q_b P_a Q_b ≤ (1+ε)/d · Q_b` for all `a, b`.
///
/// The minimum is this crate's choice of a canonical `ε`; `ε = 0` is exact
/// mutual unbiasedness.
pub fn amum_epsilon(p: &Measurement, q: &Measurement) -> Result<f64> {
    check_pair(p, q)?;
    let lambda = max_compression(p, q)?.max(max_compression(q, p)?);
    Ok((p.outcomes() as f64 * lambda - 1.0).max(0.0))
}

/// `P_a = |ψ_a⟩⟨ψ_a| ⊗ I_k`, `Q_b = |φ_b⟩⟨φ_b| ⊗ I_k` from the columns of
/// two unitaries.
pub fn ampliate(basis_p: &ComplexMatrix, basis_q: &ComplexMatrix, k: usize, tol: &Tolerance) -> Result<(Measurement, Measurement)> {
    if k == 0 {
        return Err(Error::invalid("ampliation factor must be positive"));
    }
    let n = basis_p.ensure_square("basis")?;
    basis_p.ensure_same_shape(basis_q, "ampliation bases")?;
    for (name, b) in [("first", basis_p), ("second", basis_q)] {
        if !is_unitary(b, tol)? {
            return Err(Error::domain(format!("{name} basis is not orthonormal")));
        }
    }
    let ranks = Partition::new(vec![k; n])?;
    let id = ComplexMatrix::identity(k);
    Ok((
        Measurement::from_unitary(basis_p.kron(&id), &ranks, tol)?,
        Measurement::from_unitary(basis_q.kron(&id), &ranks, tol)?,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QBound {
    pub q: f64,
    pub epsilon: f64,
    pub holds: bool,
}

/// `Q(A, B) ≤ (1 + ε)²` with `ε` from [`amum_epsilon`].
pub fn q_bound_check(p: &Measurement, q: &Measurement, tol: &Tolerance) -> Result<QBound> {
    uniform_pair(p, q)?;
    let qv = q_oracle(&algebra_of(p), &algebra_of(q))?;
    let epsilon = amum_epsilon(p, q)?;
    Ok(QBound {
        q: qv,
        epsilon,
        holds: qv <= (1.0 + epsilon).powi(2) + tol.eq_tol,
    })
}

/// `U_r = Σ_a ω^{r a} P_a` with `ω = e^{2πi/d}`, `r = 0..d`.
pub fn expectation_unitaries(m: &Measurement) -> Vec<ComplexMatrix> {
    let d = m.outcomes();
    (0..d)
        .map(|r| {
            m.projections.iter().enumerate().fold(ComplexMatrix::zeros(m.n(), m.n()), |acc, (a, pa)| {
                let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * ((r * a) % d) as f64 / d as f64);
                &acc + &pa.scale_c(w)
            })
        })
        .collect()
}

/// `(1/d) Σ_r U_r X U_r*`.
///
/// This is the pinching `Σ_a P_a X P_a`, i.e. the conditional expectation
/// onto [`commutant_of`]. It agrees with the expectation onto
/// [`algebra_of`] only when every projection has rank one.
pub fn average_channel(m: &Measurement, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    if x.rows() != m.n() || x.cols() != m.n() {
        return Err(Error::dim(format!(
            "channel on M_{} applied to a {}x{} matrix",
            m.n(),
            x.rows(),
            x.cols()
        )));
    }
    let us = expectation_unitaries(m);
    let sum = us
        .iter()
        .fold(ComplexMatrix::zeros(m.n(), m.n()), |acc, u| &acc + &(&(u * x) * &u.adjoint()));
    Ok(sum.scale(1.0 / us.len() as f64))
}

/// Fourier MUB on `ℂ^n`, ampliated by `k`: computational basis vs `F_n`.
pub fn fourier_mum(n: usize, k: usize, tol: &Tolerance) -> Result<(Measurement, Measurement)> {
    ampliate(&ComplexMatrix::identity(n), &crate::latin::fourier_matrix(n), k, tol)
}

/// Fourier MUB with the second basis rotated by `exp(i·strength·K)` for a
/// random Hermitian `K` of unit norm, then ampliated by `k`. The resulting
/// `ε` should be measured with [`amum_epsilon`], not inferred from `strength`.
pub fn perturbed_fourier_mum<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    strength: f64,
    rng: &mut R,
    tol: &Tolerance,
) -> Result<(Measurement, Measurement)> {
    let f = random::perturb_unitary(&crate::latin::fourier_matrix(n), strength, rng);
    ampliate(&ComplexMatrix::identity(n), &f, k, tol)
}

/// Two-outcome rank-2 measurements on `ℂ⁴` that generate quasiorthogonal
/// algebras without being mutually unbiased: with `ψ_{a,b} = e_{2a+b}`,
/// `P_a = Σ_b |ψ_{a,b}⟩⟨ψ_{a,b}|` and `Q_b = Σ_a |ψ_{a,b}⟩⟨ψ_{a,b}|`.
pub fn counterexample() -> (Measurement, Measurement) {
    let tol = Tolerance::default();
    let ranks = Partition::new(vec![2, 2]).expect("static");
    let p = Measurement::from_unitary(ComplexMatrix::identity(4), &ranks, &tol).expect("static");
    let swap = crate::fixtures::permutation(&[0, 2, 1, 3]);
    let q = Measurement::from_unitary(swap, &ranks, &tol).expect("static");
    (p, q)
}

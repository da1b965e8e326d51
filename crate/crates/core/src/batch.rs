//! Batched comparisons over random algebra pairs.
//!
//! Each pair is derived from its own seed (`base_seed + index`), so a batch
//! is reproducible item by item and parallel evaluation cannot reorder the
//! random streams.

use crate::algebra::AlgebraSpec;
use crate::error::Result;
use crate::general::q_general_with;
use crate::matcore::Tolerance;
use crate::oracle::q_oracle_with;
use crate::par::{self, Execution};
use crate::random;

/// Shapes drawn for a random pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Commutative,
    General,
    /// Alternate between the two by index.
    Mixed,
}

/// Pair `index` of a batch: orders in `n_min..=n_max`, Haar unitaries.
pub fn random_pair(base_seed: u64, index: usize, n_min: usize, n_max: usize, shape: Shape) -> (AlgebraSpec, AlgebraSpec) {
    use rand::Rng;
    let mut rng = random::rng(base_seed.wrapping_add(index as u64));
    let n = rng.random_range(n_min..=n_max);
    let commutative = match shape {
        Shape::Commutative => true,
        Shape::General => false,
        Shape::Mixed => index % 2 == 0,
    };
    let a = random::algebra_spec(n, commutative, &mut rng);
    let b = random::algebra_spec(n, commutative, &mut rng);
    (a, b)
}

/// `|q_general − q_oracle|` per pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparison {
    pub n: usize,
    pub q_general: f64,
    pub q_oracle: f64,
}

impl Comparison {
    pub fn gap(&self) -> f64 {
        (self.q_general - self.q_oracle).abs()
    }
}

pub fn master_equivalence(
    pairs: &[(AlgebraSpec, AlgebraSpec)],
    tol: &Tolerance,
    exec: Execution,
) -> Result<Vec<Comparison>> {
    par::map_slice(exec, pairs, |(a, b)| {
        Ok(Comparison {
            n: a.n(),
            // Items already run in parallel; keep the inner work sequential.
            q_general: q_general_with(a, b, tol, Execution::Sequential)?,
            q_oracle: q_oracle_with(a, b, Execution::Sequential)?,
        })
    })
    .into_iter()
    .collect()
}

/// `q_general` over a batch.
pub fn q_batch(pairs: &[(AlgebraSpec, AlgebraSpec)], tol: &Tolerance, exec: Execution) -> Result<Vec<f64>> {
    par::map_slice(exec, pairs, |(a, b)| q_general_with(a, b, tol, Execution::Sequential))
        .into_iter()
        .collect()
}

/// `q_oracle` over a batch.
pub fn oracle_batch(pairs: &[(AlgebraSpec, AlgebraSpec)], exec: Execution) -> Result<Vec<f64>> {
    par::map_slice(exec, pairs, |(a, b)| q_oracle_with(a, b, Execution::Sequential))
        .into_iter()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_are_reproducible_and_sized() {
        for i in 0..20 {
            let (a, b) = random_pair(7, i, 2, 5, Shape::Mixed);
            assert_eq!(a.n(), b.n());
            assert!((2..=5).contains(&a.n()));
            if i % 2 == 0 {
                assert!(a.is_commutative() && b.is_commutative());
            }
            assert_eq!((a.clone(), b.clone()), random_pair(7, i, 2, 5, Shape::Mixed));
        }
    }

    #[test]
    fn batch_matches_oracle_in_both_modes() {
        let tol = Tolerance::default();
        let pairs: Vec<_> = (0..24).map(|i| random_pair(0, i, 2, 6, Shape::Mixed)).collect();
        let seq = master_equivalence(&pairs, &tol, Execution::Sequential).unwrap();
        let par = master_equivalence(&pairs, &tol, Execution::default()).unwrap();
        assert_eq!(seq, par);
        assert!(seq.iter().all(|c| c.gap() <= 1e-8));
        assert_eq!(q_batch(&pairs, &tol, Execution::default()).unwrap(), seq.iter().map(|c| c.q_general).collect::<Vec<_>>());
        assert_eq!(oracle_batch(&pairs, Execution::default()).unwrap(), seq.iter().map(|c| c.q_oracle).collect::<Vec<_>>());
    }
}

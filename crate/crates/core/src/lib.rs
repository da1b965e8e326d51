//! Measuring how far two unital *-subalgebras of `M_n` are from being
//! quasiorthogonal.
//!
//! Algebras are given in canonical form `U (⊕_k M_{a_k} ⊗ I_{m_k}) U*`
//! ([`AlgebraSpec`]). The measure `Q(A, B) = Tr(T_A T_B)` of the two
//! conditional-expectation superoperators is at least 1, with equality
//! exactly at quasiorthogonality.
//!
//! - [`commutative`]: `Q` from the block-index matrix `|U*V|²`, quasiable
//!   matrices, complex Hadamard matrices, 3×3 unistochasticity.
//! - [`general`]: the correction term for blocks with multiplicity.
//! - [`oracle`]: superoperators and the direct definition, used as ground truth.
//! - [`latin`]: Latin squares and abelian group algebras.
//! - [`mum`]: mutually unbiased measurements and their approximate version.
//!
//! With the default `parallel` feature, batch and table computations run on
//! rayon; [`Execution::Sequential`] (or building without the feature) keeps
//! everything on one thread with identical results.

pub mod algebra;
pub mod batch;
pub mod commutative;
pub mod error;
pub mod fixtures;
pub mod general;
pub mod latin;
pub mod matcore;
pub mod mum;
pub mod oracle;
pub mod par;
pub mod random;

pub use algebra::{AlgebraSpec, Block, Partition};
pub use error::{Error, Result};
pub use matcore::{ComplexMatrix, Tolerance};
pub use num_complex::Complex64;
pub use par::Execution;

/// Crate version, embedded in CLI reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

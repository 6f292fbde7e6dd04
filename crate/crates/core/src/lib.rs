//! Coexistence of finite subsets of interval effect algebras.
//!
//! An interval effect algebra is the interval `[0, u]` of a partially ordered
//! abelian group with the partial sum `a ⊕ b = a + b` defined whenever
//! `a + b ≤ u`. A finite subset `S` is *coexistent* when it lies in the range
//! of a single observable (an effect-algebra morphism out of a Boolean
//! algebra). This crate decides that question through *witness mappings*
//! `β: 2^S → E`, whose inclusion–exclusion (Möbius) values
//! `D_β(X, A) = Σ_{X⊆Z⊆A} (−1)^{|Z∖X|} β(Z)` must all be positive.
//!
//! Module map:
//! - [`groups`]: ordered abelian group carriers (integer vectors with a
//!   coordinatewise or cone order, Hermitian matrices with the Loewner order).
//! - [`effects`]: interval effect algebras, partial operations, morphisms,
//!   lattice and MV diagnostics.
//! - [`witness`]: β-tables, `D_β`, axiom verification and structural lemmas.
//! - [`observables`]: simple observables built from a witness, projective
//!   systems and coexistence certificates.
//! - [`canonical`]: the meet and product witness constructions, pair
//!   witnesses and the projection commuting criterion.
//! - [`oracle`]: brute-force coexistence and witness search on finite
//!   carriers.
//! - [`fixtures`]: the small algebras used throughout the tests.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod canonical;
pub mod effects;
mod error;
pub mod fixtures;
pub mod groups;
pub mod observables;
pub mod oracle;
pub mod witness;

pub use error::{Error, Result};

//! Exact decision procedures for pointed Hopf algebras `U(D, λ)` of finite
//! Cartan type and their Nichols algebras.

pub mod cartan;
pub mod datum;
pub mod format;
pub mod homology;
pub mod isomorphism;
pub mod scalars;

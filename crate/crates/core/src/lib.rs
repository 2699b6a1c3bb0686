//! Exact invariants of singular projective curves and of products of
//! cuspidal curves.
//!
//! The crate computes the dimension triple (abelian, torus, unipotent) of the
//! Picard variety of a singular curve, the generalized Albanese dimension of
//! `Γ_α × Γ_β`, and the thresholds on `N` governing surjectivity of the Gysin
//! map `Alb(C_N) → Alb(Γ_α × Γ_β)`. Every quantity is an exact integer or
//! rational; no floating point is used anywhere.
//!
//! - [`jets`]: truncated power series over ℚ and exact row reduction.
//! - [`semigroups`]: numerical semigroups, gaps and conductors.
//! - [`local_singularity`]: per-point classification and unipotent dimension.
//! - [`picard`]: global curve models and the Pic⁰ decomposition.
//! - [`albanese_product`]: product bases, ruling dimensions, Gysin thresholds.
//! - [`cli`]: the `picard` command-line front end.

pub mod albanese_product;
pub mod cli;
pub mod error;
pub mod jets;
pub mod local_singularity;
pub mod picard;
pub mod rational;
pub mod semigroups;

pub use error::{Error, Result};
pub use rational::Rational;

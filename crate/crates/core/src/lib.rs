//! Exact computations for submaximally symmetric vector ODEs of C-class.
//!
//! The crate builds the graded Lie algebra g(n,m), its cochain complexes
//! and harmonic theory, solves for lowest weight vectors of the C-class
//! modules, computes Tanaka prolongations, verifies algebraic models, and
//! evaluates jet-space invariants and point symmetries.

pub mod cochain;
pub mod error;
pub mod jet;
pub mod liealg;
pub mod linalg;
pub mod lwv;
pub mod models;
pub mod poly;
pub mod report;
pub mod reproduce;
pub mod scalar;
pub mod tanaka;

pub use error::{Error, Result};
pub use liealg::{AlgebraParams, BasisIndex, Bigrade, GVector, LieAlgebra};
pub use scalar::{Coefficient, Scalar};

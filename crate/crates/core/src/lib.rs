//! Exact mixed volumes of rational polytopes, mixed discriminants of
//! Hermitian matrices, and verification of Alexandrov–Fenchel type
//! inequalities together with their equality cases.

pub mod convexvol;
pub mod error;
mod gint;
pub mod harness;
pub mod ineq;
pub mod matrix;
pub mod mixdisc;
pub mod scalar;
pub mod shephard;
pub mod torus;

pub use error::{Error, Result};
pub use scalar::{GaussRat, Rat};

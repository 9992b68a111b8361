//! Exact-arithmetic workbench for self-modifying systems modelled as operator
//! triples: an update `U`, a discrimination apparatus `D`, and a
//! self-representation `R`, all acting on a finite-dimensional rational
//! configuration space.
//!
//! The crate computes commutators, commutants, and generated subalgebras
//! exactly; expands `[U, F(D)]` symbolically through the Leibniz rule; searches
//! commutants for nontrivial idempotents; and checks the liar collapse, the
//! diagonal defect, and the inclosure construction on concrete scenarios.

pub mod commutant;
pub mod doc;
pub mod error;
pub mod inclosure;
pub mod linalg;
pub mod ncexpr;
pub mod report;
pub mod scenarios;
pub mod triple;

pub use error::{Error, Result};
pub use linalg::{Matrix, Polynomial, Scalar, SubspaceBasis, Vector};

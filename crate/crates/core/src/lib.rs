//! Exact symbolic-numeric workbench for matrix-valued orthogonal polynomials
//! with Hermite-type weights.
//!
//! The crate verifies, in exact rational-function arithmetic over the declared
//! parameters, the structural identities of a family of conjugated-Hermite
//! weight matrices: operator symmetry, orthogonality and recursions of the
//! closed-form polynomial sequences, eigenfunction equations, Fourier-algebra
//! membership, and bounded-order certificates for the operator algebra
//! (dimension counts, polynomial-in-the-generator structure, fullness probes).
//! A numeric mode specializes parameters to floats and cross-checks the exact
//! results with Gauss-Hermite quadrature.

pub mod bochner;
pub mod diffop;
pub mod field;
pub mod hermite;
pub mod polymat;
pub mod report;
mod solve;
pub mod weight;

pub use diffop::{DiffOp, ExpDiffOp};
pub use field::{MultiPoly, ParamContext, Scalar};
pub use polymat::{ExpPolyMatrix, PolyMatrix, XPoly};
pub use weight::Weight;

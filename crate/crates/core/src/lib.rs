//! Exact cohomology of associative and Lie algebras over a commutative base
//! algebra, computed from an explicit bicomplex, together with the degree 2
//! and 3 cocycle calculus for abelian and crossed extensions.

pub mod bicomplex;
pub mod cochain;
pub mod error;
pub mod extension;
pub mod homology;
pub mod lie;
pub mod linalg;
pub mod presentation;
pub mod report;
pub mod scalar;
pub mod selftest;

pub use error::{Error, Result};
pub use linalg::{DenseMatrix, Echelon, SparseMatrix, SparseVec};
pub use presentation::{
    AssocAlgebra, AssocTriple, Bimodule, CommutativeAlgebra, LieAlgebra, LieModule, LieTriple, Presentation,
    ValidationReport,
};
pub use scalar::{FieldSpec, Scalar};

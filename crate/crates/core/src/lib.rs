//! Exact-arithmetic engine for the Spencer prolongation operator `δ^λ` on
//! symmetric powers of Lie algebras, its λ-dependent kernels, finite Spencer
//! total complexes, and Betti/Hodge bookkeeping.
//!
//! All arithmetic is over `ℚ` with arbitrary-precision integers.

pub mod complex;
pub mod error;
pub mod geometry;
pub mod lie;
pub mod linalg;
pub mod report;
pub mod sampling;
pub mod spencer;
pub mod sym;

pub use complex::{BigradedSpencer, CochainComplex, DegenerateCocycleSpace};
pub use error::{Error, Result};
pub use geometry::ManifoldData;
pub use lie::{AlgebraDiagnostics, DualFunctional, LieAlgebra};
pub use linalg::{MatrixQ, Rational};
pub use spencer::{KernelSpace, LeibnizMode, ModeFlags, PairingMode, SpencerOperator};
pub use sym::{Monomial, SymTensor};

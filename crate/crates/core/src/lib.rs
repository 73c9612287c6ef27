//! Numerical toolkit for Hardy spaces on the unit disk.
//!
//! Functions are stored as truncated Taylor series ([`DiskFunction`]) or as
//! samples on the roots of unity ([`BoundaryFunction`]). On top of these the
//! crate offers inner–outer factorization, Möbius automorphisms and weighted
//! composition operators, recovery of point-evaluation and weighted-composition
//! structure from functionals and operator matrices, and character extraction
//! for finite-dimensional algebras and modules.

pub mod engine;
pub mod error;
pub mod factorization;
pub mod function;
pub mod mobius;
pub mod module_gkz;

pub use error::{Error, Result};
pub use function::{BoundaryFunction, DiskFunction, Space};
pub use mobius::{MobiusMap, OperatorMatrix};

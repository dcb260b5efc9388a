//! Exact-arithmetic machinery for bilinear structures on the strictly
//! upper triangular matrix algebra UT_n(K): identity residuals, kernel
//! solving, the explicit product families, and the complete n = 3
//! classification with a finite-field orbit oracle.
//!
//! Everything is computed over exact fields (arbitrary-precision rationals
//! or prime fields) with deterministic, reproducible output.

pub mod algebra;
pub mod classify;
pub mod codec;
pub mod error;
mod exec;
pub mod families;
pub mod identities;
pub mod scalar;

pub use algebra::{BasisIndex, Dimension, Element, LinearMap, Product, UnitizedElement};
pub use error::{Error, Result};
pub use identities::{IdentityKind, KernelBasis, ResidualReport};
pub use scalar::{FieldSpec, Scalar};

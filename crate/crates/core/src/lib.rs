//! Graded algebras with weighted Hilbert norms.
//!
//! The crate models truncated tensor, symmetric, Grassmann, super and
//! pairing-deformed (Clifford, Wiener) algebras, the per-degree and
//! weighted norms placed on them, the second-quantization functor, and the
//! analyzers that bound `||ab|| <= gamma ||a|| ||b||` from above and below.

pub mod algebra;
pub mod analyzer;
pub mod error;
pub mod gamma;
pub mod norm;
pub mod scalar;

pub use algebra::{AlgebraKind, AlgebraSpec, GradedElement, Monomial, ScalarField};
pub use error::{Error, Result};
pub use scalar::{FloatScalar, Scalar};

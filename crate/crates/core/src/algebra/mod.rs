//! Finite-dimensional truncated graded algebras on a monomial basis.
//!
//! Elements are sparse combinations of canonical generator products
//! `M_I = e_{i1} ... e_{in}`. Class-1 kinds multiply by signed
//! concatenation; the paired kind adds pairing contractions.

mod element;
mod monomial;
mod nogo;
mod product;
mod serial;
mod spec;

pub use element::GradedElement;
pub use monomial::Monomial;
pub use nogo::find_nogo_witness;
pub use product::{mul, mul_twisted, product};
pub use serial::TermRecord;
pub use spec::{AlgebraKind, AlgebraSpec, ScalarField};

pub(crate) use element::accumulate;
pub(crate) use product::carrier_product;

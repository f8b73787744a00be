use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::element::GradedElement;
use super::monomial::Monomial;
use super::spec::{AlgebraKind, AlgebraSpec, ScalarField};
use crate::error::{Error, Result};
use crate::scalar::FloatScalar;

/// A degree-1 direction `f` with `(e0|f) = (f|f^2) = 0` and `(e0|f^2) >= 0`,
/// normalized to unit coefficient length.
///
/// Class-1 kinds always return `e1`. Paired kinds need `omega(f, f) >= 0`:
/// over the reals `f` is the top eigenvector of the symmetric part of the
/// pairing (`None` if that part is negative definite); over the complex
/// numbers `e1` is rotated by a phase.
pub fn find_nogo_witness<S: FloatScalar>(spec: &Arc<AlgebraSpec>) -> Result<Option<GradedElement<S>>> {
    if spec.kind != AlgebraKind::Paired {
        return GradedElement::generator(spec, 1).map(Some);
    }
    let d = spec.generators;
    let basis: Vec<Monomial> = spec.basis_of_degree(1);
    match spec.field {
        ScalarField::Real => {
            let sym = DMatrix::from_fn(d, d, |i, j| {
                let a = spec.pairing_entry(i as u16 + 1, j as u16 + 1).re;
                let b = spec.pairing_entry(j as u16 + 1, i as u16 + 1).re;
                0.5 * (a + b)
            });
            let eig = SymmetricEigen::new(sym);
            let (top, value) = eig
                .eigenvalues
                .iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |best, (k, &v)| if v > best.1 { (k, v) } else { best });
            if value < 0.0 {
                return Ok(None);
            }
            let v = eig.eigenvectors.column(top);
            let terms = basis.into_iter().zip(v.iter()).map(|(m, &x)| (m, S::from_f64(x)));
            Ok(Some(GradedElement::from_terms(spec, terms)))
        }
        ScalarField::Complex => {
            let w11 = spec.pairing_entry(1, 1);
            let mut theta = -0.5 * w11.arg();
            if theta < 0.0 {
                theta += std::f64::consts::PI;
            }
            let phase = S::from_complex(Complex64::from_polar(1.0, theta)).ok_or_else(|| {
                Error::Unsupported("complex algebra requires complex coefficients".into())
            })?;
            let e1 = GradedElement::<S>::generator(spec, 1)?;
            Ok(Some(e1.scale(&phase)))
        }
    }
}

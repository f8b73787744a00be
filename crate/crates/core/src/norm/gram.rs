use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::weights::factorial;
use crate::algebra::{AlgebraKind, AlgebraSpec, GradedElement, Monomial};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Per-degree inner product on generator monomials.
///
/// `Normalized` divides the permanent/determinant Gram of the letters by
/// `n!`; `Standard` omits that factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GramConvention {
    Normalized,
    Standard,
}

/// `<M, M>_n` for a canonical monomial with orthonormal generators.
///
/// Distinct canonical monomials are orthogonal, so this diagonal is the
/// whole Gram matrix. Repeated commuting letters contribute the
/// multiplicity factorials of the permanent; anticommuting letters never
/// repeat and the determinant of the identity is 1.
pub fn gram_diagonal(spec: &AlgebraSpec, m: &Monomial, gram: GramConvention) -> f64 {
    let n = m.degree();
    let numerator = match spec.carrier_kind() {
        AlgebraKind::Tensor | AlgebraKind::Antisymmetric => 1.0,
        AlgebraKind::Symmetric | AlgebraKind::Super => m
            .multiplicities()
            .filter(|(g, _)| !spec.is_odd(*g))
            .map(|(_, k)| factorial(k))
            .product(),
        AlgebraKind::Paired => unreachable!("carrier kind is class 1"),
    };
    match (gram, spec.carrier_kind()) {
        (_, AlgebraKind::Tensor) | (GramConvention::Standard, _) => numerator,
        (GramConvention::Normalized, _) => numerator / factorial(n),
    }
}

/// `(a_n | b_n)` for homogeneous elements of a common degree, conjugate
/// linear in the first argument.
pub fn degree_inner<S: Scalar>(a: &GradedElement<S>, b: &GradedElement<S>, gram: GramConvention) -> Result<Complex64> {
    if !a.same_algebra(b) {
        return Err(Error::SpecMismatch);
    }
    let da = homogeneous(a)?;
    let db = homogeneous(b)?;
    if let (Some(x), Some(y)) = (da, db) {
        if x != y {
            return Err(Error::DegreeMismatch { expected: x, found: y });
        }
    }
    let spec = a.spec();
    let mut acc = Complex64::new(0.0, 0.0);
    for (m, ca) in a.terms() {
        let cb = b.coeff(m);
        if cb.is_zero() {
            continue;
        }
        acc += ca.to_complex().conj() * cb.to_complex() * gram_diagonal(spec, m, gram);
    }
    Ok(acc)
}

fn homogeneous<S: Scalar>(a: &GradedElement<S>) -> Result<Option<usize>> {
    if a.is_zero() {
        return Ok(None);
    }
    match a.homogeneous_degree() {
        Some(n) => Ok(Some(n)),
        None => Err(Error::DegreeMismatch {
            expected: a.terms().next().map(|(m, _)| m.degree()).unwrap_or(0),
            found: a.max_degree().unwrap_or(0),
        }),
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;

    #[test]
    fn normalized_examples() {
        let g = Arc::new(AlgebraSpec::grassmann(3, 3).unwrap());
        let e12 = GradedElement::<f64>::monomial(&g, &[1, 2]).unwrap();
        let e13 = GradedElement::<f64>::monomial(&g, &[1, 3]).unwrap();
        assert_eq!(degree_inner(&e12, &e12, GramConvention::Normalized).unwrap().re, 0.5);
        assert_eq!(degree_inner(&e12, &e13, GramConvention::Normalized).unwrap().re, 0.0);
        assert_eq!(degree_inner(&e12, &e12, GramConvention::Standard).unwrap().re, 1.0);

        let s = Arc::new(AlgebraSpec::symmetric(2, 3).unwrap());
        let e11 = GradedElement::<f64>::monomial(&s, &[1, 1]).unwrap();
        assert_eq!(degree_inner(&e11, &e11, GramConvention::Normalized).unwrap().re, 1.0);
        assert_eq!(degree_inner(&e11, &e11, GramConvention::Standard).unwrap().re, 2.0);
        let e112 = GradedElement::<f64>::monomial(&s, &[1, 1, 2]).unwrap();
        assert_eq!(degree_inner(&e112, &e112, GramConvention::Normalized).unwrap().re, 2.0 / 6.0);
    }

    #[test]
    fn super_uses_even_multiplicities_only() {
        // x1 even, t2 odd: x1 x1 t2 has Gram 2!/3!
        let s = Arc::new(AlgebraSpec::superalgebra(2, 1, 3).unwrap());
        let m = GradedElement::<f64>::monomial(&s, &[1, 1, 2]).unwrap();
        assert!((degree_inner(&m, &m, GramConvention::Normalized).unwrap().re - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn degree_mismatch_is_an_error() {
        let g = Arc::new(AlgebraSpec::grassmann(3, 3).unwrap());
        let e1 = GradedElement::<f64>::generator(&g, 1).unwrap();
        let e12 = GradedElement::<f64>::monomial(&g, &[1, 2]).unwrap();
        assert!(matches!(
            degree_inner(&e1, &e12, GramConvention::Normalized),
            Err(Error::DegreeMismatch { .. })
        ));
        let mixed = &e1 + &e12;
        assert!(degree_inner(&mixed, &mixed, GramConvention::Normalized).is_err());
        let zero = GradedElement::zero(&g);
        assert_eq!(degree_inner(&zero, &e12, GramConvention::Normalized).unwrap().re, 0.0);
    }
}

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;


use super::monomial::Monomial;
use super::spec::AlgebraSpec;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Sparse linear combination of canonical monomials of one algebra.
///
/// No zero coefficients are stored. `truncated` records that a product
/// feeding this element dropped terms above the truncation degree.
#[derive(Clone, Debug)]
pub struct GradedElement<S> {
    spec: Arc<AlgebraSpec>,
    terms: BTreeMap<Monomial, S>,
    truncated: bool,
}

pub(crate) fn accumulate<S: Scalar>(terms: &mut BTreeMap<Monomial, S>, m: Monomial, c: S) {
    if c.is_zero() {
        return;
    }
    match terms.entry(m) {
        std::collections::btree_map::Entry::Vacant(slot) => {
            slot.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut slot) => {
            let sum = slot.get().clone() + c;
            if sum.is_zero() {
                slot.remove();
            } else {
                *slot.get_mut() = sum;
            }
        }
    }
}

impl<S: Scalar> GradedElement<S> {
    pub fn zero(spec: &Arc<AlgebraSpec>) -> Self {
        GradedElement {
            spec: Arc::clone(spec),
            terms: BTreeMap::new(),
            truncated: false,
        }
    }

    /// The unit `e0`, the empty word with coefficient 1.
    pub fn unit(spec: &Arc<AlgebraSpec>) -> Self {
        let mut e = Self::zero(spec);
        e.terms.insert(Monomial::unit(), S::one());
        e
    }

    /// The generator product `e_{w1} e_{w2} ... e_{wn}` brought into
    /// canonical form. Words with a repeated odd letter give zero.
    pub fn monomial(spec: &Arc<AlgebraSpec>, word: &[usize]) -> Result<Self> {
        if word.len() > spec.truncation {
            return Err(Error::DegreeExceedsTruncation {
                degree: word.len(),
                truncation: spec.truncation,
            });
        }
        let mut w = Vec::with_capacity(word.len());
        for &g in word {
            if g == 0 || g > spec.generators {
                return Err(Error::GeneratorOutOfRange {
                    index: g,
                    generators: spec.generators,
                });
            }
            w.push(g as u16);
        }
        let mut e = Self::zero(spec);
        if let Some(negated) = spec.canonicalize(&mut w) {
            let c = if negated { -S::one() } else { S::one() };
            e.terms.insert(Monomial::from_canonical(w), c);
        }
        Ok(e)
    }

    pub fn generator(spec: &Arc<AlgebraSpec>, index: usize) -> Result<Self> {
        Self::monomial(spec, &[index])
    }

    /// Builds an element from canonical monomials (as produced by
    /// [`AlgebraSpec::basis`]).
    pub fn from_terms(spec: &Arc<AlgebraSpec>, terms: impl IntoIterator<Item = (Monomial, S)>) -> Self {
        let mut e = Self::zero(spec);
        for (m, c) in terms {
            debug_assert!(m.degree() <= spec.truncation);
            accumulate(&mut e.terms, m, c);
        }
        e
    }

    pub(crate) fn from_parts(spec: &Arc<AlgebraSpec>, terms: BTreeMap<Monomial, S>, truncated: bool) -> Self {
        GradedElement {
            spec: Arc::clone(spec),
            terms,
            truncated,
        }
    }

    pub fn spec(&self) -> &Arc<AlgebraSpec> {
        &self.spec
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub(crate) fn term_map(&self) -> &BTreeMap<Monomial, S> {
        &self.terms
    }

    pub fn coeff(&self, m: &Monomial) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// Degree `n` of a homogeneous non-zero element.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let lo = self.terms.keys().next()?.degree();
        (lo == self.max_degree()?).then_some(lo)
    }

    /// The degree-`n` component `a_n`.
    pub fn project_degree(&self, n: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree() == n)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Self::from_parts(&self.spec, terms, self.truncated)
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(&self.spec);
        out.truncated = self.truncated;
        for (m, x) in &self.terms {
            accumulate(&mut out.terms, m.clone(), x.clone() * c.clone());
        }
        out
    }

    pub fn same_algebra(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.spec, &other.spec) || *self.spec == *other.spec
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if !self.same_algebra(other) {
            return Err(Error::SpecMismatch);
        }
        let mut out = self.clone();
        out.truncated |= other.truncated;
        for (m, c) in &other.terms {
            accumulate(&mut out.terms, m.clone(), c.clone());
        }
        Ok(out)
    }

    /// Coefficient-wise conversion into another scalar type.
    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> GradedElement<T> {
        let mut out = GradedElement::zero(&self.spec);
        out.truncated = self.truncated;
        for (m, c) in &self.terms {
            accumulate(&mut out.terms, m.clone(), f(c));
        }
        out
    }

    /// Euclidean norm of the coefficient vector.
    pub fn coefficient_norm(&self) -> f64 {
        self.terms.values().map(Scalar::abs_sq).sum::<f64>().sqrt()
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.abs_sq().sqrt())
            .fold(0.0, f64::max)
    }
}

impl<S: Scalar> PartialEq for GradedElement<S> {
    fn eq(&self, other: &Self) -> bool {
        self.same_algebra(other) && self.terms == other.terms
    }
}

impl<S: Scalar> Add for &GradedElement<S> {
    type Output = GradedElement<S>;

    /// # Panics
    /// When the operands belong to different algebras.
    fn add(self, rhs: Self) -> GradedElement<S> {
        self.checked_add(rhs).expect("adding elements of different algebras")
    }
}

impl<S: Scalar> Add for GradedElement<S> {
    type Output = GradedElement<S>;

    fn add(self, rhs: Self) -> GradedElement<S> {
        &self + &rhs
    }
}

impl<S: Scalar> Neg for &GradedElement<S> {
    type Output = GradedElement<S>;

    fn neg(self) -> GradedElement<S> {
        self.scale(&-S::one())
    }
}

impl<S: Scalar> Neg for GradedElement<S> {
    type Output = GradedElement<S>;

    fn neg(self) -> GradedElement<S> {
        -&self
    }
}

impl<S: Scalar> Sub for &GradedElement<S> {
    type Output = GradedElement<S>;

    fn sub(self, rhs: Self) -> GradedElement<S> {
        self + &(-rhs)
    }
}

impl<S: Scalar> Sub for GradedElement<S> {
    type Output = GradedElement<S>;

    fn sub(self, rhs: Self) -> GradedElement<S> {
        &self - &rhs
    }
}

impl<S: Scalar> fmt::Display for GradedElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c:?}){m}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_construction() {
        let g = Arc::new(AlgebraSpec::grassmann(3, 3).unwrap());
        let e21 = GradedElement::<f64>::monomial(&g, &[2, 1]).unwrap();
        let e12 = GradedElement::<f64>::monomial(&g, &[1, 2]).unwrap();
        assert_eq!(e21, -&e12);
        assert!(GradedElement::<f64>::monomial(&g, &[1, 1]).unwrap().is_zero());
        assert!(matches!(
            GradedElement::<f64>::monomial(&g, &[4]),
            Err(Error::GeneratorOutOfRange { index: 4, .. })
        ));
        assert!(matches!(
            GradedElement::<f64>::monomial(&g, &[1, 2, 3, 1]),
            Err(Error::DegreeExceedsTruncation { .. })
        ));

        let s = Arc::new(AlgebraSpec::symmetric(2, 2).unwrap());
        let a = GradedElement::<f64>::monomial(&s, &[2, 1]).unwrap();
        let b = GradedElement::<f64>::monomial(&s, &[1, 2]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.coeff(&s.basis_of_degree(2)[1]), 1.0);
    }

    #[test]
    fn degree_projection() {
        let g = Arc::new(AlgebraSpec::grassmann(2, 2).unwrap());
        let e0 = GradedElement::<f64>::unit(&g);
        let e1 = GradedElement::generator(&g, 1).unwrap();
        let x = &e0 + &e1.scale(&2.0);
        assert_eq!(x.project_degree(0), e0);
        assert_eq!(x.project_degree(1), e1.scale(&2.0));
        assert!(x.project_degree(2).is_zero());
        assert_eq!(x.project_degree(0) + x.project_degree(1) + x.project_degree(2), x);
        assert_eq!(x.homogeneous_degree(), None);
        assert_eq!(e1.homogeneous_degree(), Some(1));
    }
}

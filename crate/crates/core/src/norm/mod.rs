//! Weighted Hilbert norms `||a||^2 = sum_n w_n ||a_n||_n^2` on graded
//! algebras, optionally twisted by `Gamma(A)^rho` inside each degree.

mod gram;
mod permanent;
mod weights;

use num_complex::Complex64;
use serde::Serialize;

pub use gram::{degree_inner, gram_diagonal, GramConvention};
pub use permanent::{permanent, PERMANENT_MAX_DIM};
pub use weights::{ln_factorial, weight, WeightSpec};

use crate::algebra::{AlgebraSpec, GradedElement, Monomial};
use crate::error::{Error, Result};
use crate::gamma::GammaOperator;
use crate::scalar::Scalar;

/// Smallest eigenvalue a twist operator may have.
pub const TWIST_LOWER_BOUND: f64 = 2.0;

/// `Gamma(A)^exponent` applied inside every degree norm.
#[derive(Debug, Clone, Serialize)]
pub struct GammaTwist {
    pub operator: GammaOperator,
    pub exponent: f64,
    #[serde(skip)]
    powered: GammaOperator,
}

impl GammaTwist {
    /// The operator must be symmetric positive with `A >= 2 id`.
    pub fn new(operator: GammaOperator, exponent: f64) -> Result<Self> {
        let lowest = operator.min_eigenvalue().ok_or(Error::MissingSpectralForm)?;
        if lowest < TWIST_LOWER_BOUND - 1e-12 {
            return Err(Error::InvalidNorm(format!(
                "twist operator has eigenvalue {lowest} below {TWIST_LOWER_BOUND}"
            )));
        }
        let powered = operator.power(exponent)?;
        Ok(GammaTwist { operator, exponent, powered })
    }

    pub fn powered(&self) -> &GammaOperator {
        &self.powered
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NormSpec {
    pub weights: WeightSpec,
    pub gram: GramConvention,
    pub twist: Option<GammaTwist>,
}

impl NormSpec {
    pub fn new(weights: WeightSpec, gram: GramConvention) -> Result<Self> {
        weights.validate()?;
        Ok(NormSpec { weights, gram, twist: None })
    }

    /// Normalized Gram with the given weights.
    pub fn normalized(weights: WeightSpec) -> Result<Self> {
        Self::new(weights, GramConvention::Normalized)
    }

    pub fn with_twist(mut self, twist: GammaTwist) -> Self {
        self.twist = Some(twist);
        self
    }

    /// The weight family actually applied, with the `2^(rho n)` factor
    /// removed under a twist.
    pub fn effective_weights(&self) -> WeightSpec {
        match self.twist {
            Some(_) => self.weights.without_rho_factor(),
            None => self.weights.clone(),
        }
    }

    /// Effective `w_n`. Under a twist the `2^(rho n)` factor of the
    /// sigma-rho-s family is replaced by the operator.
    pub fn weight(&self, n: usize) -> Result<f64> {
        match (&self.twist, &self.weights) {
            (Some(_), w @ WeightSpec::SigmaRhoS { .. }) => w.without_rho_factor().weight(n),
            (_, w) => w.weight(n),
        }
    }

    fn twisted<S: Scalar>(&self, a: &GradedElement<S>) -> Result<GradedElement<S>> {
        match &self.twist {
            Some(t) => t.powered.apply(a),
            None => Ok(a.clone()),
        }
    }

    pub fn inner<S: Scalar>(&self, a: &GradedElement<S>, b: &GradedElement<S>) -> Result<Complex64> {
        if !a.same_algebra(b) {
            return Err(Error::SpecMismatch);
        }
        if a.is_truncated() || b.is_truncated() {
            return Err(Error::Truncated);
        }
        let a = self.twisted(a)?;
        let b = self.twisted(b)?;
        let spec = a.spec();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut degree = usize::MAX;
        let mut w = 0.0;
        for (m, ca) in a.terms() {
            let cb = b.coeff(m);
            if cb.is_zero() {
                continue;
            }
            if m.degree() != degree {
                degree = m.degree();
                w = self.weight(degree)?;
            }
            acc += ca.to_complex().conj() * cb.to_complex() * (w * gram_diagonal(spec, m, self.gram));
        }
        Ok(acc)
    }

    pub fn norm_sq<S: Scalar>(&self, a: &GradedElement<S>) -> Result<f64> {
        Ok(self.inner(a, a)?.re.max(0.0))
    }

    pub fn norm<S: Scalar>(&self, a: &GradedElement<S>) -> Result<f64> {
        self.norm_sq(a).map(f64::sqrt)
    }

    /// `||M||` of a single basis monomial.
    pub fn monomial_norm(&self, spec: &AlgebraSpec, m: &Monomial) -> Result<f64> {
        let base = (self.weight(m.degree())? * gram_diagonal(spec, m, self.gram)).sqrt();
        match &self.twist {
            None => Ok(base),
            Some(t) if t.powered.is_diagonal() => {
                let diag = t.powered.matrix().diagonal();
                Ok(base * m.word().iter().map(|&g| diag[g as usize - 1]).product::<f64>().abs())
            }
            Some(_) => Err(Error::Unsupported(
                "monomials are not orthogonal under a non-diagonal twist".into(),
            )),
        }
    }

    /// Whether distinct basis monomials are orthogonal under this norm.
    pub fn has_diagonal_gram(&self) -> bool {
        self.twist.as_ref().is_none_or(|t| t.powered.is_diagonal())
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::{mul, AlgebraSpec};

    #[test]
    fn unit_has_norm_one() {
        let g = Arc::new(AlgebraSpec::grassmann(3, 3).unwrap());
        let e0 = GradedElement::<f64>::unit(&g);
        for w in [
            WeightSpec::FactorialInv,
            WeightSpec::FactorialInvShift,
            WeightSpec::StandardFactorial,
            WeightSpec::sigma_rho_s(-2.0, 1.0, 1.0),
        ] {
            for gram in [GramConvention::Normalized, GramConvention::Standard] {
                assert_eq!(NormSpec::new(w.clone(), gram).unwrap().norm(&e0).unwrap(), 1.0);
            }
        }
    }

    #[test]
    fn composite_norm_examples() {
        let g = Arc::new(AlgebraSpec::grassmann(3, 3).unwrap());
        let lambda = 1.3;
        let a = &GradedElement::<f64>::unit(&g) + &GradedElement::generator(&g, 1).unwrap().scale(&lambda);
        let n = NormSpec::normalized(WeightSpec::FactorialInvShift).unwrap();
        assert!((n.norm_sq(&a).unwrap() - (1.0 + lambda * lambda)).abs() < 1e-15);

        let e12 = GradedElement::<f64>::monomial(&g, &[1, 2]).unwrap();
        let n = NormSpec::normalized(WeightSpec::explicit(vec![1.0, 1.0, 0.3]).unwrap()).unwrap();
        assert!((n.norm_sq(&e12).unwrap() - 0.15).abs() < 1e-15);
    }

    #[test]
    fn truncated_elements_are_rejected() {
        let s = Arc::new(AlgebraSpec::symmetric(1, 1).unwrap());
        let e1 = GradedElement::<f64>::generator(&s, 1).unwrap();
        let sq = mul(&e1, &e1).unwrap();
        let n = NormSpec::normalized(WeightSpec::FactorialInv).unwrap();
        assert_eq!(n.norm(&sq), Err(Error::Truncated));
    }

    #[test]
    fn diagonal_twist_scales_monomials() {
        let g = Arc::new(AlgebraSpec::grassmann(2, 2).unwrap());
        let op = GammaOperator::diagonal(&[2.0, 3.0]).unwrap();
        let n = NormSpec::normalized(WeightSpec::flat())
            .unwrap()
            .with_twist(GammaTwist::new(op, 1.0).unwrap());
        let e12 = GradedElement::<f64>::monomial(&g, &[1, 2]).unwrap();
        // ||Gamma(A) e12||^2 = 36 * 1/2
        assert!((n.norm_sq(&e12).unwrap() - 18.0).abs() < 1e-12);
        let m = &g.basis_of_degree(2)[0];
        assert!((n.monomial_norm(&g, m).unwrap() - 18f64.sqrt()).abs() < 1e-12);
        assert!(GammaTwist::new(GammaOperator::diagonal(&[1.0, 3.0]).unwrap(), 1.0).is_err());
    }
}

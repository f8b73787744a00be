//! Class-1 products (signed concatenation) and the pairing-deformed
//! class-2 product.

use std::collections::{BTreeMap, HashMap};


use super::element::{accumulate, GradedElement};
use super::monomial::Monomial;
use super::spec::{AlgebraKind, AlgebraSpec};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

type Terms<S> = BTreeMap<Monomial, S>;

fn check_same<S: Scalar>(a: &GradedElement<S>, b: &GradedElement<S>) -> Result<()> {
    if a.same_algebra(b) {
        Ok(())
    } else {
        Err(Error::SpecMismatch)
    }
}

/// Signed product of two canonical words on the class-1 carrier of `spec`.
/// Returns `None` when the product vanishes.
pub(crate) fn carrier_product(spec: &AlgebraSpec, left: &[u16], right: &[u16]) -> Option<(Vec<u16>, bool)> {
    let mut w = Vec::with_capacity(left.len() + right.len());
    w.extend_from_slice(left);
    w.extend_from_slice(right);
    let negated = spec.canonicalize(&mut w)?;
    Some((w, negated))
}

/// Product for class-1 kinds: tensor concatenation, symmetric union,
/// signed antisymmetric union and Koszul-signed super union. Terms above
/// the truncation degree are dropped and the result is flagged.
pub fn mul<S: Scalar>(a: &GradedElement<S>, b: &GradedElement<S>) -> Result<GradedElement<S>> {
    check_same(a, b)?;
    let spec = a.spec();
    if !spec.is_class_one() {
        return Err(Error::WrongKind { op: "mul", kind: spec.kind });
    }
    let mut terms = Terms::new();
    let mut truncated = a.is_truncated() || b.is_truncated();
    for (ma, ca) in a.terms() {
        for (mb, cb) in b.terms() {
            if ma.degree() + mb.degree() > spec.truncation {
                // the product may still vanish, only flag real losses
                if carrier_product(spec, ma.word(), mb.word()).is_some() {
                    truncated = true;
                }
                continue;
            }
            if let Some((w, negated)) = carrier_product(spec, ma.word(), mb.word()) {
                let c = ca.clone() * cb.clone();
                accumulate(&mut terms, Monomial::from_canonical(w), if negated { -c } else { c });
            }
        }
    }
    Ok(GradedElement::from_parts(spec, terms, truncated))
}

struct Twisted<'a, S> {
    spec: &'a AlgebraSpec,
    omega: Vec<Vec<S>>,
    truncated: bool,
    memo: HashMap<Vec<u16>, Terms<S>>,
}

impl<S: Scalar> Twisted<'_, S> {
    fn contraction_sign(&self, position: usize) -> bool {
        self.spec.parity == 1 && position % 2 == 1
    }

    /// `e_i` times `x`: class-1 term plus the contraction of `e_i` against
    /// every letter of each monomial.
    fn left_generator(&mut self, i: u16, x: &Terms<S>) -> Terms<S> {
        let mut out = Terms::new();
        for (m, c) in x {
            if let Some((w, negated)) = carrier_product(self.spec, &[i], m.word()) {
                if w.len() > self.spec.truncation {
                    self.truncated = true;
                } else {
                    let c = if negated { -c.clone() } else { c.clone() };
                    accumulate(&mut out, Monomial::from_canonical(w), c);
                }
            }
            for (k, &j) in m.word().iter().enumerate() {
                let om = &self.omega[i as usize - 1][j as usize - 1];
                if om.is_zero() {
                    continue;
                }
                let mut w = m.word().to_vec();
                w.remove(k);
                let t = c.clone() * om.clone();
                let t = if self.contraction_sign(k) { -t } else { t };
                accumulate(&mut out, Monomial::from_canonical(w), t);
            }
        }
        out
    }

    /// `M_word` times `b`, using `M_(i,rest) = e_i M_rest - contractions`.
    fn left_monomial(&mut self, word: &[u16], b: &Terms<S>) -> Terms<S> {
        if word.is_empty() {
            return b.clone();
        }
        if let Some(hit) = self.memo.get(word) {
            return hit.clone();
        }
        let (i, rest) = (word[0], &word[1..]);
        let inner = self.left_monomial(rest, b);
        let mut out = self.left_generator(i, &inner);
        for (k, &j) in rest.iter().enumerate() {
            let om = self.omega[i as usize - 1][j as usize - 1].clone();
            if om.is_zero() {
                continue;
            }
            let mut w = rest.to_vec();
            w.remove(k);
            let sub = self.left_monomial(&w, b);
            let factor = if self.contraction_sign(k) { om } else { -om };
            for (m, c) in sub {
                accumulate(&mut out, m, c * factor.clone());
            }
        }
        self.memo.insert(word.to_vec(), out.clone());
        out
    }
}

/// Product for the paired kind: the associative product on the class-1
/// carrier generated by `e_i e_j = (class-1 part) + omega(e_i, e_j) e0`.
pub fn mul_twisted<S: Scalar>(a: &GradedElement<S>, b: &GradedElement<S>) -> Result<GradedElement<S>> {
    check_same(a, b)?;
    let spec = a.spec();
    if spec.kind != AlgebraKind::Paired {
        return Err(Error::WrongKind { op: "mul_twisted", kind: spec.kind });
    }
    let pairing = spec.pairing.as_ref().ok_or(Error::InvalidSpec("missing pairing".into()))?;
    let omega = pairing
        .iter()
        .map(|row| {
            row.iter()
                .map(|&z| S::from_complex(z).ok_or_else(|| Error::PairingNotRepresentable(z.to_string())))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut tw = Twisted {
        spec,
        omega,
        truncated: a.is_truncated() || b.is_truncated(),
        memo: HashMap::new(),
    };
    let mut terms = Terms::new();
    for (m, c) in a.terms() {
        for (mm, cc) in tw.left_monomial(m.word(), b.term_map()) {
            accumulate(&mut terms, mm, c.clone() * cc);
        }
    }
    Ok(GradedElement::from_parts(spec, terms, tw.truncated))
}

/// The algebra's own product, dispatching on its kind.
pub fn product<S: Scalar>(a: &GradedElement<S>, b: &GradedElement<S>) -> Result<GradedElement<S>> {
    if a.spec().kind == AlgebraKind::Paired {
        mul_twisted(a, b)
    } else {
        mul(a, b)
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use num_rational::Rational64;

    use super::*;

    fn el(spec: &Arc<AlgebraSpec>, word: &[usize]) -> GradedElement<f64> {
        GradedElement::monomial(spec, word).unwrap()
    }

    #[test]
    fn grassmann_square_of_unit_plus_generator() {
        let g = Arc::new(AlgebraSpec::grassmann(3, 3).unwrap());
        let lambda = 0.7;
        let a = &GradedElement::unit(&g) + &el(&g, &[1]).scale(&lambda);
        let sq = mul(&a, &a).unwrap();
        let expected = &GradedElement::unit(&g) + &el(&g, &[1]).scale(&(2.0 * lambda));
        assert_eq!(sq, expected);
        assert!(!sq.is_truncated());
    }

    #[test]
    fn disjoint_blades_concatenate() {
        let g = Arc::new(AlgebraSpec::grassmann(4, 4).unwrap());
        let p = mul(&el(&g, &[1, 2]), &el(&g, &[3, 4])).unwrap();
        assert_eq!(p, el(&g, &[1, 2, 3, 4]));
        let q = mul(&el(&g, &[2, 4]), &el(&g, &[1, 3])).unwrap();
        // 2 4 1 3 -> 1 2 3 4 takes three transpositions
        assert_eq!(q, -el(&g, &[1, 2, 3, 4]));
    }

    #[test]
    fn super_sign_rules() {
        // x1 even, t2 t3 odd
        let s = Arc::new(AlgebraSpec::superalgebra(3, 1, 3).unwrap());
        let x = el(&s, &[1]);
        let t = el(&s, &[2]);
        assert!(mul(&t, &t).unwrap().is_zero());
        assert_eq!(mul(&x, &t).unwrap(), mul(&t, &x).unwrap());
        let u = el(&s, &[3]);
        assert_eq!(mul(&t, &u).unwrap(), -mul(&u, &t).unwrap());
        assert_eq!(mul(&x, &x).unwrap(), el(&s, &[1, 1]));
    }

    #[test]
    fn truncation_is_flagged() {
        let s = Arc::new(AlgebraSpec::symmetric(2, 2).unwrap());
        let p = mul(&el(&s, &[1, 2]), &el(&s, &[1])).unwrap();
        assert!(p.is_zero());
        assert!(p.is_truncated());
        // vanishing products lose nothing
        let g = Arc::new(AlgebraSpec::grassmann(2, 1).unwrap());
        let p = mul(&el(&g, &[1]), &el(&g, &[1])).unwrap();
        assert!(p.is_zero() && !p.is_truncated());
    }

    #[test]
    fn clifford_generator_relations() {
        let c = Arc::new(AlgebraSpec::clifford(3, 3).unwrap());
        let e0 = GradedElement::<f64>::unit(&c);
        let e1 = el(&c, &[1]);
        let e2 = el(&c, &[2]);
        assert_eq!(mul_twisted(&e1, &e1).unwrap(), e0);
        let anti = &mul_twisted(&e1, &e2).unwrap() + &mul_twisted(&e2, &e1).unwrap();
        assert!(anti.is_zero());
        // e12 e12 = e1 e2 e1 e2 = -1
        let e12 = el(&c, &[1, 2]);
        assert_eq!(mul_twisted(&e12, &e12).unwrap(), -e0.clone());
        assert!(matches!(mul(&e1, &e2), Err(Error::WrongKind { .. })));
        let g = Arc::new(AlgebraSpec::grassmann(2, 2).unwrap());
        let f = el(&g, &[1]);
        assert!(matches!(mul_twisted(&f, &f), Err(Error::WrongKind { .. })));
    }

    #[test]
    fn general_pairing_relation() {
        let w = vec![vec![2.0, 3.0], vec![-1.0, 0.5]];
        for chi in [0u8, 1] {
            let p = Arc::new(AlgebraSpec::paired(chi, w.clone(), 2).unwrap());
            for i in 1..=2usize {
                for j in 1..=2usize {
                    let lhs = mul_twisted(&el(&p, &[i]), &el(&p, &[j])).unwrap();
                    let class_one = GradedElement::<f64>::monomial(&p, &[i, j]).unwrap();
                    let rest = &lhs - &class_one;
                    let expected = GradedElement::unit(&p).scale(&w[i - 1][j - 1]);
                    assert_eq!(rest, expected, "chi={chi} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn mismatched_specs_rejected() {
        let a = Arc::new(AlgebraSpec::grassmann(2, 2).unwrap());
        let b = Arc::new(AlgebraSpec::grassmann(3, 2).unwrap());
        assert_eq!(mul(&el(&a, &[1]), &el(&b, &[1])), Err(Error::SpecMismatch));
    }

    #[test]
    fn exact_rational_clifford() {
        let c = Arc::new(AlgebraSpec::paired(1, vec![vec![1.0, 2.0], vec![0.0, -1.0]], 2).unwrap());
        let e1 = GradedElement::<Rational64>::generator(&c, 1).unwrap();
        let e2 = GradedElement::<Rational64>::generator(&c, 2).unwrap();
        let anti = &mul_twisted(&e1, &e2).unwrap() + &mul_twisted(&e2, &e1).unwrap();
        assert_eq!(anti, GradedElement::unit(&c).scale(&Rational64::from_integer(2)));
    }
}

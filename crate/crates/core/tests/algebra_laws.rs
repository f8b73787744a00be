mod common;

use std::sync::Arc;

use common::*;
use gradenorm_core::algebra::product;
use gradenorm_core::{AlgebraKind, AlgebraSpec, GradedElement, Monomial};
use num_rational::Rational64;
use num_traits::Zero;
use proptest::prelude::*;
use rand::Rng;

fn odd_count(spec: &AlgebraSpec, m: &Monomial) -> usize {
    m.word().iter().filter(|&&g| spec.is_odd(g)).count()
}

/// Blade product on bitmasks: `Some(sign, mask)` or `None` for zero.
/// With `square = Some(s)` every shared generator contracts to `s`.
fn blade_oracle(a: u32, b: u32, square: Option<f64>) -> Option<(f64, u32)> {
    let mut swaps = 0;
    for i in 0..32 {
        if b >> i & 1 == 1 {
            swaps += (a >> (i + 1)).count_ones();
        }
    }
    let sign = if swaps % 2 == 0 { 1.0 } else { -1.0 };
    let shared = a & b;
    match (shared, square) {
        (0, _) => Some((sign, a | b)),
        (_, None) => None,
        (s, Some(q)) => Some((sign * q.powi(s.count_ones() as i32), a ^ b)),
    }
}

fn mask(m: &Monomial) -> u32 {
    m.word().iter().fold(0, |acc, &g| acc | 1 << (g - 1))
}

fn from_mask(spec: &Arc<AlgebraSpec>, mask: u32) -> GradedElement<f64> {
    let word: Vec<usize> = (0..32).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
    GradedElement::monomial(spec, &word).unwrap()
}

#[test]
fn grassmann_and_clifford_match_bitmask_oracle() {
    for (spec, square) in [
        (Arc::new(AlgebraSpec::grassmann(4, 4).unwrap()), None),
        (Arc::new(AlgebraSpec::clifford(4, 8).unwrap()), Some(1.0)),
    ] {
        let basis = spec.basis(4);
        for x in &basis {
            for y in &basis {
                let ex = GradedElement::from_terms(&spec, [(x.clone(), 1.0)]);
                let ey = GradedElement::from_terms(&spec, [(y.clone(), 1.0)]);
                let got = product(&ex, &ey).unwrap();
                let want = match blade_oracle(mask(x), mask(y), square) {
                    Some((s, m)) => from_mask(&spec, m).scale(&s),
                    None => GradedElement::zero(&spec),
                };
                assert_eq!(got, want, "{spec}: {x} * {y}");
            }
        }
    }
}

#[test]
fn exact_rational_associativity_is_exhaustive_on_small_algebras() {
    let omega = vec![vec![1.0, 2.0, 0.0], vec![-1.0, 0.0, 3.0], vec![0.0, 1.0, -2.0]];
    let specs = [
        AlgebraSpec::tensor(3, 3).unwrap(),
        AlgebraSpec::symmetric(3, 3).unwrap(),
        AlgebraSpec::grassmann(3, 3).unwrap(),
        AlgebraSpec::superalgebra(3, 1, 3).unwrap(),
        AlgebraSpec::clifford(3, 3).unwrap(),
        AlgebraSpec::paired(0, omega.clone(), 3).unwrap(),
        AlgebraSpec::paired(1, omega, 3).unwrap(),
    ];
    for spec in specs.map(Arc::new) {
        let basis = spec.basis(3);
        let el = |m: &Monomial| GradedElement::from_terms(&spec, [(m.clone(), Rational64::from_integer(1))]);
        for x in &basis {
            for y in &basis {
                for z in &basis {
                    if x.degree() + y.degree() + z.degree() > 3 {
                        continue;
                    }
                    let (a, b, c) = (el(x), el(y), el(z));
                    let left = product(&product(&a, &b).unwrap(), &c).unwrap();
                    let right = product(&a, &product(&b, &c).unwrap()).unwrap();
                    assert!(!left.is_truncated() && !right.is_truncated());
                    assert!((&left - &right).is_zero(), "{spec}: ({x} {y}) {z}");
                }
            }
        }
    }
}

#[test]
fn super_signs_on_generators() {
    let s = Arc::new(AlgebraSpec::superalgebra(3, 1, 2).unwrap());
    let e = |i| GradedElement::<f64>::generator(&s, i).unwrap();
    // generator 1 is even, 2 and 3 are odd
    assert_eq!(product(&e(2), &e(1)).unwrap(), product(&e(1), &e(2)).unwrap());
    assert_eq!(product(&e(3), &e(2)).unwrap(), -&product(&e(2), &e(3)).unwrap());
    assert!(product(&e(2), &e(2)).unwrap().is_zero());
    assert!(!product(&e(1), &e(1)).unwrap().is_zero());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn associativity(seed in any::<u64>(), kind in 0usize..7) {
        let spec = &all_kinds()[kind];
        let mut r = rng(seed);
        let (a, b, c) = (
            random_element(spec, &mut r, 2, 4),
            random_element(spec, &mut r, 2, 4),
            random_element(spec, &mut r, 2, 4),
        );
        let left = product(&product(&a, &b).unwrap(), &c).unwrap();
        let right = product(&a, &product(&b, &c).unwrap()).unwrap();
        prop_assert!(!left.is_truncated() && !right.is_truncated());
        prop_assert!(relative_gap(&left, &right) <= 1e-10, "{}", spec);
    }

    #[test]
    fn exact_associativity(seed in any::<u64>(), kind in 0usize..7) {
        let spec = &all_kinds()[kind];
        let mut r = rng(seed);
        let (a, b, c) = (
            random_rational(spec, &mut r, 2, 3),
            random_rational(spec, &mut r, 2, 3),
            random_rational(spec, &mut r, 2, 3),
        );
        let left = product(&product(&a, &b).unwrap(), &c).unwrap();
        let right = product(&a, &product(&b, &c).unwrap()).unwrap();
        prop_assert!((&left - &right).is_zero());
    }

    #[test]
    fn distributivity(seed in any::<u64>(), kind in 0usize..7) {
        let spec = &all_kinds()[kind];
        let mut r = rng(seed);
        let (a, b, c) = (
            random_element(spec, &mut r, 3, 4),
            random_element(spec, &mut r, 3, 4),
            random_element(spec, &mut r, 3, 4),
        );
        let left = product(&a, &(&b + &c)).unwrap();
        let right = &product(&a, &b).unwrap() + &product(&a, &c).unwrap();
        prop_assert!(relative_gap(&left, &right) <= 1e-12);
    }

    #[test]
    fn unit_is_neutral(seed in any::<u64>(), kind in 0usize..7) {
        let spec = &all_kinds()[kind];
        let a = random_element(spec, &mut rng(seed), 4, 6);
        let e0 = GradedElement::unit(spec);
        prop_assert_eq!(&product(&e0, &a).unwrap(), &a);
        prop_assert_eq!(&product(&a, &e0).unwrap(), &a);
    }

    #[test]
    fn graded_commutativity(seed in any::<u64>(), kind in 1usize..4, p in 0usize..4, q in 0usize..3) {
        let spec = &all_kinds()[kind];
        let mut r = rng(seed);
        let basis_p = spec.basis_of_degree(p);
        let basis_q = spec.basis_of_degree(q);
        prop_assume!(!basis_p.is_empty() && !basis_q.is_empty());
        let x = basis_p[r.random_range(0..basis_p.len())].clone();
        let y = basis_q[r.random_range(0..basis_q.len())].clone();
        let sign = if (odd_count(spec, &x) * odd_count(spec, &y)).is_multiple_of(2) { 1.0 } else { -1.0 };
        let a = GradedElement::from_terms(spec, [(x, 1.0)]);
        let b = GradedElement::from_terms(spec, [(y, 1.0)]);
        let ab = product(&a, &b).unwrap();
        let ba = product(&b, &a).unwrap();
        prop_assert_eq!(ab, ba.scale(&sign));
    }

    #[test]
    fn paired_generator_relation(i in 1usize..=3, j in 1usize..=3, kind in 4usize..7) {
        let spec = &all_kinds()[kind];
        prop_assume!(spec.kind == AlgebraKind::Paired);
        let chi = if spec.parity == 1 { -1.0 } else { 1.0 };
        let e = |k| GradedElement::<f64>::generator(spec, k).unwrap();
        let lhs = &product(&e(i), &e(j)).unwrap() - &product(&e(j), &e(i)).unwrap().scale(&chi);
        let w = |a: usize, b: usize| spec.pairing_entry(a as u16, b as u16).re;
        let rhs = GradedElement::unit(spec).scale(&(w(i, j) - chi * w(j, i)));
        prop_assert!(relative_gap(&lhs, &rhs) <= 1e-15);
        prop_assert!(lhs.terms().all(|(m, c)| m.is_unit() || c.is_zero()));
    }
}

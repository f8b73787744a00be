#![allow(dead_code)]

use std::sync::Arc;

use gradenorm_core::{AlgebraSpec, GradedElement};
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One algebra of every kind, each with room for triple products of
/// elements of degree at most two.
pub fn all_kinds() -> Vec<Arc<AlgebraSpec>> {
    let omega = vec![vec![0.5, 1.0, 0.0], vec![-1.0, 2.0, 0.25], vec![0.0, 0.75, -1.0]];
    vec![
        AlgebraSpec::tensor(3, 6).unwrap(),
        AlgebraSpec::symmetric(3, 6).unwrap(),
        AlgebraSpec::grassmann(5, 6).unwrap(),
        AlgebraSpec::superalgebra(4, 2, 6).unwrap(),
        AlgebraSpec::clifford(4, 6).unwrap(),
        AlgebraSpec::paired(0, omega.clone(), 6).unwrap(),
        AlgebraSpec::paired(1, omega, 6).unwrap(),
    ]
    .into_iter()
    .map(Arc::new)
    .collect()
}

/// Random element with up to `terms` monomials of degree `<= max_degree`
/// and coefficients uniform in `[-1, 1]`.
pub fn random_element(spec: &Arc<AlgebraSpec>, rng: &mut impl Rng, max_degree: usize, terms: usize) -> GradedElement<f64> {
    let basis = spec.basis(max_degree);
    let picks = (0..terms).map(|_| (basis[rng.random_range(0..basis.len())].clone(), rng.random_range(-1.0..1.0)));
    GradedElement::from_terms(spec, picks.collect::<Vec<_>>())
}

pub fn random_homogeneous(spec: &Arc<AlgebraSpec>, rng: &mut impl Rng, degree: usize, terms: usize) -> GradedElement<f64> {
    let basis = spec.basis_of_degree(degree);
    let picks = (0..terms).map(|_| (basis[rng.random_range(0..basis.len())].clone(), rng.random_range(-1.0..1.0)));
    GradedElement::from_terms(spec, picks.collect::<Vec<_>>())
}

pub fn random_rational(spec: &Arc<AlgebraSpec>, rng: &mut impl Rng, max_degree: usize, terms: usize) -> GradedElement<Rational64> {
    let basis = spec.basis(max_degree);
    let picks = (0..terms).map(|_| {
        let c = Rational64::new(rng.random_range(-9..=9), rng.random_range(1..=7));
        (basis[rng.random_range(0..basis.len())].clone(), c)
    });
    GradedElement::from_terms(spec, picks.collect::<Vec<_>>())
}

/// `||x - y|| / max(1, ||x||)` in the flat coefficient norm.
pub fn relative_gap(x: &GradedElement<f64>, y: &GradedElement<f64>) -> f64 {
    (x - y).coefficient_norm() / x.coefficient_norm().max(1.0)
}

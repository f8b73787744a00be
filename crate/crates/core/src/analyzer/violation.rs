use std::sync::Arc;

use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::map::MultiplicationMap;
use super::{InnerProduct, WitnessReport};
use crate::algebra::{product, AlgebraKind, AlgebraSpec, GradedElement, Monomial};
use crate::error::Result;
use crate::norm::{gram_diagonal, GramConvention, NormSpec, WeightSpec};

/// A ratio counts as a violation only above `1 + VIOLATION_MARGIN`.
pub const VIOLATION_MARGIN: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchBudget {
    /// Random starts per degree pair in the ascent phase.
    pub restarts: usize,
    /// Alternating steps per start.
    pub iterations: usize,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { restarts: 4, iterations: 100, seed: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessSource {
    GeneratorSquare,
    DisjointBlades,
    Ascent,
}

#[derive(Debug, Clone, Serialize)]
pub struct ViolationOutcome {
    /// The first pair found with ratio above `1 + VIOLATION_MARGIN`.
    pub witness: Option<WitnessReport<f64>>,
    pub source: Option<WitnessSource>,
    /// Largest ratio seen over all candidates.
    pub best_ratio: f64,
    pub candidates: usize,
}

impl ViolationOutcome {
    pub fn found(&self) -> bool {
        self.witness.is_some()
    }
}

struct Search<'a> {
    spec: &'a Arc<AlgebraSpec>,
    norm: NormSpec,
    best_ratio: f64,
    candidates: usize,
}

impl Search<'_> {
    /// Ratio of a homogeneous pair under the unit-weight norm.
    fn ratio(&mut self, a: &GradedElement<f64>, b: &GradedElement<f64>) -> Result<Option<f64>> {
        let ab = product(a, b)?;
        if ab.is_truncated() {
            return Ok(None);
        }
        let (na, nb) = (self.norm.norm(a)?, self.norm.norm(b)?);
        if na == 0.0 || nb == 0.0 {
            return Ok(None);
        }
        let r = self.norm.norm(&ab)? / (na * nb);
        self.candidates += 1;
        self.best_ratio = self.best_ratio.max(r);
        Ok(Some(r))
    }

    fn report(&self, a: GradedElement<f64>, b: GradedElement<f64>, ratio: f64, closed: Option<f64>) -> WitnessReport<f64> {
        WitnessReport {
            a,
            b,
            lambda_star: None,
            ratio,
            closed_form_ratio: closed,
            norms: InnerProduct::<f64>::describe(&self.norm),
        }
    }

    fn generator_squares(&mut self) -> Result<Option<WitnessReport<f64>>> {
        if self.spec.truncation < 2 {
            return Ok(None);
        }
        for g in 1..=self.spec.generators {
            let e = GradedElement::generator(self.spec, g)?;
            if let Some(r) = self.ratio(&e, &e)? {
                if r > 1.0 + VIOLATION_MARGIN {
                    let closed = self.spec.is_class_one().then(|| {
                        let square = Monomial::from_canonical(vec![g as u16; 2]);
                        gram_diagonal(self.spec, &square, self.norm.gram).sqrt()
                    });
                    return Ok(Some(self.report(e.clone(), e, r, closed)));
                }
            }
        }
        Ok(None)
    }

    /// `a = sum_b e_(bk+1) ... e_(bk+k)` over `m = floor(d/k) >= 2` disjoint blocks.
    fn disjoint_blades(&mut self) -> Result<Option<WitnessReport<f64>>> {
        let d = self.spec.generators;
        for k in 1..=self.spec.truncation / 2 {
            let m = d / k;
            if m < 2 {
                break;
            }
            let mut a = GradedElement::zero(self.spec);
            for block in 0..m {
                let word: Vec<usize> = (block * k + 1..=block * k + k).collect();
                a = &a + &GradedElement::monomial(self.spec, &word)?;
            }
            if let Some(r) = self.ratio(&a, &a)? {
                if r > 1.0 + VIOLATION_MARGIN {
                    let closed = self.blade_closed_form(k, m);
                    return Ok(Some(self.report(a.clone(), a, r, closed)));
                }
            }
        }
        Ok(None)
    }

    /// In the Grassmann case `a^2 = 2 sum_(b<c) blade_b blade_c`, so the ratio is
    /// `2 sqrt(C(m,2) g_2k) / (m g_k)` with `g` the Gram of a square-free word.
    fn blade_closed_form(&self, k: usize, m: usize) -> Option<f64> {
        if self.spec.kind != AlgebraKind::Antisymmetric {
            return None;
        }
        let g = |n: usize| gram_diagonal(self.spec, &Monomial::from_canonical((1..=n as u16).collect()), self.norm.gram);
        let pairs = (m * (m - 1) / 2) as f64;
        Some(2.0 * (pairs * g(2 * k)).sqrt() / (m as f64 * g(k)))
    }

    /// Alternating maximization on each homogeneous block `A_p x A_q`.
    fn ascent(&mut self, budget: &SearchBudget) -> Result<Option<WitnessReport<f64>>> {
        let n = self.spec.truncation;
        let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
        let flat = self.norm.clone();
        for total in 2..=n {
            for p in 1..total {
                let q = total - p;
                let (left, right) = (self.spec.basis_of_degree(p), self.spec.basis_of_degree(q));
                if left.is_empty() || right.is_empty() {
                    continue;
                }
                let map = match MultiplicationMap::assemble(self.spec, left, right, [&flat, &flat, &flat]) {
                    Ok(map) => map,
                    Err(crate::Error::OversizeMatrix { .. }) => continue,
                    Err(e) => return Err(e),
                };
                for _ in 0..budget.restarts {
                    let start = DVector::from_fn(map.right.len(), |_, _| StandardNormal.sample(&mut rng));
                    let best = map.alternate(start, budget.iterations);
                    let to_element = |basis: &[Monomial], v: &DVector<f64>| {
                        GradedElement::from_terms(
                            self.spec,
                            basis.iter().zip(v.iter()).map(|(m, &c)| {
                                let s = self.norm.monomial_norm(self.spec, m).unwrap_or(1.0);
                                (m.clone(), c / s)
                            }),
                        )
                    };
                    let a = to_element(&map.left, &best.left);
                    let b = to_element(&map.right, &best.right);
                    if let Some(r) = self.ratio(&a, &b)? {
                        if r > 1.0 + VIOLATION_MARGIN {
                            return Ok(Some(self.report(a, b, r, None)));
                        }
                    }
                }
            }
        }
        Ok(None)
    }
}

/// Looks for a pair with `||ab|| > ||a|| ||b||` under unit weights and the
/// given Gram convention, where the norm of a homogeneous element is its
/// degree norm.
///
/// Structured candidates come first (squares of single generators, then
/// squares of sums of disjoint blades of growing length); if none violates,
/// alternating maximization runs on every degree pair `(p, q)` with
/// `p + q <= N`. The search stops at the first violation.
pub fn unweighted_violation_search(
    spec: &Arc<AlgebraSpec>,
    gram: GramConvention,
    budget: &SearchBudget,
) -> Result<ViolationOutcome> {
    spec.validate()?;
    let mut search = Search { spec, norm: NormSpec::new(WeightSpec::flat(), gram)?, best_ratio: 0.0, candidates: 0 };
    let phases: [(WitnessSource, fn(&mut Search<'_>, &SearchBudget) -> Result<Option<WitnessReport<f64>>>); 3] = [
        (WitnessSource::GeneratorSquare, |s, _| s.generator_squares()),
        (WitnessSource::DisjointBlades, |s, _| s.disjoint_blades()),
        (WitnessSource::Ascent, |s, b| s.ascent(b)),
    ];
    for (source, phase) in phases {
        if let Some(w) = phase(&mut search, budget)? {
            return Ok(ViolationOutcome {
                witness: Some(w),
                source: Some(source),
                best_ratio: search.best_ratio,
                candidates: search.candidates,
            });
        }
    }
    Ok(ViolationOutcome { witness: None, source: None, best_ratio: search.best_ratio, candidates: search.candidates })
}

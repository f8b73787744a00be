use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::InnerProduct;
use crate::algebra::{product, AlgebraSpec, GradedElement, Monomial};
use crate::error::{Error, Result};
use crate::scalar::FloatScalar;

pub const QUANTILE_LEVELS: [f64; 5] = [0.5, 0.9, 0.99, 0.999, 1.0];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleRecord {
    pub trial: usize,
    pub degree_a: usize,
    pub degree_b: usize,
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(bound(serialize = ""))]
pub struct SampleReport<S: FloatScalar> {
    pub max_ratio: f64,
    pub argmax_trial: usize,
    pub argmax_pair: (GradedElement<S>, GradedElement<S>),
    /// `(level, value)` nearest-rank quantiles of the ratio distribution.
    pub quantiles: Vec<(f64, f64)>,
    #[serde(skip)]
    pub records: Vec<SampleRecord>,
}

struct Sampler<'a, S: FloatScalar> {
    spec: &'a Arc<AlgebraSpec>,
    /// Basis monomials with `1/||M||_(sigma)` and `1/||M||_(tau)`.
    basis: Vec<(Monomial, f64, f64)>,
    seed: u64,
    _marker: std::marker::PhantomData<S>,
}

impl<S: FloatScalar> Sampler<'_, S> {
    fn degrees(&self, rng: &mut ChaCha8Rng) -> (usize, usize) {
        let n = self.spec.truncation;
        match n {
            0 => (0, 0),
            1 => {
                let da = rng.random_range(0..=1);
                (da, 1 - da)
            }
            _ => {
                let da = rng.random_range(1..n);
                (da, n - da)
            }
        }
    }

    fn draw(&self, rng: &mut ChaCha8Rng, max_degree: usize, left: bool) -> GradedElement<S> {
        let terms = self
            .basis
            .iter()
            .take_while(|(m, _, _)| m.degree() <= max_degree)
            .map(|(m, inv_sigma, inv_tau)| {
                let scale = if left { *inv_sigma } else { *inv_tau };
                let z = S::sample_normal(rng);
                (m.clone(), z * S::from_f64(scale))
            })
            .collect::<Vec<_>>();
        GradedElement::from_terms(self.spec, terms)
    }

    fn trial(&self, trial: usize) -> (usize, usize, GradedElement<S>, GradedElement<S>) {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial as u64);
        let (da, db) = self.degrees(&mut rng);
        let a = self.draw(&mut rng, da, true);
        let b = self.draw(&mut rng, db, false);
        (da, db, a, b)
    }
}

/// Samples `count` pairs and measures `||ab||_(rho) / (||a||_(sigma) ||b||_(tau))`.
///
/// Each trial splits the truncation degree `N` into `deg a + deg b = N`
/// (with both parts positive when `N >= 2`) and fills every basis monomial
/// of degree up to that bound with an independent standard normal
/// coefficient in the orthonormalized basis of the corresponding norm.
/// Trial `t` draws from stream `t` of a ChaCha generator seeded by `seed`,
/// so the report does not depend on scheduling.
pub fn ratio_sample<S: FloatScalar, N: InnerProduct<S>>(
    spec: &Arc<AlgebraSpec>,
    sigma: &N,
    tau: &N,
    rho: &N,
    count: usize,
    seed: u64,
) -> Result<SampleReport<S>> {
    if count == 0 {
        return Err(Error::InvalidSpec("sample count must be positive".into()));
    }
    let basis = spec
        .basis(spec.truncation)
        .into_iter()
        .map(|m| {
            let e = GradedElement::<S>::from_terms(spec, [(m.clone(), S::one())]);
            Ok((m, 1.0 / sigma.norm(&e)?, 1.0 / tau.norm(&e)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let sampler = Sampler::<S> { spec, basis, seed, _marker: std::marker::PhantomData };

    let records = (0..count)
        .into_par_iter()
        .map(|t| {
            let (da, db, a, b) = sampler.trial(t);
            let ab = product(&a, &b)?;
            if ab.is_truncated() {
                return Err(Error::Truncated);
            }
            let denom = sigma.norm(&a)? * tau.norm(&b)?;
            let ratio = if denom > 0.0 { rho.norm(&ab)? / denom } else { 0.0 };
            Ok(SampleRecord { trial: t, degree_a: da, degree_b: db, ratio })
        })
        .collect::<Result<Vec<_>>>()?;

    let (argmax_trial, max_ratio) = records
        .iter()
        .fold((0, f64::NEG_INFINITY), |best, r| if r.ratio > best.1 { (r.trial, r.ratio) } else { best });
    let (_, _, a, b) = sampler.trial(argmax_trial);
    let mut sorted: Vec<f64> = records.iter().map(|r| r.ratio).collect();
    sorted.sort_by(f64::total_cmp);
    let quantiles = QUANTILE_LEVELS
        .iter()
        .map(|&q| {
            let rank = ((q * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
            (q, sorted[rank - 1])
        })
        .collect();
    Ok(SampleReport {
        max_ratio,
        argmax_trial,
        argmax_pair: (a, b),
        quantiles,
        records,
    })
}

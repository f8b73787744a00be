//! One handler per command. Each returns the JSON result, whether every
//! assertion held, and optional CSV rows.

use std::sync::Arc;

use gradenorm_core::algebra::{find_nogo_witness, product};
use gradenorm_core::analyzer::{
    best_constant, delta_audit, nilpotent_witness, ratio_sample, theorem1_sweep, theorem2_constant,
    unweighted_violation_search, SampleRecord, SearchBudget, WitnessReport, SQRT_FOUR_THIRDS, SQRT_THREE,
};
use gradenorm_core::gamma::{gamma_power_apply, multiplicativity_residual, GammaOperator};
use gradenorm_core::norm::{degree_inner, GramConvention, NormSpec};
use gradenorm_core::{AlgebraSpec, FloatScalar, GradedElement, ScalarField};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{ConfigError, ExperimentConfig, WeightFamily};
use crate::suite;

/// Relative multiplicativity residual accepted by `gamma-check`.
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

pub struct Outcome {
    pub spec: Value,
    pub norms: Value,
    pub result: Value,
    pub pass: bool,
    pub records: Option<Vec<SampleRecord>>,
}

impl Outcome {
    fn new(spec: Value, norms: Value, result: Value, pass: bool) -> Self {
        Outcome { spec, norms, result, pass, records: None }
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).unwrap_or(Value::Null)
}

fn spec_value(spec: &AlgebraSpec) -> Value {
    to_value(spec)
}

fn norms_value(norms: &[NormSpec]) -> Value {
    match norms {
        [single] => to_value(single),
        [s, t, r] => json!({ "sigma": to_value(s), "tau": to_value(t), "rho": to_value(r) }),
        _ => Value::Null,
    }
}

pub fn witness(cfg: &ExperimentConfig) -> Result<Outcome, ConfigError> {
    let spec = cfg.algebra()?;
    let norm = cfg.single_norm(Some(&spec))?;
    let result = match spec.field {
        ScalarField::Real => witness_value::<f64>(&spec, &norm, cfg)?,
        ScalarField::Complex => witness_value::<Complex64>(&spec, &norm, cfg)?,
    };
    let ratio = result["witness"]["ratio"].as_f64().unwrap_or(f64::NAN);
    let floor_holds = ratio >= SQRT_FOUR_THIRDS - cfg.tolerance;
    let target_holds = cfg.target_gamma.is_none_or(|g| ratio <= g + cfg.tolerance);
    let mut result = result;
    result["floor"] = json!(SQRT_FOUR_THIRDS);
    result["floor_holds"] = json!(floor_holds);
    result["target_falsified"] = json!(!target_holds);
    Ok(Outcome::new(spec_value(&spec), norms_value(&[norm]), result, floor_holds && target_holds))
}

fn witness_value<S: FloatScalar>(
    spec: &Arc<AlgebraSpec>,
    norm: &NormSpec,
    cfg: &ExperimentConfig,
) -> Result<Value, ConfigError> {
    let f = match &cfg.direction {
        Some(records) => GradedElement::<S>::from_records(spec, records)?,
        None => match find_nogo_witness::<S>(spec)? {
            Some(f) => f,
            None => {
                return Err(ConfigError::Invalid(
                    "no degree-1 direction satisfies the witness hypotheses; supply `direction`".into(),
                ))
            }
        },
    };
    let f2 = product(&f, &f)?;
    let (method, report): (&str, WitnessReport<S>) = if f2.is_zero() && !f2.is_truncated() {
        ("nilpotent", nilpotent_witness(spec, norm, &f)?)
    } else {
        ("sweep", theorem1_sweep(spec, norm, &f)?)
    };
    Ok(json!({ "method": method, "direction": to_value(&f), "witness": to_value(&report) }))
}

pub fn audit_weights(cfg: &ExperimentConfig) -> Result<Outcome, ConfigError> {
    let [s, t, r] = cfg.norm_configs()?;
    let [ws, wt, wr] = [s.weight_spec()?, t.weight_spec()?, r.weight_spec()?];
    let report = delta_audit(&ws, &wt, &wr, cfg.grid, cfg.target_gamma)?;
    let weights = json!({ "sigma": to_value(&ws), "tau": to_value(&wt), "rho": to_value(&wr) });
    Ok(Outcome::new(Value::Null, weights, to_value(&report), report.pass))
}

pub fn sample_ratios(cfg: &ExperimentConfig) -> Result<Outcome, ConfigError> {
    let spec = cfg.algebra()?;
    let norms = cfg.norm_triple(Some(&spec))?;
    let [s, t, r] = &norms;
    let (target, source) = match cfg.target_gamma {
        Some(g) => (g, json!("config")),
        None => {
            let grid = spec.truncation.max(1);
            let audit = delta_audit(&s.effective_weights(), &t.effective_weights(), &r.effective_weights(), grid, None)?;
            (theorem2_constant(audit.delta_min), json!({ "audit_grid": grid, "delta_min": audit.delta_min }))
        }
    };
    let (mut body, records) = match spec.field {
        ScalarField::Real => {
            let rep = ratio_sample::<f64, _>(&spec, s, t, r, cfg.samples, cfg.seed)?;
            (to_value(&rep), rep.records)
        }
        ScalarField::Complex => {
            let rep = ratio_sample::<Complex64, _>(&spec, s, t, r, cfg.samples, cfg.seed)?;
            (to_value(&rep), rep.records)
        }
    };
    let max = body["max_ratio"].as_f64().unwrap_or(f64::NAN);
    let pass = max <= target + cfg.tolerance;
    body["target_gamma"] = json!(target);
    body["target_source"] = source;
    body["samples"] = json!(cfg.samples);
    body["exceedances"] = json!(records.iter().filter(|x| x.ratio > target + cfg.tolerance).count());
    let mut out = Outcome::new(spec_value(&spec), norms_value(&norms), body, pass);
    out.records = Some(records);
    Ok(out)
}

pub fn best(cfg: &ExperimentConfig) -> Result<Outcome, ConfigError> {
    let spec = cfg.algebra()?;
    let norms = cfg.norm_triple(Some(&spec))?;
    let [s, t, r] = &norms;
    let report = best_constant(&spec, s, t, r, cfg.degree_cap)?;
    let within_target = cfg.target_gamma.is_none_or(|g| report.gamma_best <= g + cfg.tolerance);
    let mut body = to_value(&report);
    body["reference"] = json!({ "sqrt_four_thirds": SQRT_FOUR_THIRDS, "sqrt_three": SQRT_THREE });
    if let Some(g) = cfg.target_gamma {
        body["target_gamma"] = json!(g);
    }
    Ok(Outcome::new(spec_value(&spec), norms_value(&norms), body, report.converged && within_target))
}

/// Random element with standard normal coefficients on every monomial of
/// degree at most `max_degree`.
fn gaussian_element(spec: &Arc<AlgebraSpec>, rng: &mut ChaCha8Rng, max_degree: usize) -> GradedElement<f64> {
    let terms: Vec<_> = spec.basis(max_degree).into_iter().map(|m| (m, f64::sample_normal(rng))).collect();
    GradedElement::from_terms(spec, terms)
}

pub fn gamma_check(cfg: &ExperimentConfig) -> Result<Outcome, ConfigError> {
    let spec = cfg.algebra()?;
    let norm_cfg = cfg.norm.as_ref().ok_or_else(|| ConfigError::Invalid("gamma-check needs a `norm` block".into()))?;
    let norm = cfg.single_norm(Some(&spec))?;
    let Some(op) = norm_cfg.operator()? else {
        return Err(ConfigError::Invalid("gamma-check needs `gamma_diag` or `gamma_matrix`".into()));
    };
    let n = spec.truncation;
    let residuals = (0..cfg.samples)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(trial as u64);
            let da = if n == 0 { 0 } else { rng.random_range(0..=n) };
            let a = gaussian_element(&spec, &mut rng, da);
            let b = gaussian_element(&spec, &mut rng, n - da);
            multiplicativity_residual(&op, &a, &b).map(|r| r.relative)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    let mean_residual = residuals.iter().sum::<f64>() / residuals.len().max(1) as f64;
    let residual_pass = max_residual <= RESIDUAL_TOLERANCE;

    let contraction = contraction_check(&spec, &op, norm_cfg.gamma_exponent.unwrap_or(1.0), cfg.seed)?;
    let pass = residual_pass && contraction["pass"].as_bool().unwrap_or(true);
    let body = json!({
        "pairs": cfg.samples,
        "max_relative_residual": max_residual,
        "mean_relative_residual": mean_residual,
        "residual_tolerance": RESIDUAL_TOLERANCE,
        "residual_pass": residual_pass,
        "contraction": contraction,
    });
    Ok(Outcome::new(spec_value(&spec), norms_value(&[norm]), body, pass))
}

/// Checks `||Gamma(A)^(-r) a_n||_n <= 2^(-n r) ||a_n||_n` on random
/// homogeneous elements, with `r = |exponent|`, when `A >= 2 id`.
fn contraction_check(spec: &Arc<AlgebraSpec>, op: &GammaOperator, exponent: f64, seed: u64) -> Result<Value, ConfigError> {
    let lowest = op.min_eigenvalue();
    if lowest.is_none_or(|l| l < 2.0 - 1e-12) {
        return Ok(json!({ "applicable": false, "min_eigenvalue": lowest }));
    }
    let r = exponent.abs();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut worst: f64 = 0.0;
    for degree in 1..=spec.truncation {
        let basis = spec.basis_of_degree(degree);
        if basis.is_empty() {
            continue;
        }
        for _ in 0..16 {
            let a = GradedElement::from_terms(spec, basis.iter().map(|m| (m.clone(), f64::sample_normal(&mut rng))).collect::<Vec<_>>());
            let shrunk = gamma_power_apply(op, -r, &a)?;
            for gram in [GramConvention::Normalized, GramConvention::Standard] {
                let before = degree_inner(&a, &a, gram)?.re.sqrt();
                let after = if shrunk.is_zero() { 0.0 } else { degree_inner(&shrunk, &shrunk, gram)?.re.sqrt() };
                if before > 0.0 {
                    worst = worst.max(after / (before * (-(degree as f64) * r).exp2()));
                }
            }
        }
    }
    Ok(json!({
        "applicable": true,
        "exponent": r,
        "worst_bound_ratio": worst,
        "pass": worst <= 1.0 + 1e-10,
    }))
}

pub fn violation_search(cfg: &ExperimentConfig) -> Result<Outcome, ConfigError> {
    let spec = cfg.algebra()?;
    let gram = match &cfg.norm {
        None => GramConvention::Standard,
        Some(n) => {
            if n.family() != WeightFamily::Flat && n.w_family.is_some() {
                return Err(ConfigError::Invalid("violation-search uses unit weights; drop `w_family`".into()));
            }
            if n.operator()?.is_some() {
                return Err(ConfigError::Invalid("violation-search takes no Gamma twist".into()));
            }
            n.gram
        }
    };
    let budget = SearchBudget { restarts: cfg.budget.restarts, iterations: cfg.budget.iterations, seed: cfg.seed };
    let outcome = unweighted_violation_search(&spec, gram, &budget)?;
    let found = outcome.found();
    let mut body = to_value(&outcome);
    body["gram"] = to_value(&gram);
    Ok(Outcome::new(spec_value(&spec), json!({ "gram": gram, "weights": "flat" }), body, !found))
}

pub fn suite(cfg: &ExperimentConfig) -> Result<Outcome, ConfigError> {
    let results = suite::run_all(cfg.seed);
    for r in &results {
        println!("{}", r.line());
    }
    let pass = results.iter().all(|r| r.pass);
    Ok(Outcome::new(Value::Null, Value::Null, to_value(&results), pass))
}

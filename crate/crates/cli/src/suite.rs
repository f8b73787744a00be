//! The acceptance battery: eight criteria, each with its own tolerance and
//! wall-clock budget.

use std::sync::Arc;
use std::time::Instant;

use gradenorm_core::algebra::{product, GradedElement};
use gradenorm_core::analyzer::{
    best_constant, delta_audit, nilpotent_witness, ratio_sample, theorem1_sweep, theorem2_constant,
    unweighted_violation_search, SearchBudget, WitnessSource, SQRT_FOUR_THIRDS, SQRT_THREE,
};
use gradenorm_core::gamma::{multiplicativity_residual, GammaOperator};
use gradenorm_core::norm::{permanent, GammaTwist, GramConvention, NormSpec, WeightSpec};
use gradenorm_core::{AlgebraKind, AlgebraSpec, Monomial};
use nalgebra::DMatrix;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: &'static str,
    pub pass: bool,
    pub elapsed_s: f64,
    pub budget_s: f64,
    pub detail: Value,
}

impl CriterionResult {
    /// One line for terminal output.
    pub fn line(&self) -> String {
        format!(
            "[{}] criterion {}: {} ({:.2}s / {:.0}s)",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.elapsed_s,
            self.budget_s
        )
    }
}

type Check = (bool, Value);

fn timed(id: u8, title: &'static str, budget_s: f64, f: impl FnOnce() -> Check) -> CriterionResult {
    let start = Instant::now();
    let (ok, detail) = f();
    let elapsed_s = start.elapsed().as_secs_f64();
    CriterionResult { id, title, pass: ok && elapsed_s < budget_s, elapsed_s, budget_s, detail }
}

/// Errors inside a criterion count as failures and are kept in the detail.
fn guard(f: impl FnOnce() -> gradenorm_core::Result<Check>) -> Check {
    f().unwrap_or_else(|e| (false, json!({ "error": e.to_string() })))
}

fn arc(spec: gradenorm_core::Result<AlgebraSpec>) -> gradenorm_core::Result<Arc<AlgebraSpec>> {
    spec.map(Arc::new)
}

pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    (1..=8).map(|id| run(id, seed)).collect()
}

pub fn run(id: u8, seed: u64) -> CriterionResult {
    match id {
        1 => timed(1, "universal lower constant sqrt(4/3)", 16.0 * 1.0, || guard(|| theorem1(seed))),
        2 => timed(2, "sqrt(3) bound for factorial weights", 60.0, || guard(|| sqrt3_sampling(seed))),
        3 => timed(3, "delta audits", 1.0, || guard(delta_audits)),
        4 => timed(4, "best-constant sandwich", 120.0, || guard(sandwich)),
        5 => timed(5, "standard-norm violation", 60.0, || guard(standard_violation)),
        6 => timed(6, "Gamma(A) laws", 60.0, || guard(|| gamma_laws(seed))),
        7 => timed(7, "algebra correctness", 60.0, || guard(|| algebra_correctness(seed))),
        8 => timed(8, "cross-parameter estimates", 120.0, || guard(|| cross_parameter(seed))),
        _ => CriterionResult {
            id,
            title: "unknown",
            pass: false,
            elapsed_s: 0.0,
            budget_s: 0.0,
            detail: json!({ "error": "no such criterion" }),
        },
    }
}

fn theorem1(seed: u64) -> gradenorm_core::Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let explicit: Vec<f64> = std::iter::once(1.0).chain((1..=4).map(|_| rng.random_range(0.01..10.0))).collect();
    let families = [
        WeightSpec::FactorialInv,
        WeightSpec::FactorialInvShift,
        WeightSpec::sigma_rho_s(-1.0, 0.0, 0.0),
        WeightSpec::explicit(explicit)?,
    ];
    let kinds = [
        arc(AlgebraSpec::tensor(3, 4))?,
        arc(AlgebraSpec::symmetric(3, 4))?,
        arc(AlgebraSpec::grassmann(3, 4))?,
        arc(AlgebraSpec::superalgebra(3, 1, 4))?,
    ];
    let mut ok = true;
    let mut rows = Vec::new();
    for spec in &kinds {
        for w in &families {
            let start = Instant::now();
            let norm = NormSpec::normalized(w.clone())?;
            let f = GradedElement::<f64>::generator(spec, spec.generators)?;
            let sweep = theorem1_sweep(spec, &norm, &f)?;
            let mut row_ok = sweep.ratio >= SQRT_FOUR_THIRDS - 1e-9;
            let mut nil = Value::Null;
            if product(&f, &f)?.is_zero() {
                let w = nilpotent_witness(spec, &norm, &f)?;
                let lambda = w.lambda_star.unwrap_or(f64::NAN);
                row_ok &= (w.ratio - SQRT_FOUR_THIRDS).abs() <= 1e-9 && (lambda - 0.5f64.sqrt()).abs() <= 1e-7;
                nil = json!({ "ratio": w.ratio, "lambda_star": lambda });
            }
            let secs = start.elapsed().as_secs_f64();
            row_ok &= secs < 1.0;
            ok &= row_ok;
            rows.push(json!({
                "kind": spec.kind, "weights": w, "ratio": sweep.ratio,
                "lambda_star": sweep.lambda_star, "nilpotent": nil, "seconds": secs, "pass": row_ok,
            }));
        }
    }
    Ok((ok, json!({ "configs": rows })))
}

fn sqrt3_sampling(seed: u64) -> gradenorm_core::Result<Check> {
    let mut ok = true;
    let mut rows = Vec::new();
    for (kind, d, n) in [
        (AlgebraKind::Antisymmetric, 3, 3),
        (AlgebraKind::Antisymmetric, 6, 6),
        (AlgebraKind::Symmetric, 3, 3),
        (AlgebraKind::Symmetric, 4, 6),
    ] {
        let spec = arc(AlgebraSpec::new(kind, d, n))?;
        for w in [WeightSpec::FactorialInv, WeightSpec::FactorialInvShift] {
            let norm = NormSpec::normalized(w.clone())?;
            let rep = ratio_sample::<f64, _>(&spec, &norm, &norm, &norm, 10_000, seed)?;
            let row_ok = rep.max_ratio <= SQRT_THREE + 1e-9;
            ok &= row_ok;
            rows.push(json!({ "kind": kind, "d": d, "N": n, "weights": w, "max_ratio": rep.max_ratio, "pass": row_ok }));
        }
    }
    Ok((ok, json!({ "samples_per_config": 10_000, "configs": rows })))
}

fn delta_audits() -> gradenorm_core::Result<Check> {
    let p = 50;
    let audit = |w: WeightSpec| delta_audit(&w, &w, &w, p, None);
    let shift = audit(WeightSpec::FactorialInvShift)?;
    let inv = audit(WeightSpec::FactorialInv)?;
    let flat = audit(WeightSpec::flat())?;
    let expected_inv = p as f64 / (p as f64 + 1.0);
    let ok = (shift.delta_min - 1.0).abs() <= 1e-12
        && (inv.delta_min - expected_inv).abs() <= 1e-12
        && flat.delta_min == (2 * p - 1) as f64;
    Ok((ok, json!({ "grid": p, "factorial_inv_shift": shift, "factorial_inv": inv, "flat": flat })))
}

/// Largest singular value of the dense multiplication matrix in
/// orthonormal coordinates, built independently of the sparse assembly.
pub fn dense_best_constant(spec: &Arc<AlgebraSpec>, norm: &NormSpec) -> gradenorm_core::Result<f64> {
    let basis = spec.basis(spec.truncation);
    let d = basis.len();
    let el = |m: &Monomial| GradedElement::<f64>::from_terms(spec, [(m.clone(), 1.0)]);
    let lengths = basis.iter().map(|m| norm.norm(&el(m))).collect::<gradenorm_core::Result<Vec<_>>>()?;
    let mut t = DMatrix::zeros(d, d * d);
    for (i, x) in basis.iter().enumerate() {
        for (j, y) in basis.iter().enumerate() {
            let xy = product(&el(x), &el(y))?;
            for (k, z) in basis.iter().enumerate() {
                t[(k, i * d + j)] = xy.coeff(z) * lengths[k] / (lengths[i] * lengths[j]);
            }
        }
    }
    Ok(t.singular_values().max())
}

fn sandwich() -> gradenorm_core::Result<Check> {
    let norm = NormSpec::normalized(WeightSpec::FactorialInv)?;
    let mut ok = true;
    let mut rows = Vec::new();
    for d in 2..=4 {
        let spec = arc(AlgebraSpec::grassmann(d, d))?;
        let rep = best_constant(&spec, &norm, &norm, &norm, None)?;
        let mut row_ok =
            rep.converged && rep.gamma_best >= SQRT_FOUR_THIRDS - 1e-6 && rep.gamma_best <= SQRT_THREE + 1e-6;
        let oracle = if d <= 3 {
            let o = dense_best_constant(&spec, &norm)?;
            row_ok &= (o - rep.gamma_best).abs() <= 1e-8;
            Some(o)
        } else {
            None
        };
        ok &= row_ok;
        rows.push(json!({ "d": d, "N": d, "report": rep, "dense_oracle": oracle, "pass": row_ok }));
    }
    Ok((ok, json!({ "configs": rows })))
}

fn standard_violation() -> gradenorm_core::Result<Check> {
    let budget = SearchBudget::default();
    let g = arc(AlgebraSpec::grassmann(6, 6))?;
    let out = unweighted_violation_search(&g, GramConvention::Standard, &budget)?;
    let blades = ["e1.2", "e3.4", "e5.6"];
    let g_ok = out.source == Some(WitnessSource::DisjointBlades)
        && out.witness.as_ref().is_some_and(|w| {
            (w.ratio - 2.0 / 3f64.sqrt()).abs() <= 1e-12
                && w.a.len() == 3
                && w.a.terms().all(|(m, c)| *c == 1.0 && blades.contains(&m.to_string().as_str()))
        });
    let s = arc(AlgebraSpec::symmetric(1, 2))?;
    let out_s = unweighted_violation_search(&s, GramConvention::Standard, &budget)?;
    let s_ok = out_s.witness.as_ref().is_some_and(|w| (w.ratio - 2f64.sqrt()).abs() <= 1e-12);
    let ratio = |o: &gradenorm_core::analyzer::ViolationOutcome| o.witness.as_ref().map(|w| w.ratio);
    Ok((
        g_ok && s_ok,
        json!({
            "grassmann_d6": { "ratio": ratio(&out), "source": out.source, "pass": g_ok },
            "symmetric_d1": { "ratio": ratio(&out_s), "source": out_s.source, "pass": s_ok },
        }),
    ))
}

fn gaussian(spec: &Arc<AlgebraSpec>, rng: &mut ChaCha8Rng, max_degree: usize) -> GradedElement<f64> {
    use gradenorm_core::FloatScalar;
    let terms: Vec<_> = spec.basis(max_degree).into_iter().map(|m| (m, f64::sample_normal(rng))).collect();
    GradedElement::from_terms(spec, terms)
}

fn gamma_laws(seed: u64) -> gradenorm_core::Result<Check> {
    let op = GammaOperator::diagonal(&[2.0, 3.0, 5.0])?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for spec in [arc(AlgebraSpec::grassmann(3, 4))?, arc(AlgebraSpec::symmetric(3, 4))?] {
        for _ in 0..1000 {
            let da = rng.random_range(0..=4);
            let a = gaussian(&spec, &mut rng, da);
            let b = gaussian(&spec, &mut rng, 4 - da);
            worst = worst.max(multiplicativity_residual(&op, &a, &b)?.relative);
        }
    }
    let residual_ok = worst <= 1e-10;

    let mut max_ratio: f64 = 0.0;
    let mut rows = Vec::new();
    for spec in [arc(AlgebraSpec::grassmann(3, 3))?, arc(AlgebraSpec::symmetric(3, 4))?] {
        for w in [WeightSpec::FactorialInv, WeightSpec::FactorialInvShift] {
            for exponent in [-1.0, 0.5, 1.0] {
                let norm = NormSpec::normalized(w.clone())?.with_twist(GammaTwist::new(op.clone(), exponent)?);
                let rep = ratio_sample::<f64, _>(&spec, &norm, &norm, &norm, 10_000, seed)?;
                max_ratio = max_ratio.max(rep.max_ratio);
                rows.push(json!({ "kind": spec.kind, "weights": w, "exponent": exponent, "max_ratio": rep.max_ratio }));
            }
        }
    }
    let twist_ok = max_ratio <= SQRT_THREE + 1e-9;
    Ok((
        residual_ok && twist_ok,
        json!({ "max_relative_residual": worst, "twisted_sampling": rows, "twisted_max_ratio": max_ratio }),
    ))
}

fn gap(x: &GradedElement<f64>, y: &GradedElement<f64>) -> f64 {
    (x - y).coefficient_norm() / x.coefficient_norm().max(1.0)
}

fn random_element(spec: &Arc<AlgebraSpec>, rng: &mut ChaCha8Rng, max_degree: usize, terms: usize) -> GradedElement<f64> {
    let basis = spec.basis(max_degree);
    let picks: Vec<_> =
        (0..terms).map(|_| (basis[rng.random_range(0..basis.len())].clone(), rng.random_range(-1.0..1.0))).collect();
    GradedElement::from_terms(spec, picks)
}

/// Sum over all permutations.
pub fn naive_permanent(m: &DMatrix<i64>) -> i64 {
    fn go(m: &DMatrix<i64>, row: usize, used: &mut [bool]) -> i64 {
        if row == m.nrows() {
            return 1;
        }
        let mut total = 0;
        for col in 0..m.ncols() {
            if !used[col] {
                used[col] = true;
                total += m[(row, col)] * go(m, row + 1, used);
                used[col] = false;
            }
        }
        total
    }
    go(m, 0, &mut vec![false; m.ncols()])
}

fn algebra_correctness(seed: u64) -> gradenorm_core::Result<Check> {
    let omega = vec![vec![0.5, 1.0, 0.0], vec![-1.0, 2.0, 0.25], vec![0.0, 0.75, -1.0]];
    let kinds = [
        arc(AlgebraSpec::tensor(3, 6))?,
        arc(AlgebraSpec::symmetric(3, 6))?,
        arc(AlgebraSpec::grassmann(5, 6))?,
        arc(AlgebraSpec::superalgebra(4, 2, 6))?,
        arc(AlgebraSpec::clifford(4, 6))?,
        arc(AlgebraSpec::paired(0, omega.clone(), 6))?,
        arc(AlgebraSpec::paired(1, omega.clone(), 6))?,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let mut ok = true;
    for spec in &kinds {
        let mut assoc: f64 = 0.0;
        for _ in 0..1000 {
            let (a, b, c) = (
                random_element(spec, &mut rng, 2, 3),
                random_element(spec, &mut rng, 2, 3),
                random_element(spec, &mut rng, 2, 3),
            );
            let left = product(&product(&a, &b)?, &c)?;
            let right = product(&a, &product(&b, &c)?)?;
            assoc = assoc.max(gap(&left, &right));
        }
        let comm = graded_commutativity(spec, &mut rng)?;
        let row_ok = assoc <= 1e-10 && comm.is_none_or(|c| c <= 1e-10);
        ok &= row_ok;
        rows.push(json!({ "algebra": spec.to_string(), "associativity": assoc, "commutativity": comm, "pass": row_ok }));
    }

    let exact = exact_associativity(&omega)?;
    ok &= exact == 0;

    let mut perm_ok = true;
    for n in 1..=7 {
        for _ in 0..25 {
            let m = DMatrix::from_fn(n, n, |_, _| rng.random_range(-4i64..=4));
            perm_ok &= permanent(&m.map(|x| x as f64))? == naive_permanent(&m) as f64;
        }
    }
    ok &= perm_ok;
    Ok((ok, json!({ "random": rows, "exact_nonzero_residuals": exact, "permanent_pass": perm_ok })))
}

/// Largest relative violation of `ab = +-ba` over 1000 pairs; `None` for
/// the tensor algebra, which has no commutation law. Class-1 kinds use
/// random monomials with the Koszul sign; paired kinds use random degree-1
/// elements `u, v` and `uv - (-1)^chi vu = (w(u,v) - (-1)^chi w(v,u)) e0`.
fn graded_commutativity(spec: &Arc<AlgebraSpec>, rng: &mut ChaCha8Rng) -> gradenorm_core::Result<Option<f64>> {
    let mut worst: f64 = 0.0;
    match spec.kind {
        AlgebraKind::Tensor => return Ok(None),
        AlgebraKind::Paired => {
            let chi = if spec.parity == 1 { -1.0 } else { 1.0 };
            let d = spec.generators;
            for _ in 0..1000 {
                let u: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
                let v: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
                let lin = |x: &[f64]| {
                    GradedElement::from_terms(spec, spec.basis_of_degree(1).into_iter().zip(x.iter().copied()).collect::<Vec<_>>())
                };
                let (eu, ev) = (lin(&u), lin(&v));
                let lhs = &product(&eu, &ev)? - &product(&ev, &eu)?.scale(&chi);
                let form = |x: &[f64], y: &[f64]| {
                    let mut s = 0.0;
                    for i in 0..d {
                        for j in 0..d {
                            s += x[i] * y[j] * spec.pairing_entry(i as u16 + 1, j as u16 + 1).re;
                        }
                    }
                    s
                };
                let rhs = GradedElement::unit(spec).scale(&(form(&u, &v) - chi * form(&v, &u)));
                worst = worst.max(gap(&lhs, &rhs));
            }
        }
        _ => {
            let odd = |m: &Monomial| m.word().iter().filter(|&&g| spec.is_odd(g)).count();
            for _ in 0..1000 {
                let p = rng.random_range(0..=3);
                let q = rng.random_range(0..=3);
                let (bp, bq) = (spec.basis_of_degree(p), spec.basis_of_degree(q));
                if bp.is_empty() || bq.is_empty() {
                    continue;
                }
                let x = bp[rng.random_range(0..bp.len())].clone();
                let y = bq[rng.random_range(0..bq.len())].clone();
                let sign = if odd(&x) * odd(&y) % 2 == 0 { 1.0 } else { -1.0 };
                let a = GradedElement::from_terms(spec, [(x, 1.0)]);
                let b = GradedElement::from_terms(spec, [(y, 1.0)]);
                worst = worst.max(gap(&product(&a, &b)?, &product(&b, &a)?.scale(&sign)));
            }
        }
    }
    Ok(Some(worst))
}

/// Number of monomial triples with non-zero associator in exact
/// arithmetic, over every kind with `d = 3`, `N = 3`.
fn exact_associativity(omega: &[Vec<f64>]) -> gradenorm_core::Result<usize> {
    let integral: Vec<Vec<f64>> = omega.iter().map(|r| r.iter().map(|x| (x * 4.0).round()).collect()).collect();
    let specs = [
        arc(AlgebraSpec::tensor(3, 3))?,
        arc(AlgebraSpec::symmetric(3, 3))?,
        arc(AlgebraSpec::grassmann(3, 3))?,
        arc(AlgebraSpec::superalgebra(3, 1, 3))?,
        arc(AlgebraSpec::clifford(3, 3))?,
        arc(AlgebraSpec::paired(0, integral.clone(), 3))?,
        arc(AlgebraSpec::paired(1, integral, 3))?,
    ];
    let mut bad = 0;
    for spec in &specs {
        let basis = spec.basis(3);
        let el = |m: &Monomial| GradedElement::from_terms(spec, [(m.clone(), Rational64::from_integer(1))]);
        for x in &basis {
            for y in &basis {
                for z in &basis {
                    if x.degree() + y.degree() + z.degree() > 3 {
                        continue;
                    }
                    let (a, b, c) = (el(x), el(y), el(z));
                    let left = product(&product(&a, &b)?, &c)?;
                    let right = product(&a, &product(&b, &c)?)?;
                    if !(&left - &right).is_zero() {
                        bad += 1;
                    }
                }
            }
        }
    }
    Ok(bad)
}

/// Weight triples of the cross-parameter estimates on the grid
/// `sigma in {-1,-2}, rho in {-1,0,1}, s in {-1,0}`, as
/// `(label, output, input)` with both factors measured in the input norm.
pub fn cross_parameter_cases() -> Vec<(&'static str, [f64; 3], [f64; 3])> {
    let grid: Vec<[f64; 3]> = [-1.0, -2.0]
        .iter()
        .flat_map(|&s| [-1.0, 0.0, 1.0].iter().flat_map(move |&r| [-1.0, 0.0].map(|t| [s, r, t])))
        .collect();
    let mut cases = Vec::new();
    for &p in &grid {
        if p[0] == -1.0 && p[2] <= 0.0 {
            cases.push(("same_sigma_minus_one", p, p));
        }
        if p[0] < -1.0 {
            cases.push(("same_sigma_below_minus_one", p, p));
        }
    }
    for &out in &grid {
        for &inp in &grid {
            if out[0] < inp[0] {
                cases.push(("smaller_sigma", out, inp));
            } else if out[0] == inp[0] && out[1] < inp[1] {
                cases.push(("smaller_rho", out, inp));
            }
        }
    }
    cases
}

fn cross_parameter(seed: u64) -> gradenorm_core::Result<Check> {
    let specs = [arc(AlgebraSpec::grassmann(4, 4))?, arc(AlgebraSpec::symmetric(2, 5))?];
    let mut ok = true;
    let mut failures = Vec::new();
    let mut worst_margin = f64::INFINITY;
    let cases = cross_parameter_cases();
    for (label, out, inp) in &cases {
        let w_out = WeightSpec::sigma_rho_s(out[0], out[1], out[2]);
        let w_in = WeightSpec::sigma_rho_s(inp[0], inp[1], inp[2]);
        let n_out = NormSpec::normalized(w_out.clone())?;
        let n_in = NormSpec::normalized(w_in.clone())?;
        for spec in &specs {
            let audit = delta_audit(&w_in, &w_in, &w_out, spec.truncation, None)?;
            let bound = theorem2_constant(audit.delta_min);
            let rep = ratio_sample::<f64, _>(spec, &n_in, &n_in, &n_out, 1000, seed)?;
            worst_margin = worst_margin.min(bound - rep.max_ratio);
            if rep.max_ratio > bound + 1e-9 {
                ok = false;
                failures.push(json!({ "case": label, "out": out, "in": inp, "kind": spec.kind, "max_ratio": rep.max_ratio, "bound": bound }));
            }
        }
    }
    Ok((ok, json!({ "cases": cases.len(), "samples_per_case": 1000, "smallest_margin": worst_margin, "failures": failures })))
}

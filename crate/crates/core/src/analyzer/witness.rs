use std::sync::Arc;

use serde::Serialize;

use super::{tolerance, InnerProduct};
use crate::algebra::{product, AlgebraSpec, GradedElement};
use crate::error::{Error, Result};
use crate::scalar::FloatScalar;

/// An explicit pair `(a, b)` and the ratio `||ab|| / (||a|| ||b||)` it attains.
#[derive(Debug, Clone, Serialize)]
#[serde(bound(serialize = ""))]
pub struct WitnessReport<S: FloatScalar> {
    pub a: GradedElement<S>,
    pub b: GradedElement<S>,
    pub lambda_star: Option<f64>,
    pub ratio: f64,
    pub closed_form_ratio: Option<f64>,
    pub norms: serde_json::Value,
}

/// `||(e0 + lambda f)^2||^2 / ||e0 + lambda f||^4` at `t = lambda^2`, for a unit
/// `f` orthogonal to `e0` and `f^2`, with `c1 = (e0|f^2)` and `c2 = ||f^2||^2`.
pub fn theorem1_ratio_sq(c1: f64, c2: f64, t: f64) -> f64 {
    (1.0 + (4.0 + 2.0 * c1) * t + c2 * t * t) / ((1.0 + t) * (1.0 + t))
}

fn check_spec<S: FloatScalar>(spec: &Arc<AlgebraSpec>, f: &GradedElement<S>) -> Result<()> {
    if **f.spec() == **spec {
        Ok(())
    } else {
        Err(Error::SpecMismatch)
    }
}

fn unit_direction<S: FloatScalar, N: InnerProduct<S>>(norm: &N, f: &GradedElement<S>) -> Result<GradedElement<S>> {
    let e0 = GradedElement::unit(f.spec());
    let n0 = norm.norm(&e0)?;
    if (n0 - 1.0).abs() > tolerance::HYPOTHESIS {
        return Err(Error::HypothesisViolated(format!("||e0|| = {n0}, expected 1")));
    }
    let nf = norm.norm(f)?;
    if nf == 0.0 || !nf.is_finite() {
        return Err(Error::HypothesisViolated("direction f vanishes".into()));
    }
    Ok(f.scale(&S::from_f64(1.0 / nf)))
}

/// Maximizes `R(t)` over `t >= 0` by golden-section search on
/// `u = t/(1+t)`, which maps the half line onto `[0, 1)`.
fn golden_section_max(r: impl Fn(f64) -> f64) -> f64 {
    let to_t = |u: f64| u / (1.0 - u);
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut lo, mut hi) = (0.0, 1.0 - 1e-9);
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let (mut f1, mut f2) = (r(to_t(x1)), r(to_t(x2)));
    for _ in 0..200 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = r(to_t(x2));
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = r(to_t(x1));
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    to_t(0.5 * (lo + hi))
}

fn measured_pair<S: FloatScalar, N: InnerProduct<S>>(
    norm: &N,
    f: &GradedElement<S>,
    lambda: f64,
) -> Result<(GradedElement<S>, f64)> {
    let a = &GradedElement::unit(f.spec()) + &f.scale(&S::from_f64(lambda));
    let a2 = product(&a, &a)?;
    if a2.is_truncated() {
        return Err(Error::Truncated);
    }
    let na = norm.norm(&a)?;
    Ok((a, norm.norm(&a2)? / (na * na)))
}

/// Builds `a = b = e0 + lambda* f` maximizing `||a^2|| / ||a||^2` along a
/// direction `f` with `(e0|f) = (f|f^2) = 0` and `(e0|f^2) >= 0`.
///
/// `f` is rescaled to unit norm first. The maximizer comes from the
/// stationary point of the closed-form quartic ratio, cross-checked by a
/// golden-section search; the returned ratio is measured in the algebra and
/// must agree with the closed form to `1e-9`.
pub fn theorem1_sweep<S: FloatScalar, N: InnerProduct<S>>(
    spec: &Arc<AlgebraSpec>,
    norm: &N,
    f: &GradedElement<S>,
) -> Result<WitnessReport<S>> {
    check_spec(spec, f)?;
    let f = unit_direction(norm, f)?;
    let e0 = GradedElement::unit(f.spec());
    let f2 = product(&f, &f)?;
    if f2.is_truncated() {
        return Err(Error::HypothesisViolated(format!(
            "truncation degree {} too small to represent f^2",
            spec.truncation
        )));
    }
    let e0_f = norm.inner(&e0, &f)?;
    if e0_f.norm() > tolerance::HYPOTHESIS {
        return Err(Error::HypothesisViolated(format!("(e0|f) = {e0_f}")));
    }
    let c2 = norm.norm(&f2)?.powi(2);
    let f_f2 = norm.inner(&f, &f2)?;
    if f_f2.norm() > tolerance::HYPOTHESIS * c2.sqrt().max(1.0) {
        return Err(Error::HypothesisViolated(format!("(f|f^2) = {f_f2}")));
    }
    let e0_f2 = norm.inner(&e0, &f2)?;
    let scale = c2.sqrt().max(1.0);
    if e0_f2.im.abs() > tolerance::HYPOTHESIS * scale || e0_f2.re < -tolerance::HYPOTHESIS * scale {
        return Err(Error::HypothesisViolated(format!("(e0|f^2) = {e0_f2} is not non-negative")));
    }
    let c1 = e0_f2.re.max(0.0);
    let ratio_sq = |t: f64| theorem1_ratio_sq(c1, c2, t);

    // dR/dt has numerator (b - 2) + (2 c2 - b) t with b = 4 + 2 c1 > 2
    let b = 4.0 + 2.0 * c1;
    let mut candidates = Vec::with_capacity(2);
    if b - 2.0 * c2 > 0.0 {
        candidates.push((b - 2.0) / (b - 2.0 * c2));
    }
    candidates.push(golden_section_max(ratio_sq));
    let t_star = candidates
        .into_iter()
        .fold((0.0, ratio_sq(0.0)), |best, t| {
            let r = ratio_sq(t);
            if r > best.1 {
                (t, r)
            } else {
                best
            }
        })
        .0;
    let lambda = t_star.sqrt();
    let closed = ratio_sq(t_star).sqrt();
    let (a, ratio) = measured_pair(norm, &f, lambda)?;
    if (ratio - closed).abs() > tolerance::CONSTANT * closed {
        return Err(Error::HypothesisViolated(format!(
            "measured ratio {ratio} disagrees with closed form {closed}"
        )));
    }
    Ok(WitnessReport {
        b: a.clone(),
        a,
        lambda_star: Some(lambda),
        ratio,
        closed_form_ratio: Some(closed),
        norms: norm.describe(),
    })
}

/// Witness built from a nilpotent `f` (`f^2 = 0`). When `Re(e0|f) = c`
/// is non-zero, `lambda = -2c` gives `||a||^2 = 1` and `||a^2||^2 = 1 + 8c^2`;
/// otherwise this is [`theorem1_sweep`].
pub fn nilpotent_witness<S: FloatScalar, N: InnerProduct<S>>(
    spec: &Arc<AlgebraSpec>,
    norm: &N,
    f: &GradedElement<S>,
) -> Result<WitnessReport<S>> {
    check_spec(spec, f)?;
    let f2 = product(f, f)?;
    if !f2.is_zero() || f2.is_truncated() {
        return Err(Error::NotNilpotent);
    }
    let f = unit_direction(norm, f)?;
    let c = norm.inner(&GradedElement::unit(spec), &f)?.re;
    if c.abs() <= tolerance::HYPOTHESIS {
        return theorem1_sweep(spec, norm, &f);
    }
    let lambda = -2.0 * c;
    let closed = (1.0 + 8.0 * c * c).sqrt();
    let (a, ratio) = measured_pair(norm, &f, lambda)?;
    if (ratio - closed).abs() > tolerance::CONSTANT * closed {
        return Err(Error::HypothesisViolated(format!(
            "measured ratio {ratio} disagrees with closed form {closed}"
        )));
    }
    Ok(WitnessReport {
        b: a.clone(),
        a,
        lambda_star: Some(lambda),
        ratio,
        closed_form_ratio: Some(closed),
        norms: norm.describe(),
    })
}

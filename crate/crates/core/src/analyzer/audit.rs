use serde::Serialize;

use super::SQRT_THREE;
use crate::error::{Error, Result};
use crate::norm::WeightSpec;

/// Values within this relative distance of the running maximum count as
/// ties, so that rounding cannot move the reported argmax.
const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub grid: usize,
    /// `max (p+q-1) w_{p+q}(rho) / (w_p(sigma) w_q(tau))` over `1 <= p, q <= grid`.
    pub delta_min: f64,
    pub argmax: (usize, usize),
    /// `sqrt(3) max(1, delta_min)`.
    pub certified_gamma: f64,
    pub target_gamma: f64,
    pub pass: bool,
}

/// Product constant `sqrt(3) max(1, delta)` implied by a weight audit.
pub fn theorem2_constant(delta: f64) -> f64 {
    SQRT_THREE * delta.max(1.0)
}

fn cell(w_sigma: &WeightSpec, w_tau: &WeightSpec, w_rho: &WeightSpec, p: usize, q: usize) -> Result<f64> {
    let n = p + q;
    let lin = [w_rho.weight(n)?, w_sigma.weight(p)?, w_tau.weight(q)?];
    if lin.iter().all(|w| w.is_normal()) {
        return Ok((n - 1) as f64 * lin[0] / (lin[1] * lin[2]));
    }
    let ln = ((n - 1) as f64).ln() + w_rho.ln_weight(n)? - w_sigma.ln_weight(p)? - w_tau.ln_weight(q)?;
    Ok(ln.exp())
}

/// Smallest `delta` with `(p+q-1) w_{p+q}(rho) <= delta w_p(sigma) w_q(tau)` on
/// the grid `1 <= p, q <= grid`.
///
/// Cells are visited by increasing `p+q`, then increasing `p`; the first
/// maximal cell is reported. `pass` compares `sqrt(3) max(1, delta)`
/// against `target_gamma` (default `sqrt(3)`).
pub fn delta_audit(
    w_sigma: &WeightSpec,
    w_tau: &WeightSpec,
    w_rho: &WeightSpec,
    grid: usize,
    target_gamma: Option<f64>,
) -> Result<AuditReport> {
    if grid < 1 {
        return Err(Error::InvalidWeights("audit grid must be at least 1".into()));
    }
    let mut best = f64::NEG_INFINITY;
    let mut argmax = (1, 1);
    for total in 2..=2 * grid {
        for p in total.saturating_sub(grid).max(1)..=(total - 1).min(grid) {
            let v = cell(w_sigma, w_tau, w_rho, p, total - p)?;
            if !v.is_finite() {
                return Err(Error::InvalidWeights(format!("audit cell ({p},{}) is not finite", total - p)));
            }
            if best == f64::NEG_INFINITY || v > best + TIE_TOLERANCE * best.abs() {
                best = v;
                argmax = (p, total - p);
            }
        }
    }
    let certified_gamma = theorem2_constant(best);
    let target_gamma = target_gamma.unwrap_or(SQRT_THREE);
    Ok(AuditReport {
        grid,
        delta_min: best,
        argmax,
        certified_gamma,
        target_gamma,
        pass: certified_gamma <= target_gamma * (1.0 + TIE_TOLERANCE),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn same(w: WeightSpec, grid: usize) -> AuditReport {
        delta_audit(&w, &w, &w, grid, None).unwrap()
    }

    #[test]
    fn factorial_families() {
        for grid in [2, 5, 50] {
            let shift = same(WeightSpec::FactorialInvShift, grid);
            assert!((shift.delta_min - 1.0).abs() <= 1e-12);
            assert_eq!(shift.argmax, (1, 1));
            assert!(shift.pass);

            let inv = same(WeightSpec::FactorialInv, grid);
            let expected = grid as f64 / (grid as f64 + 1.0);
            assert!((inv.delta_min - expected).abs() <= 1e-12, "{inv:?}");
            assert_eq!(inv.argmax, (1, grid));

            let flat = same(WeightSpec::flat(), grid);
            assert_eq!(flat.delta_min, (2 * grid - 1) as f64);
            assert_eq!(flat.argmax, (grid, grid));
            assert!(!flat.pass);
        }
    }

    #[test]
    fn log_space_survives_underflow() {
        let w = WeightSpec::sigma_rho_s(-3.0, 0.0, 0.0);
        let r = same(w, 120);
        assert!(r.delta_min.is_finite() && r.delta_min > 0.0);
    }

    #[test]
    fn short_explicit_weights_fail() {
        let w = WeightSpec::explicit(vec![1.0, 1.0, 0.5]).unwrap();
        assert!(delta_audit(&w, &w, &w, 2, None).is_err());
    }
}

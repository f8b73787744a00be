use std::sync::Arc;

use nalgebra::DVector;
use serde::Serialize;

use super::map::MultiplicationMap;
use crate::algebra::{AlgebraKind, AlgebraSpec};
use crate::error::{Error, Result};
use crate::norm::NormSpec;

pub const POWER_ITERATION_CAP: usize = 100_000;
/// Input dimension up to which the rank-one refinement runs.
const BILINEAR_MAX_DIM: usize = 256;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BestConstantReport {
    /// Largest singular value of the multiplication map on the Hilbert
    /// tensor product, an upper bound for `sup ||ab|| / (||a|| ||b||)`.
    pub gamma_best: f64,
    pub iterations: usize,
    /// `||T^T T v - theta v|| / theta` at exit.
    pub residual: f64,
    pub converged: bool,
    pub input_dimension: usize,
    pub output_dimension: usize,
    pub active_pairs: usize,
    /// Best `||ab|| / (||a|| ||b||)` found by alternating maximization over
    /// pairs of elements; a lower bound on the bilinear constant.
    pub bilinear_lower: Option<f64>,
}

/// Operator norm of the multiplication map from the orthonormalized
/// `(sigma) (x) (tau)` space to the orthonormalized `(rho)` space.
///
/// Inputs range over monomials of degree at most `degree_cap` (default
/// `N`); products are projected onto degrees `<= N`. Non-convergence is
/// reported through `converged`, never hidden.
pub fn best_constant(
    spec: &Arc<AlgebraSpec>,
    sigma: &NormSpec,
    tau: &NormSpec,
    rho: &NormSpec,
    degree_cap: Option<usize>,
) -> Result<BestConstantReport> {
    let cap = degree_cap.unwrap_or(spec.truncation).min(spec.truncation);
    if spec.kind == AlgebraKind::Paired && 2 * cap > spec.truncation {
        return Err(Error::Unsupported(
            "paired products are only exact when twice the degree cap fits the truncation".into(),
        ));
    }
    let basis = spec.basis(cap);
    let map = MultiplicationMap::assemble(spec, basis.clone(), basis, [sigma, tau, rho])?;
    let top = map.top_singular_value(POWER_ITERATION_CAP);
    let dim = map.left.len();
    let bilinear_lower = (dim <= BILINEAR_MAX_DIM).then(|| {
        let uniform = DVector::from_element(dim, 1.0);
        let mut unit_plus = DVector::zeros(dim);
        unit_plus[0] = 1.0;
        if dim > 1 {
            unit_plus[1] = 0.5f64.sqrt();
        }
        [uniform, unit_plus]
            .into_iter()
            .map(|s| map.alternate(s, 500).value)
            .fold(0.0, f64::max)
    });
    Ok(BestConstantReport {
        gamma_best: top.value,
        iterations: top.iterations,
        residual: top.residual,
        converged: top.converged,
        input_dimension: dim,
        output_dimension: map.outputs.len(),
        active_pairs: map.active_pairs(),
        bilinear_lower,
    })
}

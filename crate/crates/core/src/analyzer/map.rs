use std::collections::HashMap;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use super::tolerance;
use crate::algebra::{product, AlgebraSpec, GradedElement, Monomial};
use crate::error::{Error, Result};
use crate::norm::NormSpec;

/// Upper limit on the number of basis pairs assembled into one map.
pub const MAX_BASIS_PAIRS: usize = 1 << 22;

/// Multiplication restricted to `span(left) x span(right)` in orthonormal
/// coordinates. The column for the basis pair `(i, j)` sits at
/// `i * right.len() + j` and lists `(output index, value)`.
pub(crate) struct MultiplicationMap {
    pub left: Vec<Monomial>,
    pub right: Vec<Monomial>,
    pub outputs: Vec<Monomial>,
    columns: Vec<Vec<(usize, f64)>>,
}

pub(crate) struct PowerIteration {
    pub value: f64,
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
}

pub(crate) struct RankOne {
    pub value: f64,
    pub left: DVector<f64>,
    pub right: DVector<f64>,
}

impl MultiplicationMap {
    pub fn assemble(
        spec: &Arc<AlgebraSpec>,
        left: Vec<Monomial>,
        right: Vec<Monomial>,
        norms: [&NormSpec; 3],
    ) -> Result<Self> {
        let [sigma, tau, rho] = norms;
        for n in norms {
            if !n.has_diagonal_gram() {
                return Err(Error::Unsupported("basis monomials are not orthogonal under this norm".into()));
            }
        }
        let pairs = left.len() * right.len();
        if pairs > MAX_BASIS_PAIRS {
            return Err(Error::OversizeMatrix { size: pairs, limit: MAX_BASIS_PAIRS });
        }
        let outputs = spec.basis(spec.truncation);
        let out_index: HashMap<&Monomial, usize> = outputs.iter().enumerate().map(|(k, m)| (m, k)).collect();
        let scale = |n: &NormSpec, ms: &[Monomial]| ms.iter().map(|m| n.monomial_norm(spec, m)).collect::<Result<Vec<_>>>();
        let (sl, sr, so) = (scale(sigma, &left)?, scale(tau, &right)?, scale(rho, &outputs)?);
        let element = |m: &Monomial| GradedElement::<f64>::from_terms(spec, [(m.clone(), 1.0)]);
        let right_elements: Vec<_> = right.iter().map(element).collect();
        let mut columns = Vec::with_capacity(pairs);
        for (i, m) in left.iter().enumerate() {
            let a = element(m);
            for (j, b) in right_elements.iter().enumerate() {
                let ab = product(&a, b)?;
                columns.push(
                    ab.terms()
                        .map(|(m, c)| {
                            let k = out_index[m];
                            (k, c * so[k] / (sl[i] * sr[j]))
                        })
                        .collect(),
                );
            }
        }
        Ok(MultiplicationMap { left, right, outputs, columns })
    }

    fn column(&self, i: usize, j: usize) -> &[(usize, f64)] {
        &self.columns[i * self.right.len() + j]
    }

    pub fn active_pairs(&self) -> usize {
        self.columns.iter().filter(|c| !c.is_empty()).count()
    }

    /// Largest singular value of the whole map, by power iteration on
    /// `T^T T` over the non-zero columns.
    pub fn top_singular_value(&self, cap: usize) -> PowerIteration {
        let active: Vec<&[(usize, f64)]> = self.columns.iter().filter(|c| !c.is_empty()).map(Vec::as_slice).collect();
        if active.is_empty() {
            return PowerIteration { value: 0.0, iterations: 0, residual: 0.0, converged: true };
        }
        let mut x: Vec<f64> = (0..active.len()).map(|k| 1.0 + 1e-3 * (k % 7) as f64).collect();
        normalize(&mut x);
        let mut y = vec![0.0; self.outputs.len()];
        let (mut theta, mut residual) = (0.0, f64::INFINITY);
        for it in 1..=cap {
            y.iter_mut().for_each(|v| *v = 0.0);
            for (xi, col) in x.iter().zip(&active) {
                for &(k, v) in *col {
                    y[k] += v * xi;
                }
            }
            theta = y.iter().map(|v| v * v).sum::<f64>();
            let mut z: Vec<f64> = active.iter().map(|col| col.iter().map(|&(k, v)| v * y[k]).sum()).collect();
            residual = z.iter().zip(&x).map(|(zi, xi)| (zi - theta * xi).powi(2)).sum::<f64>().sqrt()
                / theta.max(f64::MIN_POSITIVE);
            if residual <= tolerance::POWER_ITERATION {
                return PowerIteration { value: theta.sqrt(), iterations: it, residual, converged: true };
            }
            normalize(&mut z);
            x = z;
        }
        PowerIteration { value: theta.sqrt(), iterations: cap, residual, converged: false }
    }

    /// Dense matrix of `u -> T(u (x) b)` (`fixed_right`) or `u -> T(a (x) u)`.
    fn partial(&self, fixed: &DVector<f64>, fixed_right: bool) -> DMatrix<f64> {
        let free = if fixed_right { self.left.len() } else { self.right.len() };
        let mut m = DMatrix::zeros(self.outputs.len(), free);
        for u in 0..free {
            for (f, &w) in fixed.iter().enumerate() {
                if w == 0.0 {
                    continue;
                }
                let col = if fixed_right { self.column(u, f) } else { self.column(f, u) };
                for &(k, v) in col {
                    m[(k, u)] += v * w;
                }
            }
        }
        m
    }

    /// Alternating maximization of `|T(a (x) b)|` over unit `a`, `b`,
    /// started from `b = start`. Each half step is an exact top singular
    /// pair, so the value is non-decreasing.
    pub fn alternate(&self, start: DVector<f64>, iterations: usize) -> RankOne {
        let mut b = start.normalize();
        let mut a = DVector::zeros(self.left.len());
        let mut value = 0.0;
        for _ in 0..iterations.max(1) {
            let (s1, na) = top_right_singular(self.partial(&b, true));
            a = na;
            let (s2, nb) = top_right_singular(self.partial(&a, false));
            b = nb;
            let done = (s2 - value).abs() <= 1e-15 * s2.max(s1);
            value = s2.max(s1);
            if done {
                break;
            }
        }
        RankOne { value, left: a, right: b }
    }
}

fn normalize(x: &mut [f64]) {
    let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if n > 0.0 {
        x.iter_mut().for_each(|v| *v /= n);
    }
}

fn top_right_singular(m: DMatrix<f64>) -> (f64, DVector<f64>) {
    let cols = m.ncols();
    let svd = m.svd(false, true);
    let (k, s) = svd
        .singular_values
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |b, (k, &v)| if v > b.1 { (k, v) } else { b });
    match svd.v_t {
        Some(vt) if s.is_finite() => (s, vt.row(k).transpose()),
        _ => (0.0, DVector::from_element(cols, 1.0 / (cols as f64).sqrt())),
    }
}

//! Second quantization: an operator `A` on the generator space lifted
//! slot-wise to the whole algebra, `Gamma(A)(f1 ... fn) = (A f1) ... (A fn)`.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::algebra::{accumulate, carrier_product, product, AlgebraSpec, GradedElement, Monomial};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Largest degree expanded slot by slot for a non-diagonal operator.
pub const DENSE_EXPANSION_MAX_DEGREE: usize = 12;

const SYMMETRY_TOL: f64 = 1e-12;
const EIGEN_RESIDUAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct SpectralForm {
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors as columns.
    pub eigenvectors: DMatrix<f64>,
}

#[derive(Debug, Clone)]
pub struct GammaOperator {
    matrix: DMatrix<f64>,
    diagonal: bool,
    spectral: Option<SpectralForm>,
}

impl Serialize for GammaOperator {
    fn serialize<Z: Serializer>(&self, serializer: Z) -> std::result::Result<Z::Ok, Z::Error> {
        let rows: Vec<Vec<f64>> = self.matrix.row_iter().map(|r| r.iter().copied().collect()).collect();
        rows.serialize(serializer)
    }
}

impl GammaOperator {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        let d = matrix.nrows();
        if matrix.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, found: matrix.ncols() });
        }
        if matrix.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidNorm("operator entries must be finite".into()));
        }
        let diagonal = (0..d).all(|i| (0..d).all(|j| i == j || matrix[(i, j)] == 0.0));
        let spectral = if diagonal {
            Some(SpectralForm {
                eigenvalues: matrix.diagonal().iter().copied().collect(),
                eigenvectors: DMatrix::identity(d, d),
            })
        } else {
            spectral_form(&matrix)
        };
        Ok(GammaOperator { matrix, diagonal, spectral })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let d = rows.len();
        if let Some(row) = rows.iter().find(|r| r.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, found: row.len() });
        }
        Self::new(DMatrix::from_fn(d, d, |i, j| rows[i][j]))
    }

    pub fn diagonal(entries: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(entries)))
    }

    pub fn identity(d: usize) -> Self {
        Self::new(DMatrix::identity(d, d)).expect("identity is a valid operator")
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn is_diagonal(&self) -> bool {
        self.diagonal
    }

    pub fn spectral(&self) -> Option<&SpectralForm> {
        self.spectral.as_ref()
    }

    pub fn min_eigenvalue(&self) -> Option<f64> {
        self.spectral
            .as_ref()
            .map(|s| s.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min))
    }

    /// `A^exponent` through the spectral form; needs positive eigenvalues.
    pub fn power(&self, exponent: f64) -> Result<GammaOperator> {
        let spectral = self.spectral.as_ref().ok_or(Error::MissingSpectralForm)?;
        if let Some(&bad) = spectral.eigenvalues.iter().find(|&&x| x <= 0.0) {
            return Err(Error::NonPositiveEigenvalue(bad));
        }
        if exponent == 0.0 {
            return Ok(Self::identity(self.dim()));
        }
        if exponent == 1.0 {
            return Ok(self.clone());
        }
        if self.diagonal {
            let diag: Vec<f64> = spectral.eigenvalues.iter().map(|x| x.powf(exponent)).collect();
            return Self::diagonal(&diag);
        }
        let v = &spectral.eigenvectors;
        let lambda = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.dim(),
            spectral.eigenvalues.iter().map(|x| x.powf(exponent)),
        ));
        let mut m = v * lambda * v.transpose();
        // restore exact symmetry lost to rounding
        m = (&m + m.transpose()) * 0.5;
        let mut out = Self::new(m)?;
        out.spectral = Some(SpectralForm {
            eigenvalues: spectral.eigenvalues.iter().map(|x| x.powf(exponent)).collect(),
            eigenvectors: v.clone(),
        });
        Ok(out)
    }

    /// The operator of `A B`, so that `Gamma(A) Gamma(B) = Gamma(AB)`.
    pub fn compose(&self, other: &GammaOperator) -> Result<GammaOperator> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Self::new(&self.matrix * &other.matrix)
    }

    /// `Gamma(A) a`, with `Gamma(A) e0 = e0`.
    pub fn apply<S: Scalar>(&self, a: &GradedElement<S>) -> Result<GradedElement<S>> {
        let spec = a.spec();
        if spec.generators != self.dim() {
            return Err(Error::DimensionMismatch { expected: spec.generators, found: self.dim() });
        }
        let d = self.dim();
        let entries: Vec<Vec<S>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let x = self.matrix[(i, j)];
                        S::from_complex(Complex64::new(x, 0.0))
                            .ok_or_else(|| Error::Unsupported(format!("operator entry {x} not representable")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let mut terms = BTreeMap::new();
        for (m, c) in a.terms() {
            if self.diagonal {
                let factor = m
                    .word()
                    .iter()
                    .fold(c.clone(), |acc, &g| acc * entries[g as usize - 1][g as usize - 1].clone());
                accumulate(&mut terms, m.clone(), factor);
                continue;
            }
            if m.degree() > DENSE_EXPANSION_MAX_DEGREE {
                return Err(Error::OversizeExpansion {
                    degree: m.degree(),
                    limit: DENSE_EXPANSION_MAX_DEGREE,
                });
            }
            let mut word = Vec::with_capacity(m.degree());
            expand_slots(spec, &entries, m.word(), c.clone(), &mut word, &mut terms);
        }
        Ok(GradedElement::from_parts(spec, terms, a.is_truncated()))
    }
}

fn spectral_form(m: &DMatrix<f64>) -> Option<SpectralForm> {
    let scale = m.iter().fold(1.0f64, |acc, x| acc.max(x.abs()));
    let d = m.nrows();
    for i in 0..d {
        for j in 0..i {
            if (m[(i, j)] - m[(j, i)]).abs() > SYMMETRY_TOL * scale {
                return None;
            }
        }
    }
    let eig = SymmetricEigen::new(m.clone());
    let lambda = DMatrix::from_diagonal(&eig.eigenvalues);
    let residual = (m * &eig.eigenvectors - &eig.eigenvectors * lambda).norm();
    (residual <= EIGEN_RESIDUAL_TOL * scale * d as f64).then(|| SpectralForm {
        eigenvalues: eig.eigenvalues.iter().copied().collect(),
        eigenvectors: eig.eigenvectors,
    })
}

/// Sums `prod_k A[j_k, i_k] M_(j_1..j_n)` over all slot images.
fn expand_slots<S: Scalar>(
    spec: &AlgebraSpec,
    entries: &[Vec<S>],
    letters: &[u16],
    coeff: S,
    word: &mut Vec<u16>,
    out: &mut BTreeMap<Monomial, S>,
) {
    let Some((&i, rest)) = letters.split_first() else {
        if let Some((w, negated)) = carrier_product(spec, word, &[]) {
            accumulate(out, Monomial::from_canonical(w), if negated { -coeff } else { coeff });
        }
        return;
    };
    for (j, row) in entries.iter().enumerate() {
        let a = &row[i as usize - 1];
        if a.is_zero() {
            continue;
        }
        word.push(j as u16 + 1);
        expand_slots(spec, entries, rest, coeff.clone() * a.clone(), word, out);
        word.pop();
    }
}

/// `Gamma(A) a`.
pub fn gamma_apply<S: Scalar>(op: &GammaOperator, a: &GradedElement<S>) -> Result<GradedElement<S>> {
    op.apply(a)
}

/// `Gamma(A)^exponent a = Gamma(A^exponent) a`.
pub fn gamma_power_apply<S: Scalar>(op: &GammaOperator, exponent: f64, a: &GradedElement<S>) -> Result<GradedElement<S>> {
    op.power(exponent)?.apply(a)
}

/// `Gamma(A)(ab) - (Gamma(A) a)(Gamma(A) b)`, which vanishes for class-1 kinds.
pub fn multiplicativity_defect<S: Scalar>(
    op: &GammaOperator,
    a: &GradedElement<S>,
    b: &GradedElement<S>,
) -> Result<GradedElement<S>> {
    let ab = product(a, b)?;
    if ab.is_truncated() {
        return Err(Error::Truncated);
    }
    let lhs = op.apply(&ab)?;
    let rhs = product(&op.apply(a)?, &op.apply(b)?)?;
    lhs.checked_add(&-rhs)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residual {
    /// Coefficient-space Euclidean norm of the defect.
    pub absolute: f64,
    /// `absolute / ||Gamma(A)(ab)||`, or `absolute` when that vanishes.
    pub relative: f64,
}

/// Size of [`multiplicativity_defect`] in the flat coefficient norm.
pub fn multiplicativity_residual<S: Scalar>(
    op: &GammaOperator,
    a: &GradedElement<S>,
    b: &GradedElement<S>,
) -> Result<Residual> {
    let defect = multiplicativity_defect(op, a, b)?;
    let reference = op.apply(&product(a, b)?)?.coefficient_norm();
    let absolute = defect.coefficient_norm();
    let relative = if reference > 0.0 { absolute / reference } else { absolute };
    Ok(Residual { absolute, relative })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use num_rational::Rational64;

    use super::*;

    fn grassmann(d: usize, n: usize) -> Arc<AlgebraSpec> {
        Arc::new(AlgebraSpec::grassmann(d, n).unwrap())
    }

    #[test]
    fn identity_and_scalings() {
        let g = grassmann(3, 3);
        let x = &GradedElement::<f64>::unit(&g) + &GradedElement::monomial(&g, &[1, 3]).unwrap().scale(&2.5);
        assert_eq!(gamma_apply(&GammaOperator::identity(3), &x).unwrap(), x);

        let two = GammaOperator::diagonal(&[2.0; 3]).unwrap();
        let e123 = GradedElement::<f64>::monomial(&g, &[1, 2, 3]).unwrap();
        assert_eq!(gamma_apply(&two, &e123).unwrap(), e123.scale(&8.0));

        let g2 = grassmann(2, 2);
        let e12 = GradedElement::<f64>::monomial(&g2, &[1, 2]).unwrap();
        let d23 = GammaOperator::diagonal(&[2.0, 3.0]).unwrap();
        assert_eq!(gamma_apply(&d23, &e12).unwrap(), e12.scale(&6.0));
        // the dense path agrees with the diagonal fast path
        let dense = GammaOperator::from_rows(&[vec![2.0, 0.0], vec![1e-300, 3.0]]).unwrap();
        assert!(!dense.is_diagonal());
        let diff = &gamma_apply(&dense, &e12).unwrap() - &e12.scale(&6.0);
        assert!(diff.max_abs() < 1e-290);
    }

    #[test]
    fn slotwise_action_on_rotation() {
        // A = [[0,1],[1,0]] swaps e1, e2: Gamma(A) e12 = e2 e1 = -e12
        let g = grassmann(2, 2);
        let swap = GammaOperator::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let e12 = GradedElement::<f64>::monomial(&g, &[1, 2]).unwrap();
        assert_eq!(gamma_apply(&swap, &e12).unwrap(), -e12.clone());
        let s = Arc::new(AlgebraSpec::symmetric(2, 2).unwrap());
        let m = GradedElement::<f64>::monomial(&s, &[1, 2]).unwrap();
        assert_eq!(gamma_apply(&swap, &m).unwrap(), m);
    }

    #[test]
    fn powers() {
        let g = grassmann(2, 2);
        let e1 = GradedElement::<f64>::generator(&g, 1).unwrap();
        let a = GammaOperator::diagonal(&[4.0, 9.0]).unwrap();
        assert_eq!(gamma_power_apply(&a, 0.5, &e1).unwrap(), e1.scale(&2.0));
        assert_eq!(gamma_power_apply(&a, 0.0, &e1).unwrap(), e1);
        assert_eq!(gamma_power_apply(&a, 1.0, &e1).unwrap(), gamma_apply(&a, &e1).unwrap());

        let sym = GammaOperator::from_rows(&[vec![3.0, 1.0], vec![1.0, 3.0]]).unwrap();
        let e12 = GradedElement::<f64>::monomial(&g, &[1, 2]).unwrap();
        let twice = gamma_apply(&sym, &gamma_apply(&sym, &e12).unwrap()).unwrap();
        let squared = gamma_power_apply(&sym, 2.0, &e12).unwrap();
        assert!((&twice - &squared).max_abs() < 1e-12);

        let skew = GammaOperator::from_rows(&[vec![3.0, 1.0], vec![0.0, 3.0]]).unwrap();
        assert!(matches!(skew.power(0.5), Err(Error::MissingSpectralForm)));
        let neg = GammaOperator::diagonal(&[-1.0, 2.0]).unwrap();
        assert!(matches!(neg.power(0.5), Err(Error::NonPositiveEigenvalue(_))));
    }

    #[test]
    fn exact_multiplicativity() {
        let g = grassmann(3, 3);
        let a = GradedElement::<Rational64>::unit(&g)
            .checked_add(&GradedElement::monomial(&g, &[2]).unwrap().scale(&Rational64::from_integer(3)))
            .unwrap();
        let b = GradedElement::<Rational64>::monomial(&g, &[1, 3]).unwrap();
        let op = GammaOperator::from_rows(&[vec![2.0, 1.0, 0.0], vec![0.0, 3.0, -1.0], vec![1.0, 0.0, 5.0]]).unwrap();
        assert!(multiplicativity_defect(&op, &a, &b).unwrap().is_zero());
    }

    #[test]
    fn dimension_and_truncation_errors() {
        let g = grassmann(3, 2);
        let e1 = GradedElement::<f64>::generator(&g, 1).unwrap();
        assert!(matches!(
            gamma_apply(&GammaOperator::identity(2), &e1),
            Err(Error::DimensionMismatch { .. })
        ));
        let e12 = GradedElement::<f64>::monomial(&g, &[1, 2]).unwrap();
        let e3 = GradedElement::<f64>::generator(&g, 3).unwrap();
        assert_eq!(
            multiplicativity_residual(&GammaOperator::identity(3), &e12, &e3),
            Err(Error::Truncated)
        );
        let r = multiplicativity_residual(&GammaOperator::identity(3), &e1, &e3).unwrap();
        assert_eq!(r.absolute, 0.0);
    }
}

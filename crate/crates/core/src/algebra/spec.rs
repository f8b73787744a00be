use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::monomial::Monomial;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgebraKind {
    /// Free tensor algebra, words are kept in order.
    Tensor,
    /// Symmetric tensors (commuting generators).
    Symmetric,
    /// Antisymmetric tensors, the Grassmann algebra.
    Antisymmetric,
    /// Z2-graded tensor product of a symmetric and a Grassmann algebra.
    Super,
    /// Class-1 carrier deformed by a bilinear pairing (Clifford, Wiener).
    Paired,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalarField {
    Real,
    Complex,
}

/// Shape of a truncated graded algebra.
///
/// Generators are numbered `1..=generators`. For [`AlgebraKind::Super`] the
/// first `even_count` generators are even and the rest odd. For
/// [`AlgebraKind::Paired`] the carrier follows `parity` (0: symmetric,
/// 1: antisymmetric) and `pairing` holds the row-major `d x d` form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub kind: AlgebraKind,
    pub generators: usize,
    pub truncation: usize,
    pub parity: u8,
    pub even_count: usize,
    pub pairing: Option<Vec<Vec<Complex64>>>,
    pub field: ScalarField,
}

impl AlgebraSpec {
    pub fn new(kind: AlgebraKind, generators: usize, truncation: usize) -> Result<Self> {
        let parity = match kind {
            AlgebraKind::Antisymmetric => 1,
            _ => 0,
        };
        let spec = AlgebraSpec {
            kind,
            generators,
            truncation,
            parity,
            even_count: 0,
            pairing: None,
            field: ScalarField::Real,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn tensor(generators: usize, truncation: usize) -> Result<Self> {
        Self::new(AlgebraKind::Tensor, generators, truncation)
    }

    pub fn symmetric(generators: usize, truncation: usize) -> Result<Self> {
        Self::new(AlgebraKind::Symmetric, generators, truncation)
    }

    pub fn grassmann(generators: usize, truncation: usize) -> Result<Self> {
        Self::new(AlgebraKind::Antisymmetric, generators, truncation)
    }

    pub fn superalgebra(generators: usize, even_count: usize, truncation: usize) -> Result<Self> {
        let spec = AlgebraSpec {
            kind: AlgebraKind::Super,
            generators,
            truncation,
            parity: 1,
            even_count,
            pairing: None,
            field: ScalarField::Real,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Class-2 algebra with generator relation
    /// `e_i e_j = (class-1 product) + pairing[i][j] e0`.
    pub fn paired(parity: u8, pairing: Vec<Vec<f64>>, truncation: usize) -> Result<Self> {
        let pairing = pairing
            .into_iter()
            .map(|row| row.into_iter().map(|x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::paired_complex(parity, pairing, truncation, ScalarField::Real)
    }

    pub fn paired_complex(
        parity: u8,
        pairing: Vec<Vec<Complex64>>,
        truncation: usize,
        field: ScalarField,
    ) -> Result<Self> {
        let spec = AlgebraSpec {
            kind: AlgebraKind::Paired,
            generators: pairing.len(),
            truncation,
            parity,
            even_count: 0,
            pairing: Some(pairing),
            field,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Clifford algebra of the Euclidean form on `generators` generators.
    pub fn clifford(generators: usize, truncation: usize) -> Result<Self> {
        let identity = (0..generators)
            .map(|i| (0..generators).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        Self::paired(1, identity, truncation)
    }

    pub fn with_field(mut self, field: ScalarField) -> Result<Self> {
        self.field = field;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(Error::InvalidSpec(msg));
        if self.generators == 0 {
            return invalid("generator count must be positive".into());
        }
        if self.generators > u16::MAX as usize {
            return invalid(format!("too many generators ({})", self.generators));
        }
        if self.parity > 1 {
            return invalid(format!("parity must be 0 or 1, got {}", self.parity));
        }
        match self.kind {
            AlgebraKind::Super if self.even_count > self.generators => {
                return invalid(format!(
                    "even_count {} exceeds generator count {}",
                    self.even_count, self.generators
                ));
            }
            AlgebraKind::Antisymmetric if self.parity != 1 => {
                return invalid("antisymmetric algebras have parity 1".into());
            }
            AlgebraKind::Symmetric | AlgebraKind::Tensor if self.parity != 0 => {
                return invalid(format!("{:?} algebras have parity 0", self.kind));
            }
            _ => {}
        }
        match (&self.pairing, self.kind) {
            (Some(_), kind) if kind != AlgebraKind::Paired => {
                invalid(format!("{kind:?} algebras take no pairing"))
            }
            (None, AlgebraKind::Paired) => invalid("paired algebras need a pairing".into()),
            (Some(w), _) => {
                if w.len() != self.generators || w.iter().any(|row| row.len() != self.generators) {
                    return invalid(format!(
                        "pairing must be {0}x{0}",
                        self.generators
                    ));
                }
                if w.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                    return invalid("pairing entries must be finite".into());
                }
                if self.field == ScalarField::Real && w.iter().flatten().any(|z| z.im != 0.0) {
                    return invalid("real algebras need a real pairing".into());
                }
                Ok(())
            }
            (None, _) => Ok(()),
        }
    }

    /// Whether letter `g` (1-based) anticommutes with other odd letters.
    pub fn is_odd(&self, g: u16) -> bool {
        match self.kind {
            AlgebraKind::Tensor | AlgebraKind::Symmetric => false,
            AlgebraKind::Antisymmetric => true,
            AlgebraKind::Super => g as usize > self.even_count,
            AlgebraKind::Paired => self.parity == 1,
        }
    }

    pub fn is_class_one(&self) -> bool {
        self.kind != AlgebraKind::Paired
    }

    /// Kind whose sign rules govern the monomial carrier.
    pub fn carrier_kind(&self) -> AlgebraKind {
        match (self.kind, self.parity) {
            (AlgebraKind::Paired, 1) => AlgebraKind::Antisymmetric,
            (AlgebraKind::Paired, _) => AlgebraKind::Symmetric,
            (kind, _) => kind,
        }
    }

    pub fn pairing_entry(&self, i: u16, j: u16) -> Complex64 {
        self.pairing
            .as_ref()
            .map(|w| w[i as usize - 1][j as usize - 1])
            .unwrap_or_default()
    }

    /// Brings `word` into canonical order in place. Returns `Some(negated)`
    /// with the Koszul sign, or `None` when an odd letter repeats.
    pub fn canonicalize(&self, word: &mut [u16]) -> Option<bool> {
        if self.kind == AlgebraKind::Tensor {
            return Some(false);
        }
        let mut negated = false;
        for i in 1..word.len() {
            let mut j = i;
            while j > 0 && word[j - 1] > word[j] {
                if self.is_odd(word[j - 1]) && self.is_odd(word[j]) {
                    negated = !negated;
                }
                word.swap(j - 1, j);
                j -= 1;
            }
        }
        if word.windows(2).any(|w| w[0] == w[1] && self.is_odd(w[0])) {
            return None;
        }
        Some(negated)
    }

    /// Canonical monomials of degree exactly `n`, in ascending order.
    pub fn basis_of_degree(&self, n: usize) -> Vec<Monomial> {
        let d = self.generators as u16;
        let mut out = Vec::new();
        let mut word = Vec::with_capacity(n);
        if self.kind == AlgebraKind::Tensor {
            fn all_words(d: u16, n: usize, word: &mut Vec<u16>, out: &mut Vec<Monomial>) {
                if word.len() == n {
                    out.push(Monomial::from_canonical(word.clone()));
                    return;
                }
                for g in 1..=d {
                    word.push(g);
                    all_words(d, n, word, out);
                    word.pop();
                }
            }
            all_words(d, n, &mut word, &mut out);
            return out;
        }
        fn sorted_words(
            spec: &AlgebraSpec,
            n: usize,
            start: u16,
            word: &mut Vec<u16>,
            out: &mut Vec<Monomial>,
        ) {
            if word.len() == n {
                out.push(Monomial::from_canonical(word.clone()));
                return;
            }
            for g in start..=spec.generators as u16 {
                let next = if spec.is_odd(g) { g + 1 } else { g };
                word.push(g);
                sorted_words(spec, n, next, word, out);
                word.pop();
            }
        }
        sorted_words(self, n, 1, &mut word, &mut out);
        out
    }

    /// Canonical monomials of every degree `0..=max_degree`.
    pub fn basis(&self, max_degree: usize) -> Vec<Monomial> {
        (0..=max_degree).flat_map(|n| self.basis_of_degree(n)).collect()
    }
}

impl fmt::Display for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}(d={}, N={}", self.kind, self.generators, self.truncation)?;
        match self.kind {
            AlgebraKind::Super => write!(f, ", even={}", self.even_count)?,
            AlgebraKind::Paired => write!(f, ", chi={}", self.parity)?,
            _ => {}
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_signs() {
        let g = AlgebraSpec::grassmann(4, 4).unwrap();
        let mut w = vec![2, 1];
        assert_eq!(g.canonicalize(&mut w), Some(true));
        assert_eq!(w, vec![1, 2]);
        let mut w = vec![3, 1, 2];
        assert_eq!(g.canonicalize(&mut w), Some(false));
        let mut w = vec![1, 2, 1];
        assert_eq!(g.canonicalize(&mut w), None);

        let s = AlgebraSpec::symmetric(3, 4).unwrap();
        let mut w = vec![2, 1, 2];
        assert_eq!(s.canonicalize(&mut w), Some(false));
        assert_eq!(w, vec![1, 2, 2]);

        // generators 1, 2 even; 3, 4 odd
        let sup = AlgebraSpec::superalgebra(4, 2, 4).unwrap();
        let mut w = vec![4, 1, 3];
        assert_eq!(sup.canonicalize(&mut w), Some(true));
        assert_eq!(w, vec![1, 3, 4]);
        let mut w = vec![3, 1, 1];
        assert_eq!(sup.canonicalize(&mut w), Some(false));
        let mut w = vec![3, 3];
        assert_eq!(sup.canonicalize(&mut w), None);
    }

    #[test]
    fn basis_dimensions() {
        assert_eq!(AlgebraSpec::grassmann(4, 4).unwrap().basis(4).len(), 16);
        assert_eq!(AlgebraSpec::symmetric(6, 6).unwrap().basis(6).len(), 924);
        assert_eq!(AlgebraSpec::tensor(2, 3).unwrap().basis(3).len(), 15);
        // even x1, odd t1, t2: degree 2 -> x1x1, x1t1, x1t2, t1t2
        let sup = AlgebraSpec::superalgebra(3, 1, 2).unwrap();
        assert_eq!(sup.basis_of_degree(2).len(), 4);
    }

    #[test]
    fn spec_validation() {
        assert!(AlgebraSpec::grassmann(0, 2).is_err());
        assert!(AlgebraSpec::superalgebra(2, 3, 2).is_err());
        assert!(AlgebraSpec::paired(1, vec![vec![1.0, 0.0]], 2).is_err());
        let complex_w = vec![vec![Complex64::new(0.0, 1.0)]];
        assert!(AlgebraSpec::paired_complex(1, complex_w.clone(), 2, ScalarField::Real).is_err());
        assert!(AlgebraSpec::paired_complex(1, complex_w, 2, ScalarField::Complex).is_ok());
    }
}

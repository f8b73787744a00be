use std::cmp::Ordering;
use std::fmt;

/// Canonical basis word over 1-based generator indices.
///
/// Ordered by degree first, then lexicographically, so that element terms
/// iterate grade by grade.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<u16>);

impl Monomial {
    pub fn unit() -> Self {
        Monomial(Vec::new())
    }

    /// Wraps a word that is already canonical for its algebra.
    pub(crate) fn from_canonical(word: Vec<u16>) -> Self {
        Monomial(word)
    }

    pub fn word(&self) -> &[u16] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    /// Multiplicities of each distinct letter, in order of appearance.
    pub fn multiplicities(&self) -> impl Iterator<Item = (u16, usize)> + '_ {
        self.0.chunk_by(|a, b| a == b).map(|run| (run[0], run.len()))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e0");
        }
        write!(f, "e")?;
        for (k, g) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ".")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

use std::sync::Arc;

use num_complex::Complex64;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};

use super::element::GradedElement;
use super::spec::AlgebraSpec;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// One serialized term: `{"word": [indices], "re": x, "im": y}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermRecord {
    pub word: Vec<usize>,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl<S: Scalar> Serialize for GradedElement<S> {
    fn serialize<Z: Serializer>(&self, serializer: Z) -> std::result::Result<Z::Ok, Z::Error> {
        let mut seq = serializer.serialize_seq(Some(self.len()))?;
        for (m, c) in self.terms() {
            let z = c.to_complex();
            seq.serialize_element(&TermRecord {
                word: m.word().iter().map(|&g| g as usize).collect(),
                re: z.re,
                im: z.im,
            })?;
        }
        seq.end()
    }
}

impl<S: Scalar> GradedElement<S> {
    /// Rebuilds an element from term records; words need not be canonical.
    pub fn from_records(spec: &Arc<AlgebraSpec>, records: &[TermRecord]) -> Result<Self> {
        let mut out = GradedElement::zero(spec);
        for r in records {
            let c = S::from_complex(Complex64::new(r.re, r.im))
                .ok_or_else(|| Error::InvalidSpec(format!("coefficient {}+{}i not representable", r.re, r.im)))?;
            out = out.checked_add(&GradedElement::monomial(spec, &r.word)?.scale(&c))?;
        }
        Ok(out)
    }
}

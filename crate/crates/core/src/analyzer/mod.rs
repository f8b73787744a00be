//! Certification and falsification of submultiplicativity estimates
//! `||ab||_(rho) <= gamma ||a||_(sigma) ||b||_(tau)`.

mod audit;
mod best;
mod map;
mod sample;
mod violation;
mod witness;

use num_complex::Complex64;

pub use audit::{delta_audit, theorem2_constant, AuditReport};
pub use best::{best_constant, BestConstantReport, POWER_ITERATION_CAP};
pub use map::MAX_BASIS_PAIRS;
pub use sample::{ratio_sample, SampleRecord, SampleReport, QUANTILE_LEVELS};
pub use violation::{unweighted_violation_search, SearchBudget, ViolationOutcome, WitnessSource, VIOLATION_MARGIN};
pub use witness::{nilpotent_witness, theorem1_ratio_sq, theorem1_sweep, WitnessReport};

use crate::algebra::GradedElement;
use crate::error::Result;
use crate::norm::NormSpec;
use crate::scalar::Scalar;

/// Lower bound on any unit-normalized submultiplicativity constant.
pub const SQRT_FOUR_THIRDS: f64 = 1.154_700_538_379_251_5;
/// Constant achieved by factorial-inverse weights.
pub const SQRT_THREE: f64 = 1.732_050_807_568_877_2;

pub mod tolerance {
    /// Reproduction of closed-form constants.
    pub const CONSTANT: f64 = 1e-9;
    /// Relative residual of the power iteration.
    pub const POWER_ITERATION: f64 = 1e-10;
    /// Orthogonality hypotheses of the witness construction.
    pub const HYPOTHESIS: f64 = 1e-12;
}

/// A Hilbert inner product on an algebra, normalized so that `||e0|| = 1`.
///
/// [`NormSpec`] is the canonical implementation; witnesses accept any
/// inner product so that non-graded test norms can be plugged in.
pub trait InnerProduct<S: Scalar>: Sync {
    fn inner(&self, a: &GradedElement<S>, b: &GradedElement<S>) -> Result<Complex64>;

    fn norm(&self, a: &GradedElement<S>) -> Result<f64> {
        Ok(self.inner(a, a)?.re.max(0.0).sqrt())
    }

    fn describe(&self) -> serde_json::Value;
}

impl<S: Scalar> InnerProduct<S> for NormSpec {
    fn inner(&self, a: &GradedElement<S>, b: &GradedElement<S>) -> Result<Complex64> {
        NormSpec::inner(self, a, b)
    }

    fn describe(&self) -> serde_json::Value {
        serde_json::to_value(self).unwrap_or(serde_json::Value::Null)
    }
}

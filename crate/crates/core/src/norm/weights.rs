use serde::Serialize;

use crate::error::{Error, Result};

/// Largest `n` whose factorial is evaluated directly instead of in log-space.
const DIRECT_FACTORIAL_MAX: usize = 20;

/// `n!` as a float; exact up to `n = 20`, through the logarithm beyond.
pub(crate) fn factorial(n: usize) -> f64 {
    if n <= DIRECT_FACTORIAL_MAX {
        (1..=n as u64).product::<u64>() as f64
    } else {
        ln_factorial(n).exp()
    }
}

pub fn ln_factorial(n: usize) -> f64 {
    if n <= DIRECT_FACTORIAL_MAX {
        factorial(n).ln()
    } else {
        factorial(DIRECT_FACTORIAL_MAX).ln() + (DIRECT_FACTORIAL_MAX + 1..=n).map(|k| (k as f64).ln()).sum::<f64>()
    }
}

/// Per-degree weight family `w_n`, always with `w_0 = 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum WeightSpec {
    /// `w_0..w_N` listed explicitly.
    Explicit { weights: Vec<f64> },
    /// `w_n = 1/(n-1)!` for `n >= 1`.
    FactorialInvShift,
    /// `w_n = 1/n!`.
    FactorialInv,
    /// `w_n = (n!)^sigma 2^(rho n) (1+n)^s` for `n >= 1`.
    SigmaRhoS { sigma: f64, rho: f64, s: f64 },
    /// `w_n = n!`, the standard norm written with normalized Grams.
    StandardFactorial,
}

impl WeightSpec {
    pub fn explicit(weights: Vec<f64>) -> Result<Self> {
        let spec = WeightSpec::Explicit { weights };
        spec.validate()?;
        Ok(spec)
    }

    /// Flat weights `w_n = 1`.
    pub fn flat() -> Self {
        WeightSpec::SigmaRhoS { sigma: 0.0, rho: 0.0, s: 0.0 }
    }

    pub fn sigma_rho_s(sigma: f64, rho: f64, s: f64) -> Self {
        WeightSpec::SigmaRhoS { sigma, rho, s }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            WeightSpec::Explicit { weights } => {
                if weights.first() != Some(&1.0) {
                    return Err(Error::InvalidWeights("explicit weights must start with w0 = 1".into()));
                }
                if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
                    return Err(Error::InvalidWeights(format!("weight {w} is not positive")));
                }
                Ok(())
            }
            WeightSpec::SigmaRhoS { sigma, rho, s } => {
                if [sigma, rho, s].iter().all(|x| x.is_finite()) {
                    Ok(())
                } else {
                    Err(Error::InvalidWeights("sigma, rho, s must be finite".into()))
                }
            }
            _ => Ok(()),
        }
    }

    /// The same family with the `2^(rho n)` factor removed; that factor is
    /// taken over by a second-quantization twist.
    pub fn without_rho_factor(&self) -> Self {
        match self {
            WeightSpec::SigmaRhoS { sigma, s, .. } => WeightSpec::SigmaRhoS { sigma: *sigma, rho: 0.0, s: *s },
            other => other.clone(),
        }
    }

    pub fn ln_weight(&self, n: usize) -> Result<f64> {
        if n == 0 {
            return Ok(0.0);
        }
        Ok(match self {
            WeightSpec::Explicit { weights } => self.explicit_at(weights, n)?.ln(),
            WeightSpec::FactorialInvShift => -ln_factorial(n - 1),
            WeightSpec::FactorialInv => -ln_factorial(n),
            WeightSpec::StandardFactorial => ln_factorial(n),
            WeightSpec::SigmaRhoS { sigma, rho, s } => {
                sigma * ln_factorial(n) + rho * n as f64 * std::f64::consts::LN_2 + s * ((1 + n) as f64).ln()
            }
        })
    }

    /// `w_n`; direct evaluation up to `n = 20`, log-space beyond.
    pub fn weight(&self, n: usize) -> Result<f64> {
        if n == 0 {
            return Ok(1.0);
        }
        if let WeightSpec::Explicit { weights } = self {
            return self.explicit_at(weights, n);
        }
        if n > DIRECT_FACTORIAL_MAX {
            return Ok(self.ln_weight(n)?.exp());
        }
        Ok(match self {
            WeightSpec::FactorialInvShift => 1.0 / factorial(n - 1),
            WeightSpec::FactorialInv => 1.0 / factorial(n),
            WeightSpec::StandardFactorial => factorial(n),
            WeightSpec::SigmaRhoS { sigma, rho, s } => {
                factorial(n).powf(*sigma) * (rho * n as f64).exp2() * ((1 + n) as f64).powf(*s)
            }
            WeightSpec::Explicit { .. } => unreachable!(),
        })
    }

    fn explicit_at(&self, weights: &[f64], n: usize) -> Result<f64> {
        match weights.get(n) {
            Some(&w) if w.is_finite() && w > 0.0 => Ok(w),
            Some(&w) => Err(Error::InvalidWeights(format!("weight w{n} = {w} is not positive"))),
            None => Err(Error::InvalidWeights(format!(
                "explicit weights stop at degree {}, need degree {n}",
                weights.len().saturating_sub(1)
            ))),
        }
    }
}

/// `w_n` of `spec`.
pub fn weight(spec: &WeightSpec, n: usize) -> Result<f64> {
    spec.weight(n)
}

//! Experiment configuration: a JSON file, `--key=value` overrides on top,
//! and per-command key checks.

use std::path::Path;
use std::sync::Arc;

use gradenorm_core::algebra::TermRecord;
use gradenorm_core::gamma::GammaOperator;
use gradenorm_core::norm::{GammaTwist, GramConvention, NormSpec, WeightSpec};
use gradenorm_core::{AlgebraKind, AlgebraSpec, ScalarField};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::Command;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed config: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad override `{0}`: expected --key=value")]
    Override(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] gradenorm_core::Error),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError::Invalid(msg.into()))
}

fn real() -> ScalarField {
    ScalarField::Real
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraConfig {
    pub kind: AlgebraKind,
    /// Ignored for paired algebras, where the pairing fixes the count.
    #[serde(default)]
    pub generators: usize,
    pub truncation: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parity: Option<u8>,
    #[serde(default)]
    pub even_count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing: Option<Vec<Vec<f64>>>,
    /// Imaginary part of the pairing, for complex Wiener-type algebras.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing_im: Option<Vec<Vec<f64>>>,
    #[serde(default = "real")]
    pub field: ScalarField,
}

impl AlgebraConfig {
    pub fn build(&self) -> Result<Arc<AlgebraSpec>, ConfigError> {
        let spec = match self.kind {
            AlgebraKind::Paired => {
                let Some(re) = &self.pairing else {
                    return invalid("paired algebras need `pairing`");
                };
                if self.generators != 0 && self.generators != re.len() {
                    return invalid(format!(
                        "`generators` = {} but the pairing is {}x{}",
                        self.generators,
                        re.len(),
                        re.len()
                    ));
                }
                let im = match &self.pairing_im {
                    Some(im) if im.len() != re.len() || im.iter().zip(re).any(|(a, b)| a.len() != b.len()) => {
                        return invalid("`pairing_im` must have the shape of `pairing`");
                    }
                    Some(im) => im.clone(),
                    None => re.iter().map(|row| vec![0.0; row.len()]).collect(),
                };
                let omega = re
                    .iter()
                    .zip(&im)
                    .map(|(r, i)| r.iter().zip(i).map(|(&x, &y)| Complex64::new(x, y)).collect())
                    .collect();
                AlgebraSpec::paired_complex(self.parity.unwrap_or(0), omega, self.truncation, self.field)?
            }
            kind => {
                if self.pairing.is_some() || self.pairing_im.is_some() {
                    return invalid("`pairing` applies only to paired algebras");
                }
                if self.parity.is_some() {
                    return invalid("`parity` applies only to paired algebras");
                }
                if kind != AlgebraKind::Super && self.even_count != 0 {
                    return invalid("`even_count` applies only to super algebras");
                }
                let spec = if kind == AlgebraKind::Super {
                    AlgebraSpec::superalgebra(self.generators, self.even_count, self.truncation)?
                } else {
                    AlgebraSpec::new(kind, self.generators, self.truncation)?
                };
                spec.with_field(self.field)?
            }
        };
        Ok(Arc::new(spec))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightFamily {
    Explicit,
    FactorialInvShift,
    FactorialInv,
    SigmaRhoS,
    StandardFactorial,
    Flat,
}

fn normalized() -> GramConvention {
    GramConvention::Normalized
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormConfig {
    /// Optional cross-check against the algebra kind.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<AlgebraKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w_family: Option<WeightFamily>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(default = "normalized")]
    pub gram: GramConvention,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_diag: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_matrix: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_exponent: Option<f64>,
}

impl NormConfig {
    pub fn family(&self) -> WeightFamily {
        self.w_family.unwrap_or(WeightFamily::FactorialInv)
    }

    pub fn weight_spec(&self) -> Result<WeightSpec, ConfigError> {
        let family = self.family();
        if self.weights.is_some() && family != WeightFamily::Explicit {
            return invalid("`weights` needs w_family = explicit");
        }
        if (self.sigma.is_some() || self.rho.is_some() || self.s.is_some()) && family != WeightFamily::SigmaRhoS {
            return invalid("`sigma`, `rho`, `s` need w_family = sigma_rho_s");
        }
        let spec = match family {
            WeightFamily::Explicit => match &self.weights {
                Some(w) => WeightSpec::explicit(w.clone())?,
                None => return invalid("w_family = explicit needs `weights`"),
            },
            WeightFamily::FactorialInvShift => WeightSpec::FactorialInvShift,
            WeightFamily::FactorialInv => WeightSpec::FactorialInv,
            WeightFamily::StandardFactorial => WeightSpec::StandardFactorial,
            WeightFamily::Flat => WeightSpec::flat(),
            WeightFamily::SigmaRhoS => {
                let w = WeightSpec::sigma_rho_s(self.sigma.unwrap_or(0.0), self.rho.unwrap_or(0.0), self.s.unwrap_or(0.0));
                w.validate()?;
                w
            }
        };
        Ok(spec)
    }

    pub fn operator(&self) -> Result<Option<GammaOperator>, ConfigError> {
        match (&self.gamma_diag, &self.gamma_matrix) {
            (Some(_), Some(_)) => invalid("give either `gamma_diag` or `gamma_matrix`, not both"),
            (Some(d), None) => Ok(Some(GammaOperator::diagonal(d)?)),
            (None, Some(m)) => {
                if m.iter().any(|row| row.len() != m.len()) {
                    return invalid("`gamma_matrix` must be square");
                }
                Ok(Some(GammaOperator::from_rows(m)?))
            }
            (None, None) if self.gamma_exponent.is_some() => invalid("`gamma_exponent` needs an operator"),
            (None, None) => Ok(None),
        }
    }

    pub fn build(&self, algebra: Option<&AlgebraSpec>) -> Result<NormSpec, ConfigError> {
        let mut norm = NormSpec::new(self.weight_spec()?, self.gram)?;
        if let (Some(kind), Some(spec)) = (self.kind, algebra) {
            if kind != spec.kind {
                return invalid(format!("norm declares kind {kind:?} but the algebra is {:?}", spec.kind));
            }
        }
        if let Some(op) = self.operator()? {
            if let Some(spec) = algebra {
                if op.dim() != spec.generators {
                    return invalid(format!(
                        "operator acts on {} generators, the algebra has {}",
                        op.dim(),
                        spec.generators
                    ));
                }
            }
            norm = norm.with_twist(GammaTwist::new(op, self.gamma_exponent.unwrap_or(1.0))?);
        }
        Ok(norm)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormTriple {
    pub sigma: NormConfig,
    pub tau: NormConfig,
    pub rho: NormConfig,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetConfig {
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    #[serde(default = "default_iterations")]
    pub iterations: usize,
}

fn default_restarts() -> usize {
    4
}
fn default_iterations() -> usize {
    100
}

impl Default for BudgetConfig {
    fn default() -> Self {
        BudgetConfig { restarts: default_restarts(), iterations: default_iterations() }
    }
}

fn default_grid() -> usize {
    50
}
fn default_samples() -> usize {
    10_000
}
fn default_tolerance() -> f64 {
    1e-9
}

/// Fully resolved configuration; serialized verbatim into every report.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm: Option<NormConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norms: Option<NormTriple>,
    #[serde(default = "default_grid")]
    pub grid: usize,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_gamma: Option<f64>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_cap: Option<usize>,
    #[serde(default)]
    pub budget: BudgetConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<Vec<TermRecord>>,
}

impl ExperimentConfig {
    pub fn algebra(&self) -> Result<Arc<AlgebraSpec>, ConfigError> {
        match &self.algebra {
            Some(a) => a.build(),
            None => invalid("this command needs an `algebra` block"),
        }
    }

    pub fn single_norm(&self, spec: Option<&AlgebraSpec>) -> Result<NormSpec, ConfigError> {
        match (&self.norm, &self.norms) {
            (Some(n), None) => n.build(spec),
            (None, None) => invalid("this command needs a `norm` block"),
            (_, Some(_)) => invalid("this command takes a single `norm` block, not `norms`"),
        }
    }

    /// `(sigma, tau, rho)` configs; a single `norm` block stands for all three.
    pub fn norm_configs(&self) -> Result<[&NormConfig; 3], ConfigError> {
        match (&self.norm, &self.norms) {
            (Some(n), None) => Ok([n, n, n]),
            (None, Some(t)) => Ok([&t.sigma, &t.tau, &t.rho]),
            (Some(_), Some(_)) => invalid("give either `norm` or `norms`, not both"),
            (None, None) => invalid("this command needs `norm` or `norms`"),
        }
    }

    pub fn norm_triple(&self, spec: Option<&AlgebraSpec>) -> Result<[NormSpec; 3], ConfigError> {
        let [s, t, r] = self.norm_configs()?;
        Ok([s.build(spec)?, t.build(spec)?, r.build(spec)?])
    }
}

/// Top-level keys each command accepts.
pub fn allowed_keys(command: Command) -> &'static [&'static str] {
    match command {
        Command::Witness => &["algebra", "norm", "direction", "target_gamma", "tolerance", "seed"],
        Command::AuditWeights => &["norm", "norms", "grid", "target_gamma", "tolerance", "seed"],
        Command::SampleRatios => &["algebra", "norm", "norms", "samples", "grid", "target_gamma", "tolerance", "seed"],
        Command::BestConstant => &["algebra", "norm", "norms", "degree_cap", "target_gamma", "tolerance", "seed"],
        Command::GammaCheck => &["algebra", "norm", "samples", "tolerance", "seed"],
        Command::ViolationSearch => &["algebra", "norm", "budget", "tolerance", "seed"],
        Command::Suite => &["seed"],
    }
}

/// Reads the file (or starts from `{}`) and applies overrides in order.
pub fn load(path: Option<&Path>, overrides: &[(String, String)]) -> Result<Value, ConfigError> {
    let mut value = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|source| ConfigError::Io { path: p.display().to_string(), source })?;
            serde_json::from_str(&text)?
        }
        None => Value::Object(Map::new()),
    };
    if !value.is_object() {
        return invalid("config must be a JSON object");
    }
    for (key, raw) in overrides {
        set_path(&mut value, key, parse_scalar(raw))?;
    }
    Ok(value)
}

/// JSON literal if it parses as one, otherwise a bare string.
fn parse_scalar(raw: &str) -> Value {
    serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()))
}

fn set_path(root: &mut Value, dotted: &str, v: Value) -> Result<(), ConfigError> {
    let mut node = root;
    let parts: Vec<&str> = dotted.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(ConfigError::Override(dotted.to_string()));
    }
    for part in &parts[..parts.len() - 1] {
        let map = node.as_object_mut().ok_or_else(|| ConfigError::Override(dotted.to_string()))?;
        node = map.entry(part.to_string()).or_insert_with(|| Value::Object(Map::new()));
    }
    let map = node.as_object_mut().ok_or_else(|| ConfigError::Override(dotted.to_string()))?;
    map.insert(parts[parts.len() - 1].to_string(), v);
    Ok(())
}

/// Rejects keys the command does not use, then deserializes.
pub fn resolve(command: Command, value: Value) -> Result<ExperimentConfig, ConfigError> {
    let allowed = allowed_keys(command);
    if let Some(extra) = value.as_object().and_then(|m| m.keys().find(|k| !allowed.contains(&k.as_str()))) {
        return invalid(format!("key `{extra}` is not used by `{}`", command.name()));
    }
    Ok(serde_json::from_value(value)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn overrides_win_and_create_blocks() {
        let mut v = json!({"algebra": {"kind": "symmetric", "generators": 2, "truncation": 3}});
        set_path(&mut v, "algebra.generators", parse_scalar("5")).unwrap();
        set_path(&mut v, "norm.w_family", parse_scalar("flat")).unwrap();
        assert_eq!(v["algebra"]["generators"], 5);
        assert_eq!(v["norm"]["w_family"], "flat");
        let cfg = resolve(Command::SampleRatios, v).unwrap();
        assert_eq!(cfg.samples, 10_000);
        assert_eq!(cfg.algebra().unwrap().generators, 5);
    }

    #[test]
    fn unknown_and_unused_keys_are_rejected() {
        let bad = json!({"algebra": {"kind": "tensor", "generators": 2, "truncation": 2, "colour": 1}});
        assert!(matches!(resolve(Command::Witness, bad), Err(ConfigError::Json(_))));
        let unused = json!({"grid": 4});
        assert!(matches!(resolve(Command::Witness, unused), Err(ConfigError::Invalid(_))));
    }

    #[test]
    fn norm_validation() {
        let n: NormConfig = serde_json::from_value(json!({"w_family": "factorial_inv", "sigma": -1.0})).unwrap();
        assert!(n.build(None).is_err());
        let n: NormConfig = serde_json::from_value(json!({"gamma_diag": [1.0, 3.0]})).unwrap();
        assert!(n.build(None).is_err());
        let n: NormConfig =
            serde_json::from_value(json!({"w_family": "sigma_rho_s", "sigma": -1.0, "rho": 1.0, "gamma_diag": [2.0, 3.0]}))
                .unwrap();
        let spec = AlgebraSpec::grassmann(3, 3).unwrap();
        assert!(n.build(Some(&spec)).is_err());
        let spec = AlgebraSpec::grassmann(2, 3).unwrap();
        assert!(n.build(Some(&spec)).unwrap().twist.is_some());
    }

    #[test]
    fn paired_algebra_from_pairing() {
        let a: AlgebraConfig = serde_json::from_value(json!({
            "kind": "paired", "truncation": 3, "parity": 1, "pairing": [[1.0, 0.0], [0.0, 1.0]]
        }))
        .unwrap();
        assert_eq!(a.build().unwrap().generators, 2);
        let b: AlgebraConfig =
            serde_json::from_value(json!({"kind": "symmetric", "generators": 2, "truncation": 3, "parity": 1})).unwrap();
        assert!(b.build().is_err());
    }
}

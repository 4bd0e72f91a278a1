//! Experiment configuration: strict JSON schema, cross-field
//! validation that collects every violation, canonical serialization,
//! and conversion into the domain objects.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::model::{UniformComponent, WeightLaw, WeightModel};
use crate::regen::RenewalConfig;

pub const DEFAULT_HORIZON: i64 = 40;
pub const DEFAULT_MARGIN: i64 = 40;
pub const DEFAULT_WORKERS: usize = 8;
pub const DEFAULT_PILOT_WINDOWS: u64 = 600;
pub const DEFAULT_PILOT_WINDOW_LEN: i64 = 2000;
/// Fewer usable pilot cycles than this aborts an experiment.
pub const DEFAULT_PILOT_MIN_CYCLES: u64 = 1000;

fn default_horizon() -> i64 {
    DEFAULT_HORIZON
}
fn default_margin() -> i64 {
    DEFAULT_MARGIN
}
fn default_workers() -> usize {
    DEFAULT_WORKERS
}
fn default_exp_moment_bound() -> f64 {
    1.0
}
fn default_pilot_windows() -> u64 {
    DEFAULT_PILOT_WINDOWS
}
fn default_pilot_window_len() -> i64 {
    DEFAULT_PILOT_WINDOW_LEN
}
fn default_pilot_min_cycles() -> u64 {
    DEFAULT_PILOT_MIN_CYCLES
}
fn default_binning_exponent() -> f64 {
    -0.25
}
fn default_binning_scale() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    /// `arithmetic_table` or `non_lattice_parametric`.
    pub kind: String,
    pub neg_inf_prob: f64,
    /// Arithmetic support as `[value, probability]` pairs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<(i64, f64)>>,
    /// Non-lattice family name; `uniform_mixture` is supported.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<FamilyParams>,
    #[serde(default = "default_exp_moment_bound")]
    pub exp_moment_bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyParams {
    pub components: Vec<UniformComponent>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    /// Renewal extraction, moments, CGF, admissible interval.
    Pilot,
    /// Local (arithmetic) or integro-local (non-lattice) limit check.
    Llt,
    /// Constant-choice invariance comparison (needs `renewal.second`).
    Invariance,
    /// Decomposition audit over sampled windows.
    Audit,
    /// Small-window brute-force oracle sweep.
    Oracle,
    /// Law-of-large-numbers and CLT sanity run.
    Lln,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub kind: ExperimentKind,
    pub n: i64,
    pub replicas: u64,
    #[serde(default = "default_pilot_windows")]
    pub pilot_windows: u64,
    #[serde(default = "default_pilot_window_len")]
    pub pilot_window_len: i64,
    #[serde(default = "default_pilot_min_cycles")]
    pub pilot_min_cycles: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantPair {
    pub c1: f64,
    pub c2: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RenewalSection {
    /// Explicit growth constant; absent means "derive from the
    /// estimated admissible interval".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c2: Option<f64>,
    #[serde(default = "default_horizon")]
    pub horizon: i64,
    #[serde(default = "default_margin")]
    pub margin: i64,
    /// Second constant pair for the invariance experiment.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub second: Option<ConstantPair>,
}

impl Default for RenewalSection {
    fn default() -> RenewalSection {
        RenewalSection {
            c1: None,
            c2: None,
            horizon: DEFAULT_HORIZON,
            margin: DEFAULT_MARGIN,
            second: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BinningSection {
    /// Only the `power` rule is defined: `delta_n = scale * n^exponent`.
    pub rule: String,
    #[serde(default = "default_binning_exponent")]
    pub exponent: f64,
    #[serde(default = "default_binning_scale")]
    pub scale: f64,
}

impl BinningSection {
    pub fn delta(&self, n: i64) -> f64 {
        self.scale * (n as f64).powf(self.exponent)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    pub model: ModelSection,
    pub experiment: ExperimentSection,
    #[serde(default)]
    pub renewal: RenewalSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub binning: Option<BinningSection>,
    pub seed: u64,
    #[serde(default = "default_workers")]
    pub workers: usize,
    pub output: OutputSection,
}

/// Parses and fully validates a configuration document. Syntax errors
/// carry the position; schema and cross-field violations are collected
/// exhaustively, each annotated with its field path.
pub fn parse_config(text: &str) -> Result<ConfigDocument> {
    let doc: ConfigDocument =
        serde_json::from_str(text).map_err(|e| Error::ConfigSyntax(e.to_string()))?;
    let violations = doc.validation_violations();
    if violations.is_empty() {
        Ok(doc)
    } else {
        Err(Error::ConfigInvalid { violations })
    }
}

impl ConfigDocument {
    /// Every violated constraint, path-annotated. Empty means valid.
    pub fn validation_violations(&self) -> Vec<String> {
        let mut v = Vec::new();

        // Model section shape.
        let is_arithmetic = match self.model.kind.as_str() {
            "arithmetic_table" => {
                if self.model.table.is_none() {
                    v.push("model.table: required for kind arithmetic_table".to_string());
                }
                if self.model.family.is_some() || self.model.params.is_some() {
                    v.push("model.family: not allowed for kind arithmetic_table".to_string());
                }
                true
            }
            "non_lattice_parametric" => {
                match self.model.family.as_deref() {
                    Some("uniform_mixture") => {}
                    Some(other) => v.push(format!("model.family: unsupported family `{other}`")),
                    None => v.push(
                        "model.family: required for kind non_lattice_parametric".to_string(),
                    ),
                }
                if self.model.params.is_none() {
                    v.push("model.params: required for kind non_lattice_parametric".to_string());
                }
                if self.model.table.is_some() {
                    v.push(
                        "model.table: not allowed for kind non_lattice_parametric".to_string(),
                    );
                }
                false
            }
            other => {
                v.push(format!("model.kind: unknown kind `{other}`"));
                true
            }
        };
        if let Err(e) = self.build_model() {
            v.push(format!("model: {e}"));
        }

        // Experiment section.
        if self.experiment.n < 1 {
            v.push(format!("experiment.n: must be >= 1, got {}", self.experiment.n));
        }
        if self.experiment.replicas < 1 {
            v.push("experiment.replicas: must be >= 1".to_string());
        }
        if self.experiment.pilot_window_len < 2 {
            v.push("experiment.pilot_window_len: must be >= 2".to_string());
        }

        // Renewal constants.
        match (self.renewal.c1, self.renewal.c2) {
            (Some(c1), Some(c2)) => {
                if !(c1 > 0.0) {
                    v.push(format!("renewal.c1: must be positive, got {c1}"));
                }
                if !(c2 > 0.0) {
                    v.push(format!("renewal.c2: must be positive, got {c2}"));
                }
                if c2 > c1 {
                    v.push(format!("renewal.c2: must not exceed c1 ({c2} > {c1})"));
                }
            }
            (None, None) => {}
            _ => v.push(
                "renewal.c1: c1 and c2 must be given together or both left to the estimator"
                    .to_string(),
            ),
        }
        if self.renewal.horizon < 1 {
            v.push("renewal.horizon: must be >= 1".to_string());
        }
        if self.renewal.margin < self.renewal.horizon {
            v.push(format!(
                "renewal.margin: must be >= horizon ({} < {})",
                self.renewal.margin, self.renewal.horizon
            ));
        }
        if let Some(pair) = &self.renewal.second {
            if pair.c2 > pair.c1 {
                v.push(format!(
                    "renewal.second.c2: must not exceed c1 ({} > {})",
                    pair.c2, pair.c1
                ));
            }
            if !(pair.c1 > 0.0 && pair.c2 > 0.0) {
                v.push("renewal.second: constants must be positive".to_string());
            }
        }
        if self.experiment.kind == ExperimentKind::Invariance && self.renewal.second.is_none() {
            v.push("renewal.second: required for the invariance experiment".to_string());
        }

        // Binning cross-field rules.
        if is_arithmetic && self.binning.is_some() {
            v.push("binning: arithmetic models must not specify a binning rule".to_string());
        }
        if !is_arithmetic && self.experiment.kind == ExperimentKind::Llt && self.binning.is_none()
        {
            v.push("binning: required for non-lattice limit experiments".to_string());
        }
        if let Some(b) = &self.binning {
            if b.rule != "power" {
                v.push(format!("binning.rule: unknown rule `{}`", b.rule));
            }
            if b.exponent >= 0.0 {
                v.push("binning.exponent: must be negative (delta_n -> 0)".to_string());
            }
            if !(b.scale > 0.0) {
                v.push("binning.scale: must be positive".to_string());
            }
        }

        if self.workers < 1 {
            v.push("workers: must be >= 1".to_string());
        }
        if self.output.dir.is_empty() {
            v.push("output.dir: must not be empty".to_string());
        }
        v
    }

    /// The weight model described by the model section.
    pub fn build_model(&self) -> Result<WeightModel> {
        match (self.model.kind.as_str(), &self.model.table, &self.model.params) {
            ("arithmetic_table", Some(table), _) => {
                let mut entries = table.clone();
                entries.sort_by_key(|&(v, _)| v);
                WeightModel::new(
                    WeightLaw::ArithmeticTable(entries),
                    self.model.neg_inf_prob,
                    self.model.exp_moment_bound,
                )
            }
            ("non_lattice_parametric", _, Some(params)) => WeightModel::new(
                WeightLaw::UniformMixture(params.components.clone()),
                self.model.neg_inf_prob,
                self.model.exp_moment_bound,
            ),
            _ => Err(Error::ModelStructure {
                field: "model".to_string(),
                reason: "section is incomplete for its declared kind".to_string(),
            }),
        }
    }

    /// The renewal configuration when constants are explicit.
    pub fn renewal_config(&self) -> Option<Result<RenewalConfig>> {
        match (self.renewal.c1, self.renewal.c2) {
            (Some(c1), Some(c2)) => {
                Some(RenewalConfig::new(c1, c2, self.renewal.horizon, self.renewal.margin))
            }
            _ => None,
        }
    }

    /// Canonical serialized form: defaults resolved, fixed field order,
    /// trailing newline.
    pub fn canonical_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }

    /// Hex SHA-256 of the canonical form; stamped into every output for
    /// provenance.
    pub fn digest(&self) -> String {
        let hash = Sha256::digest(self.canonical_json().as_bytes());
        hash.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const MINIMAL_ARITHMETIC: &str = r#"{
        "model": {
            "kind": "arithmetic_table",
            "neg_inf_prob": 0.1,
            "table": [[1, 0.45], [2, 0.45]]
        },
        "experiment": { "kind": "llt", "n": 200, "replicas": 1000 },
        "renewal": {},
        "seed": 42,
        "output": { "dir": "out" }
    }"#;

    #[test]
    fn minimal_config_parses_with_defaults_and_canonicalizes() {
        let doc = parse_config(MINIMAL_ARITHMETIC).unwrap();
        assert_eq!(doc.renewal.horizon, DEFAULT_HORIZON);
        assert_eq!(doc.workers, DEFAULT_WORKERS);
        assert_eq!(doc.experiment.pilot_windows, DEFAULT_PILOT_WINDOWS);
        // parse . serialize . parse is the identity on parse results.
        let canon = doc.canonical_json();
        let doc2 = parse_config(&canon).unwrap();
        assert_eq!(doc, doc2);
        assert_eq!(canon, doc2.canonical_json());
        assert_eq!(doc.digest(), doc2.digest());
    }

    #[test]
    fn unknown_keys_are_rejected_with_position() {
        let text = MINIMAL_ARITHMETIC.replace("\"seed\": 42", "\"seed\": 42, \"extra\": 1");
        match parse_config(&text) {
            Err(Error::ConfigSyntax(msg)) => {
                assert!(msg.contains("extra"), "{msg}");
                assert!(msg.contains("line"), "{msg}");
            }
            other => panic!("expected syntax rejection, got {other:?}"),
        }
    }

    #[test]
    fn constant_order_violation_names_the_field() {
        let text = MINIMAL_ARITHMETIC
            .replace("\"renewal\": {}", "\"renewal\": { \"c1\": 0.9, \"c2\": 1.1 }");
        match parse_config(&text) {
            Err(Error::ConfigInvalid { violations }) => {
                assert!(
                    violations.iter().any(|v| v.starts_with("renewal.c2")),
                    "{violations:?}"
                );
            }
            other => panic!("expected invalid config, got {other:?}"),
        }
    }

    #[test]
    fn non_lattice_llt_requires_binning_and_collects_all_violations() {
        let text = r#"{
            "model": {
                "kind": "non_lattice_parametric",
                "neg_inf_prob": 0.1,
                "family": "uniform_mixture",
                "params": { "components": [ { "weight": 1.0, "lo": -0.5, "hi": 1.5 } ] }
            },
            "experiment": { "kind": "llt", "n": 0, "replicas": 1000 },
            "renewal": { "horizon": 50, "margin": 10 },
            "seed": 7,
            "output": { "dir": "out" }
        }"#;
        match parse_config(text) {
            Err(Error::ConfigInvalid { violations }) => {
                let joined = violations.join("\n");
                assert!(joined.contains("binning: required"), "{joined}");
                assert!(joined.contains("experiment.n"), "{joined}");
                assert!(joined.contains("renewal.margin"), "{joined}");
                assert_eq!(violations.len(), 3, "{joined}");
            }
            other => panic!("expected invalid config, got {other:?}"),
        }
    }

    #[test]
    fn arithmetic_model_must_not_bin() {
        let text = MINIMAL_ARITHMETIC
            .replace("\"seed\": 42", "\"binning\": { \"rule\": \"power\" }, \"seed\": 42");
        match parse_config(&text) {
            Err(Error::ConfigInvalid { violations }) => {
                assert!(violations.iter().any(|v| v.starts_with("binning:")), "{violations:?}");
            }
            other => panic!("expected invalid config, got {other:?}"),
        }
    }

    #[test]
    fn digest_distinguishes_configs() {
        let a = parse_config(MINIMAL_ARITHMETIC).unwrap();
        let mut b = a.clone();
        b.seed = 43;
        assert_ne!(a.digest(), b.digest());
        assert_eq!(a.digest().len(), 64);
    }

    #[test]
    fn built_model_matches_sections() {
        let doc = parse_config(MINIMAL_ARITHMETIC).unwrap();
        let model = doc.build_model().unwrap();
        assert!(model.validate().admissible());
        assert_eq!(model.neg_inf_prob(), 0.1);
    }

    #[test]
    fn binning_delta_follows_the_power_rule() {
        let b = BinningSection { rule: "power".to_string(), exponent: -0.25, scale: 1.0 };
        assert!((b.delta(200) - (200f64).powf(-0.25)).abs() < 1e-15);
        let scaled = BinningSection { rule: "power".to_string(), exponent: -0.5, scale: 2.0 };
        assert!((scaled.delta(100) - 0.2).abs() < 1e-15);
    }
}

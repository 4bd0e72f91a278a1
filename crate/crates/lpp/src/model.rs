//! Edge-weight laws: specification, standing-condition validation,
//! classification and sampling.
//!
//! A law puts mass `neg_inf_prob` on `-inf` and the rest on a finite part
//! that is either an integer-valued table (arithmetic case) or a finite
//! mixture of uniform densities on bounded intervals (non-lattice case).
//! Bounded supports make the exponential-moment condition structural:
//! `E exp(C v+) < inf` holds for every `C`, so validation records the
//! declared bound instead of attempting a statistical test.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::weight::Weight;

/// Tolerance for probability normalization of model specifications.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// One uniform component of a non-lattice mixture law.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniformComponent {
    /// Mixture weight within the finite part; weights sum to 1.
    pub weight: f64,
    pub lo: f64,
    pub hi: f64,
}

/// The finite part of an edge-weight law.
#[derive(Clone, Debug, PartialEq)]
pub enum WeightLaw {
    /// Integer support with explicit probabilities (these sum with the
    /// `-inf` mass to 1).
    ArithmeticTable(Vec<(i64, f64)>),
    /// Finite mixture of uniform densities on bounded intervals.
    UniformMixture(Vec<UniformComponent>),
}

/// Declared lattice type of a law. Classification is declared by the
/// model kind, never inferred from samples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LatticeClass {
    /// Integer-valued with positive-support gcd 1 (lattice span 1).
    Arithmetic,
    /// The finite part has a density component.
    NonLattice,
}

/// A fully specified edge-weight law.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightModel {
    neg_inf_prob: f64,
    law: WeightLaw,
    /// Declared `C` with `E exp(C v+) < inf`; any positive value works
    /// for the bounded supports admitted here.
    exp_moment_bound: f64,
}

/// Standing conditions checked by [`WeightModel::validate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Condition {
    /// `P(v > 0) > 0`.
    PositiveMass,
    /// The conditional law of `v` given `v > 0` is not a point mass.
    NonDegeneratePlus,
    /// `E exp(C v+) < inf` for the declared `C`.
    ExponentialMoment,
    /// Arithmetic: positive support has gcd 1. Non-lattice: the finite
    /// part carries a density.
    LatticeClassification,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionCheck {
    pub condition: Condition,
    pub satisfied: bool,
    pub detail: String,
}

/// Outcome of validating a structurally well-formed model.
#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<ConditionCheck>,
}

impl ValidationReport {
    /// A model is admissible iff every standing condition passes.
    pub fn admissible(&self) -> bool {
        self.checks.iter().all(|c| c.satisfied)
    }

    pub fn violations(&self) -> impl Iterator<Item = &ConditionCheck> {
        self.checks.iter().filter(|c| !c.satisfied)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl WeightModel {
    /// Builds a model, rejecting structural malformation (probabilities
    /// out of range, tables not normalized, empty support) with the
    /// offending field named. Admissibility is a separate question; see
    /// [`WeightModel::validate`].
    pub fn new(law: WeightLaw, neg_inf_prob: f64, exp_moment_bound: f64) -> Result<WeightModel> {
        let fail = |field: &str, reason: String| {
            Err(Error::ModelStructure { field: field.to_string(), reason })
        };
        if !(0.0..1.0).contains(&neg_inf_prob) {
            return fail("neg_inf_prob", format!("must lie in [0, 1), got {neg_inf_prob}"));
        }
        if !(exp_moment_bound > 0.0 && exp_moment_bound.is_finite()) {
            return fail(
                "exp_moment_bound",
                format!("must be a positive finite real, got {exp_moment_bound}"),
            );
        }
        match &law {
            WeightLaw::ArithmeticTable(entries) => {
                if entries.is_empty() {
                    return fail("table", "support is empty".to_string());
                }
                let mut total = neg_inf_prob;
                for (i, &(value, prob)) in entries.iter().enumerate() {
                    if !(prob > 0.0 && prob <= 1.0) {
                        return fail(
                            "table",
                            format!("entry {i} (value {value}): probability {prob} not in (0, 1]"),
                        );
                    }
                    total += prob;
                }
                for i in 1..entries.len() {
                    if entries[i].0 <= entries[i - 1].0 {
                        return fail(
                            "table",
                            format!("values must be strictly increasing; entry {i} is not"),
                        );
                    }
                }
                if (total - 1.0).abs() > NORMALIZATION_TOL {
                    return fail(
                        "table",
                        format!("probabilities sum with neg_inf_prob to {total}, not 1"),
                    );
                }
            }
            WeightLaw::UniformMixture(components) => {
                if components.is_empty() {
                    return fail("components", "mixture is empty".to_string());
                }
                let mut total = 0.0;
                for (i, c) in components.iter().enumerate() {
                    if !(c.weight > 0.0 && c.weight <= 1.0) {
                        return fail(
                            "components",
                            format!("component {i}: weight {} not in (0, 1]", c.weight),
                        );
                    }
                    if !(c.lo.is_finite() && c.hi.is_finite() && c.lo < c.hi) {
                        return fail(
                            "components",
                            format!("component {i}: interval [{}, {}] is not a bounded nonempty interval", c.lo, c.hi),
                        );
                    }
                    total += c.weight;
                }
                if (total - 1.0).abs() > NORMALIZATION_TOL {
                    return fail("components", format!("weights sum to {total}, not 1"));
                }
            }
        }
        Ok(WeightModel { neg_inf_prob, law, exp_moment_bound })
    }

    /// Convenience constructor for integer tables.
    pub fn arithmetic(entries: &[(i64, f64)], neg_inf_prob: f64) -> Result<WeightModel> {
        let mut sorted = entries.to_vec();
        sorted.sort_by_key(|&(v, _)| v);
        WeightModel::new(WeightLaw::ArithmeticTable(sorted), neg_inf_prob, 1.0)
    }

    /// Convenience constructor for a single uniform component.
    pub fn uniform(lo: f64, hi: f64, neg_inf_prob: f64) -> Result<WeightModel> {
        WeightModel::new(
            WeightLaw::UniformMixture(vec![UniformComponent { weight: 1.0, lo, hi }]),
            neg_inf_prob,
            1.0,
        )
    }

    pub fn law(&self) -> &WeightLaw {
        &self.law
    }

    pub fn neg_inf_prob(&self) -> f64 {
        self.neg_inf_prob
    }

    pub fn exp_moment_bound(&self) -> f64 {
        self.exp_moment_bound
    }

    /// Declared classification: the kind decides which limit theorem
    /// applies.
    pub fn classification(&self) -> LatticeClass {
        match self.law {
            WeightLaw::ArithmeticTable(_) => LatticeClass::Arithmetic,
            WeightLaw::UniformMixture(_) => LatticeClass::NonLattice,
        }
    }

    /// `P(v > 0)`.
    pub fn p_plus(&self) -> f64 {
        match &self.law {
            WeightLaw::ArithmeticTable(entries) => {
                entries.iter().filter(|&&(v, _)| v > 0).map(|&(_, p)| p).sum()
            }
            WeightLaw::UniformMixture(components) => {
                let finite_mass = 1.0 - self.neg_inf_prob;
                finite_mass
                    * components
                        .iter()
                        .filter(|c| c.hi > 0.0)
                        .map(|c| c.weight * (c.hi - c.lo.max(0.0)) / (c.hi - c.lo))
                        .sum::<f64>()
            }
        }
    }

    /// `P(v > -inf)`.
    pub fn p_finite(&self) -> f64 {
        1.0 - self.neg_inf_prob
    }

    /// Essential infimum of `v+` (the conditional law above zero), exact
    /// from the specification. `None` when there is no positive mass.
    pub fn ess_inf_v_plus(&self) -> Option<f64> {
        match &self.law {
            WeightLaw::ArithmeticTable(entries) => entries
                .iter()
                .filter(|&&(v, _)| v > 0)
                .map(|&(v, _)| v as f64)
                .fold(None, |acc, v| Some(acc.map_or(v, |a: f64| a.min(v)))),
            WeightLaw::UniformMixture(components) => components
                .iter()
                .filter(|c| c.hi > 0.0)
                .map(|c| c.lo.max(0.0))
                .fold(None, |acc, v| Some(acc.map_or(v, |a: f64| a.min(v)))),
        }
    }

    /// Essential supremum of `v+`. `None` when there is no positive mass.
    pub fn ess_sup_v_plus(&self) -> Option<f64> {
        match &self.law {
            WeightLaw::ArithmeticTable(entries) => entries
                .iter()
                .filter(|&&(v, _)| v > 0)
                .map(|&(v, _)| v as f64)
                .fold(None, |acc, v| Some(acc.map_or(v, |a: f64| a.max(v)))),
            WeightLaw::UniformMixture(components) => components
                .iter()
                .filter(|c| c.hi > 0.0)
                .map(|c| c.hi)
                .fold(None, |acc, v| Some(acc.map_or(v, |a: f64| a.max(v)))),
        }
    }

    /// Checks the standing conditions and the lattice classification.
    /// Every condition is reported, satisfied or not; the model is
    /// admissible iff all pass.
    pub fn validate(&self) -> ValidationReport {
        let mut checks = Vec::with_capacity(4);

        let p_plus = self.p_plus();
        checks.push(ConditionCheck {
            condition: Condition::PositiveMass,
            satisfied: p_plus > 0.0,
            detail: format!("P(v > 0) = {p_plus}"),
        });

        let (non_degenerate, detail) = match &self.law {
            WeightLaw::ArithmeticTable(entries) => {
                let positive: Vec<i64> =
                    entries.iter().filter(|&&(v, _)| v > 0).map(|&(v, _)| v).collect();
                match positive.len() {
                    0 => (false, "v+ undefined: no positive support".to_string()),
                    1 => (false, format!("v+ is the point mass at {}", positive[0])),
                    n => (true, format!("{n} positive support points")),
                }
            }
            WeightLaw::UniformMixture(_) => {
                if p_plus > 0.0 {
                    (true, "positive part has a density, so P(v+ = c) = 0 for all c".to_string())
                } else {
                    (false, "v+ undefined: no positive support".to_string())
                }
            }
        };
        checks.push(ConditionCheck {
            condition: Condition::NonDegeneratePlus,
            satisfied: non_degenerate,
            detail,
        });

        // Bounded supports carry every exponential moment.
        let sup = self.ess_sup_v_plus();
        checks.push(ConditionCheck {
            condition: Condition::ExponentialMoment,
            satisfied: sup.is_some(),
            detail: match sup {
                Some(s) => format!(
                    "support of v+ bounded by {s}; E exp(C v+) <= exp({}) for declared C = {}",
                    self.exp_moment_bound * s,
                    self.exp_moment_bound
                ),
                None => "v+ undefined: no positive support".to_string(),
            },
        });

        let (class_ok, class_detail) = match &self.law {
            WeightLaw::ArithmeticTable(entries) => {
                let g = entries
                    .iter()
                    .filter(|&&(v, _)| v >= 1)
                    .map(|&(v, _)| v as u64)
                    .fold(0u64, gcd);
                if g == 1 {
                    (true, "arithmetic: positive support has gcd 1 (span 1)".to_string())
                } else {
                    (false, format!("positive support has gcd {g}, not 1"))
                }
            }
            WeightLaw::UniformMixture(_) => {
                (true, "non-lattice: finite part has a density component".to_string())
            }
        };
        checks.push(ConditionCheck {
            condition: Condition::LatticeClassification,
            satisfied: class_ok,
            detail: class_detail,
        });

        ValidationReport { checks }
    }

    /// Draws one edge weight. Deterministic given the rng state.
    ///
    /// Callers are expected to have validated the model (or to be
    /// deliberately force-running an inadmissible one, e.g. degenerate
    /// controls in tests).
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Weight {
        let u: f64 = rng.gen();
        if u < self.neg_inf_prob {
            return Weight::NegInf;
        }
        let mut r = u - self.neg_inf_prob;
        match &self.law {
            WeightLaw::ArithmeticTable(entries) => {
                for &(value, prob) in entries {
                    if r < prob {
                        return Weight::finite(value as f64);
                    }
                    r -= prob;
                }
                Weight::finite(entries.last().expect("non-empty table").0 as f64)
            }
            WeightLaw::UniformMixture(components) => {
                let finite_mass = 1.0 - self.neg_inf_prob;
                for c in components {
                    let mass = c.weight * finite_mass;
                    if r < mass {
                        let t: f64 = rng.gen();
                        return Weight::finite(c.lo + t * (c.hi - c.lo));
                    }
                    r -= mass;
                }
                let c = components.last().expect("non-empty mixture");
                let t: f64 = rng.gen();
                Weight::finite(c.lo + t * (c.hi - c.lo))
            }
        }
    }

    /// Draws from the conditional law of `v` given `v > 0`.
    pub fn sample_v_plus<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.law {
            WeightLaw::ArithmeticTable(entries) => {
                let p_plus: f64 =
                    entries.iter().filter(|&&(v, _)| v > 0).map(|&(_, p)| p).sum();
                assert!(p_plus > 0.0, "sample_v_plus requires positive mass above 0");
                let mut r: f64 = rng.gen::<f64>() * p_plus;
                let mut last = 0.0;
                for &(value, prob) in entries.iter().filter(|&&(v, _)| v > 0) {
                    last = value as f64;
                    if r < prob {
                        return last;
                    }
                    r -= prob;
                }
                last
            }
            WeightLaw::UniformMixture(components) => {
                let masses: Vec<f64> = components
                    .iter()
                    .map(|c| {
                        if c.hi > 0.0 {
                            c.weight * (c.hi - c.lo.max(0.0)) / (c.hi - c.lo)
                        } else {
                            0.0
                        }
                    })
                    .collect();
                let total: f64 = masses.iter().sum();
                assert!(total > 0.0, "sample_v_plus requires positive mass above 0");
                let mut r: f64 = rng.gen::<f64>() * total;
                for (c, &mass) in components.iter().zip(&masses) {
                    if mass > 0.0 && r < mass {
                        let lo = c.lo.max(0.0);
                        let t: f64 = rng.gen();
                        return lo + t * (c.hi - lo);
                    }
                    r -= mass;
                }
                let c = components.iter().rev().find(|c| c.hi > 0.0).expect("positive mass");
                let lo = c.lo.max(0.0);
                let t: f64 = rng.gen();
                lo + t * (c.hi - lo)
            }
        }
    }

    /// Point mass `P(v = query)` for arithmetic tables. The `-inf`
    /// sentinel queries the `-inf` atom; non-integer finite queries have
    /// probability zero.
    pub fn exact_pmf(&self, query: Weight) -> Result<f64> {
        let entries = match &self.law {
            WeightLaw::ArithmeticTable(entries) => entries,
            WeightLaw::UniformMixture(_) => {
                return Err(Error::UnsupportedModelKind(
                    "exact_pmf is defined only for arithmetic tables",
                ))
            }
        };
        Ok(match query {
            Weight::NegInf => self.neg_inf_prob,
            Weight::Finite(x) => {
                if x.fract() != 0.0 {
                    0.0
                } else {
                    let k = x as i64;
                    entries.iter().find(|&&(v, _)| v == k).map_or(0.0, |&(_, p)| p)
                }
            }
        })
    }
}

/// The default arithmetic benchmark law: mass 0.45 on 1 and on 2, mass
/// 0.1 on `-inf`.
pub fn default_arithmetic_model() -> WeightModel {
    WeightModel::arithmetic(&[(1, 0.45), (2, 0.45)], 0.1).expect("valid by construction")
}

/// The default non-lattice benchmark law: mass 0.1 on `-inf`, otherwise
/// uniform on `[-0.5, 1.5]`.
pub fn default_uniform_model() -> WeightModel {
    WeightModel::uniform(-0.5, 1.5, 0.1).expect("valid by construction")
}

//! Cumulant generating functions `A(lambda, mu) = ln E exp(lambda tau
//! + mu zeta)` of a cycle vector, analytic or empirical.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::regen::CycleSample;

/// Default effective-sample-size floor for empirical evaluation.
/// Exponential tilting with few effective samples silently corrupts
/// everything downstream, so queries below the floor error out instead.
pub const DEFAULT_ESS_FLOOR: f64 = 100.0;

/// Rectangle on which a CGF is declared finite and stable.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CgfDomain {
    pub lambda: (f64, f64),
    pub mu: (f64, f64),
}

impl CgfDomain {
    pub fn unbounded() -> CgfDomain {
        CgfDomain {
            lambda: (f64::NEG_INFINITY, f64::INFINITY),
            mu: (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    pub fn rectangle(lambda: (f64, f64), mu: (f64, f64)) -> CgfDomain {
        assert!(lambda.0 < lambda.1 && mu.0 < mu.1);
        CgfDomain { lambda, mu }
    }

    pub fn contains(&self, lambda: f64, mu: f64) -> bool {
        self.lambda.0 <= lambda && lambda <= self.lambda.1 && self.mu.0 <= mu && mu <= self.mu.1
    }
}

impl Default for CgfDomain {
    fn default() -> CgfDomain {
        CgfDomain::rectangle((-40.0, 40.0), (-40.0, 40.0))
    }
}

/// Closed-form CGFs for controls and synthetic laws.
#[derive(Clone, Debug)]
pub enum AnalyticCgf {
    /// `(tau, zeta)` constant: `A = lambda tau0 + mu zeta0`.
    Degenerate { tau: f64, zeta: f64 },
    /// `tau = 1`, `zeta ~ Normal(mean, sd^2)`:
    /// `A = lambda + mu mean + mu^2 sd^2 / 2`.
    UnitTauNormalZeta { mean: f64, sd: f64 },
    /// Independent normal coordinates (2-D Legendre control).
    IndependentNormalPair { mean_tau: f64, sd_tau: f64, mean_zeta: f64, sd_zeta: f64 },
    /// Finite joint pmf on `(tau, zeta)` atoms `(tau, zeta, prob)`.
    TablePair { atoms: Vec<(f64, f64, f64)> },
}

/// Sample-backed CGF over aggregated `(tau, zeta)` atoms. Duplicate
/// pairs (ubiquitous for arithmetic weights) collapse into counts, so
/// evaluation is linear in the number of distinct atoms.
#[derive(Clone, Debug)]
pub struct EmpiricalCgf {
    /// `(tau, zeta, count)`, sorted by `(tau, zeta)`.
    atoms: Vec<(f64, f64, f64)>,
    n_samples: f64,
    ess_floor: f64,
    domain: CgfDomain,
}

#[derive(Clone, Debug)]
pub enum CgfModel {
    Analytic { form: AnalyticCgf, domain: CgfDomain },
    Empirical(EmpiricalCgf),
}

fn log_mean_exp(terms: impl Iterator<Item = (f64, f64)> + Clone, total_weight: f64) -> f64 {
    // terms yield (exponent, weight); max-shift stabilization.
    let m = terms.clone().fold(f64::NEG_INFINITY, |acc, (e, _)| acc.max(e));
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let sum: f64 = terms.map(|(e, w)| w * (e - m).exp()).sum();
    m + (sum / total_weight).ln()
}

impl CgfModel {
    pub fn analytic(form: AnalyticCgf) -> CgfModel {
        CgfModel::Analytic { form, domain: CgfDomain::unbounded() }
    }

    pub fn analytic_on(form: AnalyticCgf, domain: CgfDomain) -> CgfModel {
        CgfModel::Analytic { form, domain }
    }

    /// Aggregates the non-first cycles of a sample into an empirical
    /// CGF with the given effective-sample-size floor.
    pub fn empirical_from_cycles(
        cycles: &[CycleSample],
        ess_floor: f64,
        domain: CgfDomain,
    ) -> Result<CgfModel> {
        let mut pairs: Vec<(f64, f64)> =
            cycles.iter().filter(|c| !c.is_first).map(|c| (c.tau as f64, c.zeta)).collect();
        if pairs.is_empty() {
            return Err(Error::InsufficientData(
                "empirical cgf needs at least one non-first cycle".to_string(),
            ));
        }
        pairs.sort_by(|a, b| a.partial_cmp(b).expect("finite cycle coordinates"));
        let mut atoms: Vec<(f64, f64, f64)> = Vec::new();
        for (t, z) in pairs {
            match atoms.last_mut() {
                Some(last) if last.0 == t && last.1 == z => last.2 += 1.0,
                _ => atoms.push((t, z, 1.0)),
            }
        }
        let n_samples = atoms.iter().map(|a| a.2).sum();
        Ok(CgfModel::Empirical(EmpiricalCgf { atoms, n_samples, ess_floor, domain }))
    }

    pub fn domain(&self) -> &CgfDomain {
        match self {
            CgfModel::Analytic { domain, .. } => domain,
            CgfModel::Empirical(e) => &e.domain,
        }
    }

    /// `A(lambda, mu)`, or a domain / effective-sample-size error.
    pub fn eval(&self, lambda: f64, mu: f64) -> Result<f64> {
        if !self.domain().contains(lambda, mu) {
            return Err(Error::CgfOutOfDomain { lambda, mu });
        }
        match self {
            CgfModel::Analytic { form, .. } => Ok(match form {
                AnalyticCgf::Degenerate { tau, zeta } => lambda * tau + mu * zeta,
                AnalyticCgf::UnitTauNormalZeta { mean, sd } => {
                    lambda + mu * mean + 0.5 * mu * mu * sd * sd
                }
                AnalyticCgf::IndependentNormalPair { mean_tau, sd_tau, mean_zeta, sd_zeta } => {
                    lambda * mean_tau
                        + 0.5 * lambda * lambda * sd_tau * sd_tau
                        + mu * mean_zeta
                        + 0.5 * mu * mu * sd_zeta * sd_zeta
                }
                AnalyticCgf::TablePair { atoms } => log_mean_exp(
                    atoms.iter().map(|&(t, z, p)| (lambda * t + mu * z, p)),
                    atoms.iter().map(|a| a.2).sum(),
                ),
            }),
            CgfModel::Empirical(e) => {
                let ess = e.ess(lambda, mu);
                if ess < e.ess_floor {
                    return Err(Error::CgfEssBelowFloor {
                        lambda,
                        mu,
                        ess,
                        floor: e.ess_floor,
                    });
                }
                Ok(log_mean_exp(
                    e.atoms.iter().map(|&(t, z, c)| (lambda * t + mu * z, c)),
                    e.n_samples,
                ))
            }
        }
    }

    /// Exact gradient of `A` where a closed form exists (analytic
    /// variants). Used by the Legendre solver; empirical models take
    /// the finite-difference route instead.
    pub fn gradient_closed_form(&self, lambda: f64, mu: f64) -> Option<(f64, f64)> {
        match self {
            CgfModel::Analytic { form, .. } => Some(match form {
                AnalyticCgf::Degenerate { tau, zeta } => (*tau, *zeta),
                AnalyticCgf::UnitTauNormalZeta { mean, sd } => (1.0, mean + mu * sd * sd),
                AnalyticCgf::IndependentNormalPair { mean_tau, sd_tau, mean_zeta, sd_zeta } => (
                    mean_tau + lambda * sd_tau * sd_tau,
                    mean_zeta + mu * sd_zeta * sd_zeta,
                ),
                AnalyticCgf::TablePair { atoms } => {
                    let (et, ez, _) = tilted_moments(atoms, lambda, mu);
                    (et, ez)
                }
            }),
            CgfModel::Empirical(_) => None,
        }
    }

    /// Exact Hessian of `A` for analytic variants.
    pub fn hessian_closed_form(&self, lambda: f64, mu: f64) -> Option<[[f64; 2]; 2]> {
        match self {
            CgfModel::Analytic { form, .. } => Some(match form {
                AnalyticCgf::Degenerate { .. } => [[0.0, 0.0], [0.0, 0.0]],
                AnalyticCgf::UnitTauNormalZeta { sd, .. } => [[0.0, 0.0], [0.0, sd * sd]],
                AnalyticCgf::IndependentNormalPair { sd_tau, sd_zeta, .. } => {
                    [[sd_tau * sd_tau, 0.0], [0.0, sd_zeta * sd_zeta]]
                }
                AnalyticCgf::TablePair { atoms } => {
                    let (et, ez, cov) = tilted_moments(atoms, lambda, mu);
                    let _ = (et, ez);
                    cov
                }
            }),
            CgfModel::Empirical(_) => None,
        }
    }

    /// Number of backing samples (empirical only).
    pub fn n_samples(&self) -> Option<f64> {
        match self {
            CgfModel::Analytic { .. } => None,
            CgfModel::Empirical(e) => Some(e.n_samples),
        }
    }
}

impl EmpiricalCgf {
    /// Effective sample size `(sum w)^2 / sum w^2` of the tilt weights
    /// `w = exp(lambda tau + mu zeta)`; shift-invariant.
    fn ess(&self, lambda: f64, mu: f64) -> f64 {
        let m = self
            .atoms
            .iter()
            .fold(f64::NEG_INFINITY, |acc, &(t, z, _)| acc.max(lambda * t + mu * z));
        let (mut s1, mut s2) = (0.0, 0.0);
        for &(t, z, c) in &self.atoms {
            let w = (lambda * t + mu * z - m).exp();
            s1 += c * w;
            s2 += c * w * w;
        }
        s1 * s1 / s2
    }

    pub fn atoms(&self) -> &[(f64, f64, f64)] {
        &self.atoms
    }
}

/// Tilted mean and covariance of a finite `(tau, zeta)` table under the
/// weights `p exp(lambda tau + mu zeta)`.
fn tilted_moments(atoms: &[(f64, f64, f64)], lambda: f64, mu: f64) -> (f64, f64, [[f64; 2]; 2]) {
    let m =
        atoms.iter().fold(f64::NEG_INFINITY, |acc, &(t, z, _)| acc.max(lambda * t + mu * z));
    let mut w_sum = 0.0;
    let (mut et, mut ez) = (0.0, 0.0);
    let (mut ett, mut ezz, mut etz) = (0.0, 0.0, 0.0);
    for &(t, z, p) in atoms {
        let w = p * (lambda * t + mu * z - m).exp();
        w_sum += w;
        et += w * t;
        ez += w * z;
        ett += w * t * t;
        ezz += w * z * z;
        etz += w * t * z;
    }
    et /= w_sum;
    ez /= w_sum;
    ett /= w_sum;
    ezz /= w_sum;
    etz /= w_sum;
    (et, ez, [[ett - et * et, etz - et * ez], [etz - et * ez, ezz - ez * ez]])
}

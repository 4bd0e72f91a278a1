//! Compound-renewal layer: cycle moments, cumulant generating
//! functions, rate functions, Legendre transforms, size-biased residual
//! vectors, and forward simulation of the cycle process.

mod cgf;
mod rate;
mod sim;
mod star;
mod stone;

pub use cgf::{AnalyticCgf, CgfDomain, CgfModel, EmpiricalCgf, DEFAULT_ESS_FLOOR};
pub use rate::{rate_curvature_check, rate_function, rate_profile, CurvatureReport, RateValue};
pub use sim::{simulate_crp, CrpPath, CrpSimulator, CrpVariant, CycleAtom, CycleLaw, SyntheticCycleLaw};
pub use star::{sample_star_vector, StarSampler};
pub use stone::{stone_quantities, StoneValue};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::regen::CycleSample;

/// Drift and variance-rate estimates from a cycle sample, with
/// jackknife standard errors.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CrpSummary {
    /// `a = E zeta / E tau`.
    pub a_hat: f64,
    /// `sigma^2 = E (zeta - a tau)^2 / E tau`, plug-in.
    pub sigma2_hat: f64,
    pub e_tau: f64,
    pub e_zeta: f64,
    pub n_cycles: u64,
    pub se_a: f64,
    pub se_sigma2: f64,
    pub se_e_tau: f64,
    pub se_e_zeta: f64,
}

impl CrpSummary {
    pub fn sigma_hat(&self) -> f64 {
        self.sigma2_hat.sqrt()
    }
}

/// Estimates the drift `a` and variance rate `sigma^2` from the
/// non-first cycles. Jackknife standard errors are exact leave-one-out
/// recomputations via the five power sums, so the whole pass is O(n).
pub fn estimate_moments(cycles: &[CycleSample]) -> Result<CrpSummary> {
    let data: Vec<(f64, f64)> =
        cycles.iter().filter(|c| !c.is_first).map(|c| (c.tau as f64, c.zeta)).collect();
    let n = data.len();
    if n < 2 {
        return Err(Error::InsufficientData(format!(
            "moment estimation needs at least 2 non-first cycles, got {n}"
        )));
    }
    let nf = n as f64;
    let (mut s_t, mut s_z, mut s_tt, mut s_zz, mut s_tz) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(t, z) in &data {
        s_t += t;
        s_z += z;
        s_tt += t * t;
        s_zz += z * z;
        s_tz += t * z;
    }
    let e_tau = s_t / nf;
    let e_zeta = s_z / nf;
    let a_hat = e_zeta / e_tau;
    let quad = |a: f64, zz: f64, tz: f64, tt: f64| zz - 2.0 * a * tz + a * a * tt;
    let sigma2_hat = quad(a_hat, s_zz, s_tz, s_tt) / s_t;

    // Leave-one-out replicates.
    let mut a_jack = Vec::with_capacity(n);
    let mut s2_jack = Vec::with_capacity(n);
    for &(t, z) in &data {
        let st = s_t - t;
        let sz = s_z - z;
        let ai = sz / st;
        a_jack.push(ai);
        s2_jack.push(quad(ai, s_zz - z * z, s_tz - t * z, s_tt - t * t) / st);
    }
    let jack_se = |reps: &[f64]| {
        let m = crate::stats::mean(reps);
        let ss: f64 = reps.iter().map(|r| (r - m) * (r - m)).sum();
        ((nf - 1.0) / nf * ss).sqrt()
    };

    Ok(CrpSummary {
        a_hat,
        sigma2_hat,
        e_tau,
        e_zeta,
        n_cycles: n as u64,
        se_a: jack_se(&a_jack),
        se_sigma2: jack_se(&s2_jack),
        se_e_tau: crate::stats::se_of_mean(&data.iter().map(|d| d.0).collect::<Vec<_>>()),
        se_e_zeta: crate::stats::se_of_mean(&data.iter().map(|d| d.1).collect::<Vec<_>>()),
    })
}

#[cfg(test)]
pub(crate) fn plain_cycles(pairs: &[(i64, f64)]) -> Vec<CycleSample> {
    pairs
        .iter()
        .map(|&(tau, zeta)| {
            let mut marks = vec![0.0; tau as usize];
            *marks.last_mut().unwrap() = zeta;
            CycleSample { tau, marks, zeta, is_first: false }
        })
        .collect()
}

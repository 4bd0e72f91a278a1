//! The rate function `D(alpha) = sup { lambda + mu alpha : A(lambda,
//! mu) <= 0 }` by nested one-dimensional solvers.
//!
//! Because `tau >= 1` almost surely, `A` is strictly increasing in
//! `lambda` with slope at least 1, so the zero set has a well-defined
//! upper boundary `lambda0(mu)` (a concave curve through the origin)
//! and the supremum reduces to maximizing the concave scalar function
//! `g(mu) = lambda0(mu) + mu alpha`: a bisection root inside a
//! golden-section search, no multivariate machinery.

use serde::Serialize;

use crate::crp::CgfModel;
use crate::crp::CrpSummary;
use crate::error::{Error, Result};

/// Residual tolerance for the root `A(lambda0(mu), mu) = 0`.
const ROOT_TOL: f64 = 1e-10;
/// Relative width tolerance for the outer golden-section search.
const GOLDEN_TOL: f64 = 1e-11;
const MAX_EXPANSIONS: usize = 70;

/// A rate-function value with its maximizer. When the search ran into
/// the CGF's domain (or effective-sample-size) boundary, the value is
/// only a lower bound and `boundary_limited` is set.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RateValue {
    pub d: f64,
    pub lambda_star: f64,
    pub mu_star: f64,
    pub boundary_limited: bool,
}

/// `lambda0(mu)`: the unique root in `lambda` of `A(lambda, mu) = 0`,
/// by geometric bracket expansion (clamped to the declared domain, with
/// step backoff on failed evaluations) and bisection. `None` when no
/// sign change is reachable inside the domain.
fn lambda_root(model: &CgfModel, mu: f64) -> Option<f64> {
    let domain = *model.domain();
    if mu < domain.mu.0 || mu > domain.mu.1 {
        return None;
    }
    let (l_min, l_max) = domain.lambda;
    let eval = |l: f64| model.eval(l, mu).ok();

    let mut lo = (-1.0f64).clamp(l_min, l_max);
    let mut hi = 1.0f64.clamp(l_min, l_max);
    let mut f_lo = eval(lo)?;
    let mut f_hi = eval(hi)?;

    let mut step = 2.0;
    let mut budget = MAX_EXPANSIONS;
    while f_lo > 0.0 {
        if lo <= l_min || budget == 0 {
            return None;
        }
        budget -= 1;
        match eval((lo - step).max(l_min)) {
            Some(v) => {
                lo = (lo - step).max(l_min);
                f_lo = v;
                step *= 2.0;
            }
            None => {
                step *= 0.5;
                if step < 1e-12 {
                    return None;
                }
            }
        }
    }
    step = 2.0;
    budget = MAX_EXPANSIONS;
    while f_hi < 0.0 {
        if hi >= l_max || budget == 0 {
            return None;
        }
        budget -= 1;
        match eval((hi + step).min(l_max)) {
            Some(v) => {
                hi = (hi + step).min(l_max);
                f_hi = v;
                step *= 2.0;
            }
            None => {
                step *= 0.5;
                if step < 1e-12 {
                    return None;
                }
            }
        }
    }

    let mut mid = 0.5 * (lo + hi);
    for _ in 0..200 {
        mid = 0.5 * (lo + hi);
        let f_mid = eval(mid)?;
        if f_mid.abs() <= ROOT_TOL {
            return Some(mid);
        }
        if f_mid < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Slope >= 1 makes |A| <= bracket width; reaching here means the
    // bracket collapsed to rounding noise, which is just as good.
    Some(mid)
}

/// Computes `D(alpha)` and its maximizer `(lambda*, mu*)`.
pub fn rate_function(model: &CgfModel, alpha: f64) -> Result<RateValue> {
    assert!(alpha > 0.0, "the rate function is evaluated on alpha > 0, got {alpha}");
    let g = |mu: f64| lambda_root(model, mu).map(|l| (l + mu * alpha, l));

    let Some((g0, l0)) = g(0.0) else {
        return Err(Error::EstimationFailure(
            "cgf not evaluable near the origin; cannot start the rate search".to_string(),
        ));
    };

    let mut boundary_limited = false;
    let mut best = (g0, l0, 0.0); // (g, lambda, mu)

    // Walk uphill in mu, doubling the step; on a failed evaluation
    // (domain or effective-sample-size boundary) back off with halved
    // steps instead of abandoning the direction.
    let mut bracket_lo = 0.0f64;
    let mut bracket_hi = 0.0f64;
    for direction in [1.0f64, -1.0] {
        let mut step = 0.25;
        let mut prev_mu = 0.0;
        let mut prev_g = g0;
        let mut failures = 0;
        let edge;
        loop {
            let mu = prev_mu + direction * step;
            match g(mu) {
                Some((gv, lv)) => {
                    if gv > best.0 {
                        best = (gv, lv, mu);
                    }
                    if gv <= prev_g {
                        // Turned down: the peak lies at most one probe
                        // beyond prev_mu.
                        edge = mu;
                        break;
                    }
                    prev_mu = mu;
                    prev_g = gv;
                    step *= 2.0;
                    if step > 1e17 {
                        // Unbounded direction (target slope outside the
                        // achievable range); report a lower bound.
                        boundary_limited = true;
                        edge = mu;
                        break;
                    }
                }
                None => {
                    boundary_limited = true;
                    failures += 1;
                    step *= 0.5;
                    if step < 1e-9 || failures > 80 {
                        edge = prev_mu;
                        break;
                    }
                }
            }
        }
        if direction > 0.0 {
            bracket_hi = bracket_hi.max(edge).max(prev_mu);
        } else {
            bracket_lo = bracket_lo.min(edge).min(prev_mu);
        }
    }

    // Golden-section over the bracket, tolerating failed evaluations by
    // treating them as -inf (they only occur at the domain boundary).
    let phi = 0.5 * (3.0 - 5.0f64.sqrt());
    let (mut lo, mut hi) = (bracket_lo, bracket_hi);
    if hi - lo > 0.0 {
        let mut x1 = lo + phi * (hi - lo);
        let mut x2 = hi - phi * (hi - lo);
        let mut g1 = g(x1);
        let mut g2 = g(x2);
        for _ in 0..300 {
            if hi - lo <= GOLDEN_TOL * (1.0 + lo.abs().max(hi.abs())) {
                break;
            }
            let f1 = g1.map_or(f64::NEG_INFINITY, |v| v.0);
            let f2 = g2.map_or(f64::NEG_INFINITY, |v| v.0);
            if g1.is_none() || g2.is_none() {
                boundary_limited = true;
            }
            if f1 < f2 {
                lo = x1;
                x1 = x2;
                g1 = g2;
                x2 = hi - phi * (hi - lo);
                g2 = g(x2);
            } else {
                hi = x2;
                x2 = x1;
                g2 = g1;
                x1 = lo + phi * (hi - lo);
                g1 = g(x1);
            }
            for (x, gv) in [(x1, g1), (x2, g2)] {
                if let Some((val, l)) = gv {
                    if val > best.0 {
                        best = (val, l, x);
                    }
                }
            }
        }
    }

    Ok(RateValue { d: best.0, lambda_star: best.1, mu_star: best.2, boundary_limited })
}

/// Rate function on a grid of points (convenience over repeated calls;
/// the evaluations are independent).
pub fn rate_profile(model: &CgfModel, alphas: &[f64]) -> Result<Vec<RateValue>> {
    alphas.iter().map(|&a| rate_function(model, a)).collect()
}

/// Curvature diagnostics at the drift: central finite differences of
/// `D` around `a_hat` with step `0.02 a_hat`, compared against
/// `1 / sigma2_hat`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CurvatureReport {
    pub d_at_a: f64,
    pub d_prime: f64,
    pub d_second: f64,
    /// `|D''(a) sigma^2 - 1|`; the headline identity error.
    pub identity_error: f64,
    /// Set when the law is too degenerate for the check (zero variance
    /// or a boundary-limited rate evaluation).
    pub degenerate: bool,
}

pub fn rate_curvature_check(model: &CgfModel, summary: &CrpSummary) -> Result<CurvatureReport> {
    let a = summary.a_hat;
    let h = 0.02 * a;
    let center = rate_function(model, a)?;
    let plus = rate_function(model, a + h)?;
    let minus = rate_function(model, a - h)?;
    let d_prime = (plus.d - minus.d) / (2.0 * h);
    let d_second = (plus.d - 2.0 * center.d + minus.d) / (h * h);
    let degenerate = summary.sigma2_hat <= 0.0
        || center.boundary_limited
        || plus.boundary_limited
        || minus.boundary_limited
        || !d_second.is_finite();
    let identity_error =
        if degenerate { f64::INFINITY } else { (d_second * summary.sigma2_hat - 1.0).abs() };
    Ok(CurvatureReport { d_at_a: center.d, d_prime, d_second, identity_error, degenerate })
}

//! Two-dimensional Legendre transform `Lambda(theta, alpha) =
//! sup { lambda theta + mu alpha - A(lambda, mu) }` and the Hessian
//! determinant that enters the integro-local normalization.

use serde::Serialize;

use crate::crp::CgfModel;
use crate::error::{Error, Result};

/// Relative finite-difference step for empirical derivatives.
const FD_STEP: f64 = 1e-4;
const MAX_NEWTON: usize = 100;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct StoneValue {
    pub lambda_value: f64,
    /// Determinant of the Hessian of the transform at `(theta, alpha)`,
    /// i.e. `1 / det A''` at the dual point.
    pub hessian_det: f64,
    pub lambda_star: f64,
    pub mu_star: f64,
}

fn gradient(model: &CgfModel, l: f64, m: f64) -> Result<(f64, f64)> {
    if let Some(g) = model.gradient_closed_form(l, m) {
        return Ok(g);
    }
    let (hl, hm) = (FD_STEP * (1.0 + l.abs()), FD_STEP * (1.0 + m.abs()));
    let dl = (model.eval(l + hl, m)? - model.eval(l - hl, m)?) / (2.0 * hl);
    let dm = (model.eval(l, m + hm)? - model.eval(l, m - hm)?) / (2.0 * hm);
    Ok((dl, dm))
}

fn hessian(model: &CgfModel, l: f64, m: f64) -> Result<[[f64; 2]; 2]> {
    if let Some(h) = model.hessian_closed_form(l, m) {
        return Ok(h);
    }
    let (hl, hm) = (FD_STEP * (1.0 + l.abs()), FD_STEP * (1.0 + m.abs()));
    let center = model.eval(l, m)?;
    let dll = (model.eval(l + hl, m)? - 2.0 * center + model.eval(l - hl, m)?) / (hl * hl);
    let dmm = (model.eval(l, m + hm)? - 2.0 * center + model.eval(l, m - hm)?) / (hm * hm);
    let dlm = (model.eval(l + hl, m + hm)? - model.eval(l + hl, m - hm)?
        - model.eval(l - hl, m + hm)?
        + model.eval(l - hl, m - hm)?)
        / (4.0 * hl * hm);
    Ok([[dll, dlm], [dlm, dmm]])
}

/// Solves `grad A = (theta, alpha)` by damped Newton and assembles the
/// transform value and `|Lambda''| = 1 / det A''`.
pub fn stone_quantities(model: &CgfModel, theta: f64, alpha: f64) -> Result<StoneValue> {
    let scale = 1.0 + theta.abs() + alpha.abs();
    let tol = 1e-9 * scale;
    let (mut l, mut m) = (0.0f64, 0.0f64);
    let mut grad = gradient(model, l, m)?;
    let mut res = ((grad.0 - theta).powi(2) + (grad.1 - alpha).powi(2)).sqrt();

    for _ in 0..MAX_NEWTON {
        if res <= tol {
            let a_val = model.eval(l, m)?;
            let h = hessian(model, l, m)?;
            let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
            if det <= 0.0 || !det.is_finite() {
                return Err(Error::NonConvergence { iterations: MAX_NEWTON, last: (l, m) });
            }
            return Ok(StoneValue {
                lambda_value: l * theta + m * alpha - a_val,
                hessian_det: 1.0 / det,
                lambda_star: l,
                mu_star: m,
            });
        }
        let h = hessian(model, l, m)?;
        let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
        if det.abs() < 1e-300 {
            return Err(Error::NonConvergence { iterations: MAX_NEWTON, last: (l, m) });
        }
        let (rl, rm) = (theta - grad.0, alpha - grad.1);
        let dl = (h[1][1] * rl - h[0][1] * rm) / det;
        let dm = (h[0][0] * rm - h[1][0] * rl) / det;

        // Damping: halve until the residual actually shrinks and the
        // point stays evaluable.
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let (lt, mt) = (l + t * dl, m + t * dm);
            if let Ok(gt) = gradient(model, lt, mt) {
                let rt = ((gt.0 - theta).powi(2) + (gt.1 - alpha).powi(2)).sqrt();
                if rt < res {
                    l = lt;
                    m = mt;
                    grad = gt;
                    res = rt;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            return Err(Error::NonConvergence { iterations: MAX_NEWTON, last: (l, m) });
        }
    }
    Err(Error::NonConvergence { iterations: MAX_NEWTON, last: (l, m) })
}

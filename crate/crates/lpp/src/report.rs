//! Result records and their serialization: `result.csv`,
//! `summary.json`, `cycles.csv`, `rate.csv`, all written atomically
//! (temp file plus rename) with full round-trip decimal precision.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::crp::RateValue;
use crate::error::{Error, Result};
use crate::regen::CycleSample;

/// Header metadata attached to a measurement record.
#[derive(Clone, Debug, Serialize)]
pub struct RecordMeta {
    pub a_hat: f64,
    pub sigma_hat: f64,
    pub n: i64,
    pub replicas: u64,
    pub seed: u64,
    pub config_digest: String,
}

/// One cell (or bin) of the measured law of the maximal weight against
/// its two theory columns.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ResultRow {
    /// Cell value (arithmetic) or bin left edge (non-lattice).
    pub x: f64,
    pub p_hat: f64,
    pub se: f64,
    /// Rate-function form of the asymptotic density.
    pub theory_d: f64,
    /// Gaussian (moderate-deviation) form.
    pub theory_gauss: f64,
}

impl ResultRow {
    pub fn ratio_d(&self) -> f64 {
        self.p_hat / self.theory_d
    }

    pub fn ratio_gauss(&self) -> f64 {
        self.p_hat / self.theory_gauss
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ResultRecord {
    pub meta: RecordMeta,
    pub rows: Vec<ResultRow>,
}

impl ResultRecord {
    /// Structural invariants: probabilities are probabilities, the
    /// recorded range does not overshoot total mass, theory columns are
    /// finite and positive.
    pub fn validate(&self) -> Result<()> {
        let mut total = 0.0;
        let mut var = 0.0;
        for row in &self.rows {
            if !(0.0..=1.0).contains(&row.p_hat) {
                return Err(Error::EstimationFailure(format!(
                    "p_hat {} out of [0, 1] at x = {}",
                    row.p_hat, row.x
                )));
            }
            if !(row.theory_d > 0.0 && row.theory_d.is_finite())
                || !(row.theory_gauss > 0.0 && row.theory_gauss.is_finite())
            {
                return Err(Error::EstimationFailure(format!(
                    "theory column not finite positive at x = {}",
                    row.x
                )));
            }
            total += row.p_hat;
            var += row.se * row.se;
        }
        if total > 1.0 + 5.0 * var.sqrt() {
            return Err(Error::EstimationFailure(format!(
                "recorded mass {total} exceeds 1 beyond statistical slack"
            )));
        }
        Ok(())
    }

    /// Total recorded empirical mass.
    pub fn recorded_mass(&self) -> f64 {
        self.rows.iter().map(|r| r.p_hat).sum()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,p_hat,se,theory_d,theory_gauss,ratio_d,ratio_gauss\n");
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.x,
                r.p_hat,
                r.se,
                r.theory_d,
                r.theory_gauss,
                r.ratio_d(),
                r.ratio_gauss()
            )
            .expect("string write");
        }
        out
    }
}

/// One named pass/fail check inside a summary.
#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl CheckOutcome {
    pub fn new(name: &str, pass: bool, detail: String) -> CheckOutcome {
        CheckOutcome { name: name.to_string(), pass, detail }
    }
}

/// Top-level `summary.json` payload.
#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub config_digest: String,
    pub a_hat: f64,
    pub sigma_hat: f64,
    pub n: i64,
    pub replicas: u64,
    pub checks: Vec<CheckOutcome>,
}

impl Summary {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("summary serializes");
        s.push('\n');
        s
    }
}

/// Write-temp-then-rename so concurrent readers never observe a torn
/// file and reruns replace outputs atomically.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    fs::create_dir_all(dir).map_err(|e| Error::io(dir.display().to_string(), e))?;
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, bytes).map_err(|e| Error::io(tmp.display().to_string(), e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path.display().to_string(), e))?;
    Ok(())
}

/// Emits `result.csv` and `summary.json` into `out_dir`.
pub fn write_results(record: &ResultRecord, summary: &Summary, out_dir: &Path) -> Result<()> {
    record.validate()?;
    write_atomic(&out_dir.join("result.csv"), record.to_csv().as_bytes())?;
    write_atomic(&out_dir.join("summary.json"), summary.to_json().as_bytes())?;
    Ok(())
}

/// `cycles.csv`: header `replica,k,is_first,tau,zeta,marks`, marks as
/// semicolon-separated decimals.
pub fn cycles_to_csv(per_replica: &[(u64, &[CycleSample])]) -> String {
    let mut out = String::from("replica,k,is_first,tau,zeta,marks\n");
    for (replica, cycles) in per_replica {
        for (k, c) in cycles.iter().enumerate() {
            let marks =
                c.marks.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(";");
            writeln!(out, "{replica},{k},{},{},{},{marks}", c.is_first, c.tau, c.zeta)
                .expect("string write");
        }
    }
    out
}

/// `rate.csv`: header `alpha,D,lambda_star,mu_star,flag`.
pub fn rate_table_to_csv(alphas: &[f64], values: &[RateValue]) -> String {
    assert_eq!(alphas.len(), values.len());
    let mut out = String::from("alpha,D,lambda_star,mu_star,flag\n");
    for (alpha, v) in alphas.iter().zip(values) {
        writeln!(
            out,
            "{alpha},{},{},{},{}",
            v.d,
            v.lambda_star,
            v.mu_star,
            if v.boundary_limited { "boundary" } else { "ok" }
        )
        .expect("string write");
    }
    out
}

//! End-to-end experiments: pilot estimation, limit-theorem
//! measurement, sanity checks, invariance comparison and decomposition
//! audits, all bit-reproducible from `(config, master seed)`.
//!
//! Every experiment follows a two-phase protocol: a pilot phase samples
//! long windows, detects renewal vertices and estimates the cycle
//! characteristics; a measurement phase samples fresh short windows
//! under independent seed streams, so the theory columns never reuse
//! the randomness they are tested against.

mod audit;
mod invariance;
mod llt;
mod pilot;
mod sanity;

pub use audit::{run_decomposition_audit, run_oracle_sweep, AuditOutcome, OracleOutcome};
pub use invariance::{run_invariance, InvarianceOutcome};
pub use llt::{run_llt, LltOutcome};
pub use pilot::{run_pilot, PilotOutcome};
pub use sanity::{run_lln_clt, LlnOutcome};

use rayon::prelude::*;

use crate::config::ConfigDocument;
use crate::error::{Error, Result};
use crate::model::WeightModel;
use crate::seed::derive_rng;
use crate::window::{SeedProvenance, WeightWindow};

/// Runs `f` on a dedicated thread pool of the configured width. The
/// result must not depend on the pool width; replica seeding and
/// ordered collection guarantee that for all the closures used here.
pub(crate) fn with_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("thread pool construction");
    pool.install(f)
}

/// Maps `f` over `count` freshly sampled windows `[0, len]`, one
/// counter-derived stream per replica, results in replica order.
pub(crate) fn map_windows<T: Send>(
    model: &WeightModel,
    master: u64,
    purpose: &'static str,
    count: u64,
    len: i64,
    f: impl Fn(u64, &WeightWindow) -> T + Sync,
) -> Result<Vec<T>> {
    (0..count)
        .into_par_iter()
        .map(|index| {
            let mut rng = derive_rng(master, purpose, index);
            let window = WeightWindow::sample(
                model,
                0,
                len,
                &mut rng,
                SeedProvenance { master, purpose: purpose.to_string(), index },
            )?;
            Ok(f(index, &window))
        })
        .collect()
}

/// Builds the model from the config and insists on admissibility.
pub(crate) fn admissible_model(doc: &ConfigDocument) -> Result<WeightModel> {
    let model = doc.build_model()?;
    let report = model.validate();
    if !report.admissible() {
        let reasons: Vec<String> =
            report.violations().map(|c| format!("{:?}: {}", c.condition, c.detail)).collect();
        return Err(Error::EstimationFailure(format!(
            "model is not admissible: {}",
            reasons.join("; ")
        )));
    }
    Ok(model)
}

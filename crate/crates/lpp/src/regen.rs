//! Skeleton and renewal structure of a sampled window.
//!
//! A vertex is a skeleton vertex when it is connected to every other
//! in-window vertex by finite-weight paths in both directions, and a
//! skeleton-plus vertex when the connecting paths can be chosen with
//! strictly positive edges only. Renewal vertices are defined through
//! three families of events:
//!
//! * right growth `Ar(c1)`: `w[x][x+i] >= c1 * i` for all depths `i`,
//! * left growth `Al(c1)`: `w[x-j][x] >= c1 * j` for all depths `j`,
//! * spanning-edge bound `A0(c2)`: `v[x-j][x+i] < c2 * (j + i)`,
//!
//! with `0 < c2 <= c1`. The "plus" variants replace `w` by the
//! positive-edge weight `w+`; the spanning-edge bound is shared. The
//! defining intersections are infinite; here every index is truncated
//! at a configurable horizon `H`, and candidate vertices within a
//! boundary margin `B >= H` are discarded so the truncated checks never
//! run off the window.

use rand::Rng;
use serde::Serialize;

use crate::dp::{max_weight_table_into, max_weight_table_upto, PathMode};
use crate::error::{Error, Result};
use crate::model::WeightModel;
use crate::oracle::brute_force_max_weight;
use crate::seed::derive_rng;
use crate::weight::Weight;
use crate::window::{SeedProvenance, WeightWindow};

/// Constants and truncation depths for renewal detection.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RenewalConfig {
    /// Growth-rate constant for the left/right events.
    pub c1: f64,
    /// Spanning-edge constant; `c2 <= c1`.
    pub c2: f64,
    /// Truncation depth `H` for the event intersections.
    pub horizon: i64,
    /// Boundary exclusion zone `B >= H`.
    pub margin: i64,
}

impl RenewalConfig {
    pub fn new(c1: f64, c2: f64, horizon: i64, margin: i64) -> Result<RenewalConfig> {
        let mut violations = Vec::new();
        if !(c1 > 0.0 && c1.is_finite()) {
            violations.push(format!("c1 must be positive and finite, got {c1}"));
        }
        if !(c2 > 0.0 && c2.is_finite()) {
            violations.push(format!("c2 must be positive and finite, got {c2}"));
        }
        if c2 > c1 {
            violations.push(format!("c2 = {c2} must not exceed c1 = {c1}"));
        }
        if horizon < 1 {
            violations.push(format!("horizon must be >= 1, got {horizon}"));
        }
        if margin < horizon {
            violations.push(format!("margin {margin} must be >= horizon {horizon}"));
        }
        if violations.is_empty() {
            Ok(RenewalConfig { c1, c2, horizon, margin })
        } else {
            Err(Error::ConfigInvalid { violations })
        }
    }
}

/// Which of the six defining events hold at a vertex (all truncated at
/// the configured horizon). `a0_plus` coincides with `a0` by
/// definition; it is reported for completeness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EventRecord {
    pub al: bool,
    pub a0: bool,
    pub ar: bool,
    pub al_plus: bool,
    pub a0_plus: bool,
    pub ar_plus: bool,
}

impl EventRecord {
    pub fn renewal(&self) -> bool {
        self.al && self.a0 && self.ar
    }

    pub fn renewal_plus(&self) -> bool {
        self.al_plus && self.a0 && self.ar_plus
    }
}

/// Record of the truncation actually applied during a detection run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TruncationNote {
    pub horizon: i64,
    pub margin: i64,
}

/// All four detected vertex sets of one window.
#[derive(Clone, Debug, Serialize)]
pub struct RegenerationReport {
    pub skeleton: Vec<i64>,
    pub skeleton_plus: Vec<i64>,
    pub renewal: Vec<i64>,
    pub renewal_plus: Vec<i64>,
    pub truncation_note: TruncationNote,
}

/// One regeneration cycle between consecutive renewal vertices: the gap
/// `tau`, the mark vector `u[i] = w[start][start + i]`, and the terminal
/// mark `zeta = u[tau]`. The cycle anchored at the first detected
/// renewal vertex is flagged; its law differs from the rest and it is
/// excluded from cycle statistics.
#[derive(Clone, Debug, Serialize)]
pub struct CycleSample {
    pub tau: i64,
    pub marks: Vec<f64>,
    pub zeta: f64,
    pub is_first: bool,
}

// ---------------------------------------------------------------------
// Skeleton detection via transitive reachability bitsets.
// ---------------------------------------------------------------------

struct BitMatrix {
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    fn new(rows: usize, bits: usize) -> BitMatrix {
        let words = bits.div_ceil(64).max(1);
        BitMatrix { words, data: vec![0; rows * words] }
    }

    #[inline]
    fn set(&mut self, row: usize, bit: usize) {
        self.data[row * self.words + bit / 64] |= 1u64 << (bit % 64);
    }

    #[inline]
    fn or_row_into(&mut self, src: usize, dst: usize) {
        let (a, b) = (src * self.words, dst * self.words);
        for w in 0..self.words {
            let v = self.data[a + w];
            self.data[b + w] |= v;
        }
    }

    #[inline]
    fn popcount(&self, row: usize) -> usize {
        let start = row * self.words;
        self.data[start..start + self.words].iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// For every vertex index `b` of the window, whether all vertices on
/// its left reach it, and whether it reaches all vertices on its right,
/// through edges admitted by `mode`.
fn all_reach_flags(window: &WeightWindow, mode: PathMode) -> (Vec<bool>, Vec<bool>) {
    let n = window.len();
    let lo = window.lo();
    let admits = |j: i64, k: i64| match mode {
        PathMode::All => window.weight(j, k).is_finite(),
        PathMode::PositiveOnly => window.weight(j, k).is_positive(),
    };

    // reach[b] = set of a < b with a path a -> b.
    let mut reach = BitMatrix::new(n + 1, n + 1);
    let mut left_ok = vec![false; n + 1];
    for b in 1..=n {
        for a in 0..b {
            if admits(lo + a as i64, lo + b as i64) {
                reach.or_row_into(a, b);
                reach.set(b, a);
            }
        }
        left_ok[b] = reach.popcount(b) == b;
    }
    left_ok[0] = true;

    // fwd[b] = set of c > b with a path b -> c.
    let mut fwd = BitMatrix::new(n + 1, n + 1);
    let mut right_ok = vec![false; n + 1];
    right_ok[n] = true;
    for b in (0..n).rev() {
        for c in (b + 1)..=n {
            if admits(lo + b as i64, lo + c as i64) {
                fwd.or_row_into(c, b);
                fwd.set(b, c);
            }
        }
        right_ok[b] = fwd.popcount(b) == n - b;
    }
    (left_ok, right_ok)
}

fn interior_range(window: &WeightWindow, margin: i64) -> std::ops::RangeInclusive<i64> {
    (window.lo() + margin)..=(window.hi() - margin)
}

/// Vertices of the margin interior connected to every other in-window
/// vertex by finite-weight paths in both directions. With no `-inf`
/// atom this is the whole interior.
pub fn detect_skeleton(window: &WeightWindow, margin: i64) -> Vec<i64> {
    assert!(margin >= 1, "skeleton detection requires margin >= 1");
    let (left_ok, right_ok) = all_reach_flags(window, PathMode::All);
    interior_range(window, margin)
        .filter(|&x| {
            let i = (x - window.lo()) as usize;
            left_ok[i] && right_ok[i]
        })
        .collect()
}

/// As [`detect_skeleton`], but connectivity must be achieved through
/// strictly positive edges only.
pub fn detect_skeleton_plus(window: &WeightWindow, margin: i64) -> Vec<i64> {
    assert!(margin >= 1, "skeleton detection requires margin >= 1");
    let (left_ok, right_ok) = all_reach_flags(window, PathMode::PositiveOnly);
    interior_range(window, margin)
        .filter(|&x| {
            let i = (x - window.lo()) as usize;
            left_ok[i] && right_ok[i]
        })
        .collect()
}

// ---------------------------------------------------------------------
// Renewal events.
// ---------------------------------------------------------------------

/// Truncated right-growth event: `w[x][x+i] >= c1 * i` for
/// `1 <= i <= min(H, hi - x)`, with the DP aborted at the first failing
/// depth.
fn growth_forward(window: &WeightWindow, x: i64, c1: f64, horizon: i64, mode: PathMode) -> bool {
    let depth = horizon.min(window.hi() - x) as usize;
    let mut table = vec![Weight::NegInf; depth + 1];
    table[0] = Weight::ZERO;
    for i in 1..=depth {
        let k = x + i as i64;
        let mut best = Weight::NegInf;
        for (m, &wm) in table.iter().enumerate().take(i) {
            if wm.is_neg_inf() {
                continue;
            }
            let edge = window.weight(x + m as i64, k);
            let ok = match mode {
                PathMode::All => edge.is_finite(),
                PathMode::PositiveOnly => edge.is_positive(),
            };
            if ok {
                best = best.max(wm + edge);
            }
        }
        if best < Weight::finite(c1 * i as f64) {
            return false;
        }
        table[i] = best;
    }
    true
}

/// Truncated left-growth event: `w[x-j][x] >= c1 * j` for
/// `1 <= j <= min(H, x - lo)`.
fn growth_backward(window: &WeightWindow, x: i64, c1: f64, horizon: i64, mode: PathMode) -> bool {
    let depth = horizon.min(x - window.lo()) as usize;
    let mut table = vec![Weight::NegInf; depth + 1];
    table[0] = Weight::ZERO;
    for j in 1..=depth {
        let m = x - j as i64;
        let mut best = Weight::NegInf;
        for (t, &wt) in table.iter().enumerate().take(j) {
            if wt.is_neg_inf() {
                continue;
            }
            let edge = window.weight(m, x - t as i64);
            let ok = match mode {
                PathMode::All => edge.is_finite(),
                PathMode::PositiveOnly => edge.is_positive(),
            };
            if ok {
                best = best.max(edge + wt);
            }
        }
        if best < Weight::finite(c1 * j as f64) {
            return false;
        }
        table[j] = best;
    }
    true
}

/// Truncated spanning-edge event: every raw edge crossing `x` within
/// the horizon satisfies `v[x-j][x+i] < c2 * (j + i)`.
fn spanning_bound(window: &WeightWindow, x: i64, c2: f64, horizon: i64) -> bool {
    let depth_l = horizon.min(x - window.lo());
    let depth_r = horizon.min(window.hi() - x);
    for j in 1..=depth_l {
        for i in 1..=depth_r {
            if let Weight::Finite(v) = window.weight(x - j, x + i) {
                if v >= c2 * (j + i) as f64 {
                    return false;
                }
            }
        }
    }
    true
}

fn event_record(window: &WeightWindow, x: i64, config: &RenewalConfig) -> EventRecord {
    let ar = growth_forward(window, x, config.c1, config.horizon, PathMode::All);
    // w+ <= w pointwise, so a failed plain event settles the plus event.
    let ar_plus =
        ar && growth_forward(window, x, config.c1, config.horizon, PathMode::PositiveOnly);
    let al = growth_backward(window, x, config.c1, config.horizon, PathMode::All);
    let al_plus =
        al && growth_backward(window, x, config.c1, config.horizon, PathMode::PositiveOnly);
    let a0 = spanning_bound(window, x, config.c2, config.horizon);
    EventRecord { al, a0, ar, al_plus, a0_plus: a0, ar_plus }
}

/// Evaluates all six events at a vertex of the margin interior.
pub fn check_events(
    window: &WeightWindow,
    x: i64,
    config: &RenewalConfig,
) -> Result<EventRecord> {
    if x < window.lo() + config.margin || x > window.hi() - config.margin {
        return Err(Error::MarginViolation {
            x,
            lo: window.lo(),
            hi: window.hi(),
            margin: config.margin,
        });
    }
    Ok(event_record(window, x, config))
}

/// Renewal vertices: margin-interior vertices where the plain left and
/// right growth events and the spanning bound all hold. Sorted
/// ascending; empty is a legitimate outcome.
pub fn detect_renewal(window: &WeightWindow, config: &RenewalConfig) -> Vec<i64> {
    interior_range(window, config.margin)
        .filter(|&x| {
            growth_forward(window, x, config.c1, config.horizon, PathMode::All)
                && growth_backward(window, x, config.c1, config.horizon, PathMode::All)
                && spanning_bound(window, x, config.c2, config.horizon)
        })
        .collect()
}

/// Renewal-plus vertices: positive-edge growth events plus the shared
/// spanning bound.
pub fn detect_renewal_plus(window: &WeightWindow, config: &RenewalConfig) -> Vec<i64> {
    interior_range(window, config.margin)
        .filter(|&x| {
            growth_forward(window, x, config.c1, config.horizon, PathMode::PositiveOnly)
                && growth_backward(window, x, config.c1, config.horizon, PathMode::PositiveOnly)
                && spanning_bound(window, x, config.c2, config.horizon)
        })
        .collect()
}

/// Runs all four detections with a shared margin so the inclusion
/// relations can be checked set-for-set.
pub fn regeneration_report(window: &WeightWindow, config: &RenewalConfig) -> RegenerationReport {
    let mut renewal = Vec::new();
    let mut renewal_plus = Vec::new();
    for x in interior_range(window, config.margin) {
        let record = event_record(window, x, config);
        if record.renewal() {
            renewal.push(x);
        }
        if record.renewal_plus() {
            renewal_plus.push(x);
        }
    }
    RegenerationReport {
        skeleton: detect_skeleton(window, config.margin),
        skeleton_plus: detect_skeleton_plus(window, config.margin),
        renewal,
        renewal_plus,
        truncation_note: TruncationNote { horizon: config.horizon, margin: config.margin },
    }
}

// ---------------------------------------------------------------------
// Cycle extraction.
// ---------------------------------------------------------------------

/// Extracts the regeneration cycles between consecutive detected
/// renewal vertices. Fewer than two vertices yield an empty list. Mark
/// `i` of a cycle starting at `g` is `w[g][g + i]`, which the defining
/// events force to be finite and positive.
pub fn extract_cycles(window: &WeightWindow, renewal: &[i64]) -> Vec<CycleSample> {
    if renewal.len() < 2 {
        return Vec::new();
    }
    let mut cycles = Vec::with_capacity(renewal.len() - 1);
    for (k, pair) in renewal.windows(2).enumerate() {
        let (start, end) = (pair[0], pair[1]);
        let tau = end - start;
        let table = max_weight_table_upto(window, start, end, PathMode::All);
        let marks: Vec<f64> = (1..=tau as usize)
            .map(|i| match table[i] {
                Weight::Finite(v) => v,
                Weight::NegInf => panic!(
                    "cycle mark w[{start}][{}] is -inf inside a renewal gap; \
                     truncation horizon too shallow for this window",
                    start + i as i64
                ),
            })
            .collect();
        let zeta = *marks.last().expect("tau >= 1");
        cycles.push(CycleSample { tau, marks, zeta, is_first: k == 0 });
    }
    cycles
}

// ---------------------------------------------------------------------
// Admissible-interval estimation.
// ---------------------------------------------------------------------

/// Monte Carlo sizing for [`estimate_admissible_interval`].
#[derive(Clone, Copy, Debug, Serialize)]
pub struct AdmissibleParams {
    pub window_len: i64,
    pub replicas: u64,
    pub margin: i64,
}

impl Default for AdmissibleParams {
    fn default() -> AdmissibleParams {
        AdmissibleParams { window_len: 256, replicas: 48, margin: 24 }
    }
}

/// Estimated admissible range `(low, high)` for the growth constants,
/// with the ingredients that produced it.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct AdmissibleInterval {
    /// `gamma_plus * ess_inf(v+)`.
    pub low: f64,
    /// `gamma_plus * V`.
    pub high: f64,
    pub se_low: f64,
    pub se_high: f64,
    /// Reciprocal of the mean skeleton-plus gap.
    pub gamma_plus: f64,
    /// Mean over gaps of the minimal positive edge value spanning the gap.
    pub v_hat: f64,
    /// Exact essential infimum of `v+` from the model.
    pub ess_inf: f64,
    pub n_gaps: u64,
}

impl AdmissibleInterval {
    /// Default interior placement of the constants: `c2` at 30% and
    /// `c1` at 60% of the way through the interval, keeping both away
    /// from the degeneracy edges.
    pub fn default_constants(&self) -> (f64, f64) {
        let span = self.high - self.low;
        (self.low + 0.6 * span, self.low + 0.3 * span)
    }
}

/// Estimates the admissible interval from skeleton-plus gap statistics
/// over independent windows.
///
/// For each consecutive pair of detected skeleton-plus vertices the gap
/// length feeds the rate estimate, and the minimum over spanning pairs
/// of the positive edge value feeds `V`. Edges that happen to be
/// non-positive contribute an independent draw of `v+` in place of the
/// unobserved positive value, which keeps the estimate a lower bound
/// for the gap crossing weight.
pub fn estimate_admissible_interval(
    model: &WeightModel,
    params: &AdmissibleParams,
    master_seed: u64,
) -> Result<AdmissibleInterval> {
    let ess_inf = model.ess_inf_v_plus().ok_or_else(|| {
        Error::EstimationFailure("model has no positive mass; v+ is undefined".to_string())
    })?;

    let mut gaps: Vec<f64> = Vec::new();
    let mut mins: Vec<f64> = Vec::new();
    for replica in 0..params.replicas {
        let mut rng = derive_rng(master_seed, "admissible-window", replica);
        let window = WeightWindow::sample(
            model,
            0,
            params.window_len,
            &mut rng,
            SeedProvenance {
                master: master_seed,
                purpose: "admissible-window".to_string(),
                index: replica,
            },
        )?;
        let splus = detect_skeleton_plus(&window, params.margin);
        let mut aux = derive_rng(master_seed, "admissible-vplus", replica);
        for pair in splus.windows(2) {
            let (t0, t1) = (pair[0], pair[1]);
            gaps.push((t1 - t0) as f64);
            let mut min_v = f64::INFINITY;
            for i in t0..t1 {
                for j in (i + 1)..=t1 {
                    let v = match window.weight(i, j) {
                        Weight::Finite(v) if v > 0.0 => v,
                        _ => model.sample_v_plus(&mut aux),
                    };
                    min_v = min_v.min(v);
                }
            }
            mins.push(min_v);
        }
    }

    if gaps.is_empty() {
        return Err(Error::EstimationFailure(
            "no skeleton-plus points detected in any replica; \
             the positive-edge probability may be too small for this window size"
                .to_string(),
        ));
    }

    let mean_gap = crate::stats::mean(&gaps);
    let se_gap = crate::stats::se_of_mean(&gaps);
    let gamma_plus = 1.0 / mean_gap;
    let se_gamma = se_gap / (mean_gap * mean_gap);
    let v_hat = crate::stats::mean(&mins);
    let se_v = crate::stats::se_of_mean(&mins);

    Ok(AdmissibleInterval {
        low: gamma_plus * ess_inf,
        high: gamma_plus * v_hat,
        se_low: ess_inf * se_gamma,
        // gamma and V share the gap sample; treating them as
        // uncorrelated is a serviceable approximation for a bracket.
        se_high: ((v_hat * se_gamma).powi(2) + (gamma_plus * se_v).powi(2)).sqrt(),
        gamma_plus,
        v_hat,
        ess_inf,
        n_gaps: gaps.len() as u64,
    })
}

// ---------------------------------------------------------------------
// Oracle verification of the renewal path-inclusion property.
// ---------------------------------------------------------------------

/// Outcome of [`verify_renewal_path_inclusion`].
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct InclusionReport {
    /// Endpoint pairs with at least one maximal path inspected.
    pub checked_pairs: u64,
    /// Maximal paths that skipped the renewal vertex.
    pub violations: u64,
}

impl InclusionReport {
    pub fn pass(&self) -> bool {
        self.violations == 0
    }
}

/// Checks, by exhaustive enumeration, that every maximal-weight path
/// between any in-window endpoint pair straddling a detected renewal
/// vertex passes through that vertex. Windows must be small enough for
/// the oracle.
pub fn verify_renewal_path_inclusion(
    window: &WeightWindow,
    renewal: &[i64],
) -> Result<InclusionReport> {
    if window.hi() - window.lo() > 14 {
        return Err(Error::RangeTooLarge { gap: window.hi() - window.lo(), limit: 14 });
    }
    let mut report = InclusionReport::default();
    for &x in renewal {
        for j in window.lo()..x {
            for k in (x + 1)..=window.hi() {
                let (weight, argmax) = brute_force_max_weight(window, j, k, PathMode::All)?;
                if weight.is_neg_inf() {
                    continue;
                }
                report.checked_pairs += 1;
                for path in &argmax {
                    if !path.vertices.contains(&x) {
                        report.violations += 1;
                    }
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{default_arithmetic_model, default_uniform_model};
    use crate::weight::NEG_INF;

    fn sample_window(model: &WeightModel, len: i64, purpose: &str, idx: u64) -> WeightWindow {
        let mut rng = derive_rng(4242, purpose, idx);
        WeightWindow::sample(model, 0, len, &mut rng, SeedProvenance::manual()).unwrap()
    }

    #[test]
    fn full_mass_model_makes_every_interior_vertex_skeleton() {
        let model = WeightModel::uniform(-0.5, 1.5, 0.0).unwrap();
        let window = sample_window(&model, 20, "skeleton-full", 0);
        let skeleton = detect_skeleton(&window, 3);
        assert_eq!(skeleton, (3..=17).collect::<Vec<i64>>());
    }

    #[test]
    fn vertex_with_all_incoming_neg_inf_is_excluded() {
        let mut window = WeightWindow::from_fn(0, 10, |_, _| Weight::finite(1.0));
        for j in 0..5 {
            window.set_weight(j, 5, NEG_INF);
        }
        // Nothing on the left can reach 5, so 5 is out, and so is every
        // vertex left of it (their paths to 5 are all blocked).
        let skeleton = detect_skeleton(&window, 1);
        assert_eq!(skeleton, vec![6, 7, 8, 9]);
    }

    #[test]
    fn skeleton_matches_oracle_reachability_on_small_windows() {
        let model = default_arithmetic_model();
        for idx in 0..25 {
            let window = sample_window(&model, 10, "skeleton-oracle", idx);
            let skeleton = detect_skeleton(&window, 1);
            for x in 1..10i64 {
                let mut connected = true;
                for j in 0..x {
                    let (w, _) = brute_force_max_weight(&window, j, x, PathMode::All).unwrap();
                    connected &= w.is_finite();
                }
                for k in (x + 1)..=10 {
                    let (w, _) = brute_force_max_weight(&window, x, k, PathMode::All).unwrap();
                    connected &= w.is_finite();
                }
                assert_eq!(skeleton.contains(&x), connected, "vertex {x}, window {idx}");
            }
        }
    }

    #[test]
    fn all_positive_edges_make_every_interior_vertex_skeleton_plus() {
        let window = WeightWindow::from_fn(0, 12, |_, _| Weight::finite(2.0));
        assert_eq!(detect_skeleton_plus(&window, 2), (2..=10).collect::<Vec<i64>>());
    }

    #[test]
    fn nonpositive_edges_leave_skeleton_plus_empty() {
        let window = WeightWindow::from_fn(0, 12, |_, _| Weight::finite(-1.0));
        assert!(detect_skeleton_plus(&window, 2).is_empty());
        // while the plain skeleton is everything
        assert_eq!(detect_skeleton(&window, 2).len(), 9);
    }

    #[test]
    fn skeleton_plus_subset_of_skeleton_on_random_windows() {
        for (model, tag) in
            [(default_arithmetic_model(), "sp-arith"), (default_uniform_model(), "sp-unif")]
        {
            for idx in 0..50 {
                let window = sample_window(&model, 40, tag, idx);
                let s = detect_skeleton(&window, 4);
                let sp = detect_skeleton_plus(&window, 4);
                assert!(sp.iter().all(|x| s.contains(x)));
            }
        }
    }

    #[test]
    fn planted_growth_makes_ar_true() {
        // All edges 2.0: w[x][x+i] = 2i, which dominates c1 = 1.
        let window = WeightWindow::from_fn(0, 12, |_, _| Weight::finite(2.0));
        let config = RenewalConfig::new(1.0, 0.5, 4, 5).unwrap();
        let record = check_events(&window, 6, &config).unwrap();
        assert!(record.ar && record.al && record.ar_plus && record.al_plus);
    }

    #[test]
    fn planted_heavy_spanning_edge_breaks_a0() {
        let c2 = 0.5;
        let mut window = WeightWindow::from_fn(0, 12, |_, _| Weight::finite(1.0));
        window.set_weight(5, 7, Weight::finite(3.0 * c2));
        let config = RenewalConfig::new(1.0, c2, 4, 5).unwrap();
        let record = check_events(&window, 6, &config).unwrap();
        assert!(!record.a0, "j = i = 1 spanning edge of weight 3*c2 must violate A0");
    }

    #[test]
    fn margin_violation_is_reported() {
        let window = WeightWindow::from_fn(0, 12, |_, _| Weight::finite(1.0));
        let config = RenewalConfig::new(1.0, 0.5, 4, 5).unwrap();
        assert!(matches!(
            check_events(&window, 2, &config),
            Err(Error::MarginViolation { .. })
        ));
    }

    #[test]
    fn plus_events_imply_plain_events() {
        let model = default_uniform_model();
        let config = RenewalConfig::new(0.3, 0.2, 5, 5).unwrap();
        for idx in 0..40 {
            let window = sample_window(&model, 30, "imply", idx);
            for x in 5..=25 {
                let r = check_events(&window, x, &config).unwrap();
                assert!(!r.ar_plus || r.ar);
                assert!(!r.al_plus || r.al);
                assert_eq!(r.a0, r.a0_plus);
            }
        }
    }

    #[test]
    fn uniformly_heavy_edges_give_empty_renewal_set() {
        // Every spanning edge violates A0 when all edges weigh 10.
        let window = WeightWindow::from_fn(0, 24, |_, _| Weight::finite(10.0));
        let config = RenewalConfig::new(1.0, 1.0, 6, 6).unwrap();
        assert!(detect_renewal(&window, &config).is_empty());
    }

    #[test]
    fn renewal_sets_nest_in_skeleton_sets() {
        let model = default_arithmetic_model();
        let config = RenewalConfig::new(1.05, 0.95, 8, 8).unwrap();
        for idx in 0..30 {
            let window = sample_window(&model, 60, "nest", idx);
            let report = regeneration_report(&window, &config);
            let contains = |set: &[i64], x: i64| set.binary_search(&x).is_ok();
            for &x in &report.renewal_plus {
                assert!(contains(&report.renewal, x));
                assert!(contains(&report.skeleton_plus, x));
            }
            for &x in &report.renewal {
                assert!(contains(&report.skeleton, x));
            }
            for &x in &report.skeleton_plus {
                assert!(contains(&report.skeleton, x));
            }
        }
    }

    #[test]
    fn renewal_grows_as_c1_drops_and_c2_rises() {
        let model = default_arithmetic_model();
        let tight = RenewalConfig::new(1.2, 0.8, 8, 8).unwrap();
        let loose = RenewalConfig::new(1.0, 1.0, 8, 8).unwrap();
        let mut some_strict = false;
        for idx in 0..40 {
            let window = sample_window(&model, 80, "monotone", idx);
            let small = detect_renewal(&window, &tight);
            let large = detect_renewal(&window, &loose);
            assert!(small.iter().all(|x| large.binary_search(x).is_ok()));
            some_strict |= large.len() > small.len();
        }
        assert!(some_strict, "looser constants never enlarged the renewal set");
    }

    #[test]
    fn unit_gap_cycle_is_the_single_edge() {
        let window = WeightWindow::from_fn(0, 20, |j, k| Weight::finite((j + k) as f64 / 10.0));
        let cycles = extract_cycles(&window, &[10, 11]);
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].tau, 1);
        assert!(cycles[0].is_first);
        assert_eq!(Weight::finite(cycles[0].zeta), window.weight(10, 11));
    }

    #[test]
    fn too_few_renewal_vertices_give_empty_cycles() {
        let window = WeightWindow::from_fn(0, 10, |_, _| Weight::finite(1.0));
        assert!(extract_cycles(&window, &[5]).is_empty());
        assert!(extract_cycles(&window, &[]).is_empty());
    }

    #[test]
    fn extracted_cycles_respect_growth_and_ordering() {
        let model = default_arithmetic_model();
        // The growth bound is only certified up to the horizon, so the
        // horizon must dominate typical cycle lengths here.
        let config = RenewalConfig::new(1.05, 0.95, 24, 24).unwrap();
        let mut total = 0;
        for idx in 0..40 {
            let window = sample_window(&model, 200, "cycles", idx);
            let renewal = detect_renewal(&window, &config);
            for cycle in extract_cycles(&window, &renewal) {
                total += 1;
                assert_eq!(cycle.marks.len(), cycle.tau as usize);
                assert_eq!(cycle.zeta, *cycle.marks.last().unwrap());
                for (i, &mark) in cycle.marks.iter().enumerate() {
                    assert!(
                        mark >= config.c1 * (i + 1) as f64,
                        "window {idx}: cycle tau={} mark[{i}]={mark} below {}",
                        cycle.tau,
                        config.c1 * (i + 1) as f64
                    );
                }
                let head_max =
                    cycle.marks[..cycle.marks.len() - 1].iter().copied().fold(0.0, f64::max);
                assert!(head_max <= cycle.zeta, "an interior mark exceeds the terminal mark");
            }
        }
        assert!(total > 50, "sweep produced too few cycles ({total}) to be meaningful");
    }

    #[test]
    fn decomposition_identity_through_renewal_vertices() {
        let model = default_arithmetic_model();
        let config = RenewalConfig::new(1.05, 0.95, 10, 10).unwrap();
        let mut audited = 0;
        for idx in 0..40 {
            let window = sample_window(&model, 100, "decomp", idx);
            let renewal = detect_renewal(&window, &config);
            if renewal.is_empty() {
                continue;
            }
            audited += 1;
            let direct = max_weight_table_upto(&window, 0, 100, PathMode::All)[100];
            let mut sum = max_weight_table_upto(&window, 0, renewal[0], PathMode::All)
                [(renewal[0]) as usize];
            for pair in renewal.windows(2) {
                sum = sum
                    + max_weight_table_upto(&window, pair[0], pair[1], PathMode::All)
                        [(pair[1] - pair[0]) as usize];
            }
            let last = *renewal.last().unwrap();
            sum = sum + max_weight_table_upto(&window, last, 100, PathMode::All)[(100 - last) as usize];
            assert_eq!(direct, sum, "window {idx}");
        }
        assert!(audited > 20, "too few windows had renewal vertices ({audited})");
    }

    #[test]
    fn admissible_interval_on_analytic_control() {
        // No -inf mass, weights uniform(1, 2): every vertex is
        // skeleton-plus, gaps are 1, gamma = 1, V = E(single edge) = 1.5,
        // ess inf = 1.
        let model = WeightModel::uniform(1.0, 2.0, 0.0).unwrap();
        let params = AdmissibleParams { window_len: 64, replicas: 16, margin: 8 };
        let interval = estimate_admissible_interval(&model, &params, 31).unwrap();
        assert_eq!(interval.gamma_plus, 1.0);
        assert_eq!(interval.ess_inf, 1.0);
        assert!((interval.v_hat - 1.5).abs() < 0.02, "V = {}", interval.v_hat);
        assert!((interval.low - 1.0).abs() < 1e-12);
        assert!((interval.high - 1.5).abs() < 0.02);
        assert!(interval.low < interval.high);
    }

    #[test]
    fn admissible_interval_nonempty_for_defaults() {
        for (model, tag) in [(default_arithmetic_model(), "arith"), (default_uniform_model(), "unif")]
        {
            let interval =
                estimate_admissible_interval(&model, &AdmissibleParams::default(), 77).unwrap();
            assert!(interval.low < interval.high, "{tag}: {interval:?}");
            let (c1, c2) = interval.default_constants();
            assert!(interval.low < c2 && c2 < c1 && c1 < interval.high);
        }
    }

    #[test]
    fn estimation_failure_without_positive_mass() {
        let model = WeightModel::arithmetic(&[(-1, 0.9)], 0.1).unwrap();
        let err = estimate_admissible_interval(&model, &AdmissibleParams::default(), 1)
            .unwrap_err();
        assert!(matches!(err, Error::EstimationFailure(_)));
    }

    #[test]
    fn path_inclusion_vacuous_without_renewal_vertices() {
        let window = WeightWindow::from_fn(0, 8, |_, _| Weight::finite(1.0));
        let report = verify_renewal_path_inclusion(&window, &[]).unwrap();
        assert_eq!(report.checked_pairs, 0);
        assert!(report.pass());
    }

    #[test]
    fn path_inclusion_on_planted_renewal_configuration() {
        // Uniform edges of weight 1 except a strong direct chain through
        // the middle vertex: every maximal path must visit it.
        let x = 6i64;
        let window = WeightWindow::from_fn(0, 12, |j, k| {
            if k == x || j == x {
                Weight::finite(2.0 * (k - j) as f64)
            } else {
                Weight::finite(0.1)
            }
        });
        let config = RenewalConfig::new(1.5, 1.5, 6, 6).unwrap();
        let record = check_events(&window, x, &config).unwrap();
        assert!(record.renewal());
        let report = verify_renewal_path_inclusion(&window, &[x]).unwrap();
        assert!(report.checked_pairs > 0);
        assert!(report.pass());
    }
}

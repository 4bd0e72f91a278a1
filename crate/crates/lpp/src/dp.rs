//! Dynamic-programming solvers for maximal path weights and lengths.
//!
//! All recurrences are anchored at the convention `w[j][j] = 0`, which
//! handles the single-edge base case and the empty-path corner
//! uniformly: a destination whose every incoming route passes through a
//! `-inf` edge ends up at `-inf`, the maximum over an empty path set.

use crate::error::{Error, Result};
use crate::weight::{PathLength, Weight};
use crate::window::WeightWindow;

/// A concrete path: strictly increasing vertices, its total weight, and
/// its edge count. The trivial single-vertex path (length 0, weight 0)
/// is admitted only as the `j = k` corner.
#[derive(Clone, Debug, PartialEq)]
pub struct PathRecord {
    pub vertices: Vec<i64>,
    pub weight: Weight,
    pub length: usize,
}

impl PathRecord {
    /// Builds a record from its vertex sequence, recomputing the weight
    /// from the window. Edge weights are summed left to right, matching
    /// every other weight computation in the crate so that equal paths
    /// produce bit-identical totals.
    pub fn from_vertices(window: &WeightWindow, vertices: Vec<i64>) -> PathRecord {
        assert!(!vertices.is_empty());
        assert!(vertices.windows(2).all(|p| p[0] < p[1]), "vertices must strictly increase");
        let mut weight = Weight::ZERO;
        for pair in vertices.windows(2) {
            weight = weight + window.weight(pair[0], pair[1]);
        }
        PathRecord { length: vertices.len() - 1, vertices, weight }
    }
}

/// Which paths a solver admits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathMode {
    /// All finite-weight edges.
    All,
    /// Only edges with strictly positive weight.
    PositiveOnly,
}

impl PathMode {
    #[inline]
    fn admits(self, w: Weight) -> bool {
        match self {
            PathMode::All => w.is_finite(),
            PathMode::PositiveOnly => w.is_positive(),
        }
    }
}

/// Maximal path weights `w[origin][k]` for all `k` in `[origin, hi]`.
///
/// Index `i` of the result holds `w[origin][origin + i]`; entry 0 is the
/// convention value 0.
pub fn max_weight_table(window: &WeightWindow, origin: i64) -> Vec<Weight> {
    max_weight_table_upto(window, origin, window.hi(), PathMode::All)
}

/// Positive-edge variant: paths may only use edges of strictly positive
/// weight; an empty admissible path set yields `-inf`.
pub fn max_plus_weight_table(window: &WeightWindow, origin: i64) -> Vec<Weight> {
    max_weight_table_upto(window, origin, window.hi(), PathMode::PositiveOnly)
}

/// DP restricted to destinations in `[origin, limit]`; paths between
/// vertices of the range never leave it, so the truncated table equals
/// the corresponding prefix of the full one.
pub fn max_weight_table_upto(
    window: &WeightWindow,
    origin: i64,
    limit: i64,
    mode: PathMode,
) -> Vec<Weight> {
    assert!(window.lo() <= origin && origin <= limit && limit <= window.hi());
    let len = (limit - origin) as usize;
    let mut table = vec![Weight::NegInf; len + 1];
    table[0] = Weight::ZERO;
    for i in 1..=len {
        let k = origin + i as i64;
        let mut best = Weight::NegInf;
        for m in 0..i {
            let edge = window.weight(origin + m as i64, k);
            if mode.admits(edge) {
                best = best.max(table[m] + edge);
            }
        }
        table[i] = best;
    }
    table
}

/// Backward tables `w[m][target]` for all `m` in `[limit, target]`,
/// indexed so entry `i` holds the value from `target - i`.
pub fn max_weight_table_into(
    window: &WeightWindow,
    target: i64,
    limit: i64,
    mode: PathMode,
) -> Vec<Weight> {
    assert!(window.lo() <= limit && limit <= target && target <= window.hi());
    let len = (target - limit) as usize;
    let mut table = vec![Weight::NegInf; len + 1];
    table[0] = Weight::ZERO;
    for i in 1..=len {
        let m = target - i as i64;
        let mut best = Weight::NegInf;
        for t in 0..i {
            let edge = window.weight(m, target - t as i64);
            if mode.admits(edge) {
                best = best.max(edge + table[t]);
            }
        }
        table[i] = best;
    }
    table
}

/// Maximal path lengths `L[origin][k]` over finite-weight paths. The
/// origin entry is the bootstrap value 0; `None` encodes `-inf`.
pub fn max_length_table(window: &WeightWindow, origin: i64) -> Vec<PathLength> {
    assert!(window.lo() <= origin && origin <= window.hi());
    let len = (window.hi() - origin) as usize;
    let mut table: Vec<PathLength> = vec![None; len + 1];
    table[0] = Some(0);
    for i in 1..=len {
        let k = origin + i as i64;
        let mut best: PathLength = None;
        for m in 0..i {
            if let Some(l) = table[m] {
                if window.weight(origin + m as i64, k).is_finite() {
                    best = best.max(Some(l + 1));
                }
            }
        }
        table[i] = best;
    }
    table
}

/// One maximal-weight path from `j` to `k`, reconstructed by DP
/// back-pointers. Ties break toward the smallest predecessor vertex, so
/// reconstruction is deterministic.
pub fn reconstruct_max_path(window: &WeightWindow, j: i64, k: i64) -> Result<PathRecord> {
    assert!(window.lo() <= j && j <= k && k <= window.hi());
    if j == k {
        return Ok(PathRecord { vertices: vec![j], weight: Weight::ZERO, length: 0 });
    }
    let table = max_weight_table_upto(window, j, k, PathMode::All);
    let len = (k - j) as usize;
    if table[len].is_neg_inf() {
        return Err(Error::NoPath { j, k });
    }
    let mut vertices = vec![k];
    let mut cur = len;
    while cur > 0 {
        let dest = j + cur as i64;
        let mut pred = None;
        for m in 0..cur {
            let edge = window.weight(j + m as i64, dest);
            if edge.is_finite() && table[m] + edge == table[cur] {
                pred = Some(m);
                break; // smallest predecessor wins
            }
        }
        let m = pred.expect("finite table entry must have a finite predecessor");
        vertices.push(j + m as i64);
        cur = m;
    }
    vertices.reverse();
    Ok(PathRecord { length: vertices.len() - 1, weight: table[len], vertices })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weight::NEG_INF;
    use crate::window::WeightWindow;

    fn two_step_window() -> WeightWindow {
        // 0 -> 1 -> 2 each weight 1; the direct edge (0,2) is -inf.
        WeightWindow::from_fn(0, 2, |j, k| {
            if k - j == 1 {
                Weight::finite(1.0)
            } else {
                NEG_INF
            }
        })
    }

    #[test]
    fn table_anchors_at_zero() {
        let w = two_step_window();
        let table = max_weight_table(&w, 0);
        assert_eq!(table[0], Weight::ZERO);
    }

    #[test]
    fn single_edge_window() {
        let w = WeightWindow::from_fn(0, 1, |_, _| Weight::finite(5.0));
        assert_eq!(max_weight_table(&w, 0), vec![Weight::ZERO, Weight::finite(5.0)]);
    }

    #[test]
    fn only_two_edge_path_is_finite() {
        let w = two_step_window();
        let table = max_weight_table(&w, 0);
        assert_eq!(table[2], Weight::finite(2.0));
    }

    #[test]
    fn plus_table_on_nonpositive_edges_is_empty() {
        let w = WeightWindow::from_fn(0, 4, |_, _| Weight::finite(-1.0));
        let plus = max_plus_weight_table(&w, 0);
        for k in 1..=4 {
            assert_eq!(plus[k], NEG_INF);
        }
        // While the unrestricted table stays finite.
        let all = max_weight_table(&w, 0);
        assert!(all.iter().skip(1).all(|w| w.is_finite()));
    }

    #[test]
    fn uniform_positive_edges_make_tables_agree() {
        let w = WeightWindow::from_fn(0, 5, |_, _| Weight::finite(2.0));
        let all = max_weight_table(&w, 0);
        let plus = max_plus_weight_table(&w, 0);
        for k in 0..=5 {
            assert_eq!(all[k], plus[k]);
            if k > 0 {
                assert_eq!(all[k], Weight::finite(2.0 * k as f64));
            }
        }
    }

    #[test]
    fn length_table_counts_chain_edges() {
        let w = WeightWindow::from_fn(0, 6, |j, k| {
            if k - j == 1 {
                Weight::finite(-0.5)
            } else {
                NEG_INF
            }
        });
        let lengths = max_length_table(&w, 0);
        for k in 0..=6 {
            assert_eq!(lengths[k], Some(k as u64));
        }
    }

    #[test]
    fn length_table_all_neg_inf() {
        let w = WeightWindow::from_fn(0, 3, |_, _| NEG_INF);
        let lengths = max_length_table(&w, 0);
        assert_eq!(lengths[0], Some(0));
        assert_eq!(&lengths[1..], &[None, None, None]);
    }

    #[test]
    fn reconstruct_single_finite_path() {
        let w = two_step_window();
        let path = reconstruct_max_path(&w, 0, 2).unwrap();
        assert_eq!(path.vertices, vec![0, 1, 2]);
        assert_eq!(path.weight, Weight::finite(2.0));
        assert_eq!(path.length, 2);
    }

    #[test]
    fn reconstruct_weight_matches_table() {
        let w = WeightWindow::from_fn(0, 8, |j, k| Weight::finite(((j + k) % 5) as f64 - 1.0));
        let table = max_weight_table(&w, 0);
        for k in 1..=8 {
            let path = reconstruct_max_path(&w, 0, k).unwrap();
            assert_eq!(path.weight, table[k as usize]);
            let recomputed = PathRecord::from_vertices(&w, path.vertices.clone());
            assert_eq!(recomputed.weight, path.weight);
        }
    }

    #[test]
    fn reconstruct_without_path_errors() {
        let w = WeightWindow::from_fn(0, 3, |_, _| NEG_INF);
        assert!(matches!(reconstruct_max_path(&w, 0, 3), Err(Error::NoPath { .. })));
    }

    #[test]
    fn backward_table_matches_forward() {
        let w = WeightWindow::from_fn(0, 9, |j, k| {
            if (j * 7 + k) % 3 == 0 {
                NEG_INF
            } else {
                Weight::finite((k - j) as f64 * 0.5 + (j % 2) as f64)
            }
        });
        let into = max_weight_table_into(&w, 9, 0, PathMode::All);
        for m in 0..=9i64 {
            let fwd = max_weight_table_upto(&w, m, 9, PathMode::All);
            assert_eq!(into[(9 - m) as usize], fwd[(9 - m) as usize], "mismatch from {m}");
        }
    }
}

//! Exhaustive path enumeration over small vertex gaps.
//!
//! The oracle walks every subset of intermediate vertices, so it is an
//! independent check on the DP solvers: no recurrence, no shared code
//! path, identical left-to-right edge summation.

use crate::dp::{PathMode, PathRecord};
use crate::error::{Error, Result};
use crate::weight::{PathLength, Weight};
use crate::window::WeightWindow;

/// Hard refusal limit: `2^(k-j-1)` subsets are enumerated.
pub const MAX_ORACLE_GAP: i64 = 22;

fn check_gap(window: &WeightWindow, j: i64, k: i64) -> Result<()> {
    assert!(window.lo() <= j && j <= k && k <= window.hi());
    if k - j > MAX_ORACLE_GAP {
        return Err(Error::RangeTooLarge { gap: k - j, limit: MAX_ORACLE_GAP });
    }
    Ok(())
}

/// Exact maximum weight over all paths from `j` to `k`, together with
/// every argmax path. An empty set means no admissible path exists (the
/// weight is then `-inf`).
pub fn brute_force_max_weight(
    window: &WeightWindow,
    j: i64,
    k: i64,
    mode: PathMode,
) -> Result<(Weight, Vec<PathRecord>)> {
    check_gap(window, j, k)?;
    if j == k {
        let trivial = PathRecord { vertices: vec![j], weight: Weight::ZERO, length: 0 };
        return Ok((Weight::ZERO, vec![trivial]));
    }
    let interior = (k - j - 1) as u32;
    let mut best = Weight::NegInf;
    let mut argmax: Vec<PathRecord> = Vec::new();
    let mut vertices: Vec<i64> = Vec::with_capacity(interior as usize + 2);
    for mask in 0u32..(1u32 << interior) {
        vertices.clear();
        vertices.push(j);
        for bit in 0..interior {
            if mask & (1 << bit) != 0 {
                vertices.push(j + 1 + bit as i64);
            }
        }
        vertices.push(k);

        let mut weight = Weight::ZERO;
        let mut admissible = true;
        for pair in vertices.windows(2) {
            let edge = window.weight(pair[0], pair[1]);
            let ok = match mode {
                PathMode::All => edge.is_finite(),
                PathMode::PositiveOnly => edge.is_positive(),
            };
            if !ok {
                admissible = false;
                break;
            }
            weight = weight + edge;
        }
        if !admissible {
            continue;
        }
        if weight > best {
            best = weight;
            argmax.clear();
        }
        if weight == best {
            argmax.push(PathRecord {
                vertices: vertices.clone(),
                weight,
                length: vertices.len() - 1,
            });
        }
    }
    Ok((best, argmax))
}

/// Exact maximal path length among finite-weight paths; `None` when no
/// such path exists. The `j = k` corner reports the bootstrap value 0.
pub fn brute_force_max_length(window: &WeightWindow, j: i64, k: i64) -> Result<PathLength> {
    check_gap(window, j, k)?;
    if j == k {
        return Ok(Some(0));
    }
    let interior = (k - j - 1) as u32;
    let mut best: PathLength = None;
    let mut vertices: Vec<i64> = Vec::with_capacity(interior as usize + 2);
    for mask in 0u32..(1u32 << interior) {
        vertices.clear();
        vertices.push(j);
        for bit in 0..interior {
            if mask & (1 << bit) != 0 {
                vertices.push(j + 1 + bit as i64);
            }
        }
        vertices.push(k);
        let finite = vertices.windows(2).all(|p| window.weight(p[0], p[1]).is_finite());
        if finite {
            best = best.max(Some(vertices.len() as u64 - 1));
        }
    }
    Ok(best)
}

//! Sampled edge-weight windows on a finite vertex range.

use std::io::Write as _;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::WeightModel;
use crate::weight::Weight;

/// Materialization cap: windows above this edge count are refused.
pub const MAX_WINDOW_EDGES: usize = 64_000_000;

/// Where a window's randomness came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeedProvenance {
    pub master: u64,
    pub purpose: String,
    pub index: u64,
}

impl SeedProvenance {
    pub fn manual() -> SeedProvenance {
        SeedProvenance { master: 0, purpose: "manual".to_string(), index: 0 }
    }
}

/// All edge weights `v[j][k]` for `lo <= j < k <= hi`, stored as a dense
/// upper-triangular array. The graph is complete on the range, so dense
/// storage costs exactly one slot per edge and gives O(1) access from
/// the DP inner loops.
#[derive(Clone, Debug)]
pub struct WeightWindow {
    lo: i64,
    hi: i64,
    /// Row-major triangle: edges with left endpoint `lo + a` start at
    /// `row_offset(a)`.
    weights: Vec<Weight>,
    provenance: SeedProvenance,
}

/// Number of edges in a window spanning `n = hi - lo` gaps.
pub fn edge_count(n: usize) -> usize {
    n * (n + 1) / 2
}

impl WeightWindow {
    /// Samples every edge of `[lo, hi]` i.i.d. from `model`, in a fixed
    /// order (left endpoint ascending, then right endpoint ascending),
    /// so equal rng states produce identical windows.
    pub fn sample<R: Rng + ?Sized>(
        model: &WeightModel,
        lo: i64,
        hi: i64,
        rng: &mut R,
        provenance: SeedProvenance,
    ) -> Result<WeightWindow> {
        assert!(lo < hi, "window requires lo < hi, got [{lo}, {hi}]");
        let n = (hi - lo) as usize;
        let edges = edge_count(n);
        if edges > MAX_WINDOW_EDGES {
            return Err(Error::WindowTooLarge { lo, hi, edges, cap: MAX_WINDOW_EDGES });
        }
        let mut weights = Vec::with_capacity(edges);
        for a in 0..n {
            for _b in (a + 1)..=n {
                weights.push(model.sample(rng));
            }
        }
        Ok(WeightWindow { lo, hi, weights, provenance })
    }

    /// Builds a window from an explicit edge function (tests and planted
    /// configurations).
    pub fn from_fn(lo: i64, hi: i64, mut edge: impl FnMut(i64, i64) -> Weight) -> WeightWindow {
        assert!(lo < hi);
        let n = (hi - lo) as usize;
        let mut weights = Vec::with_capacity(edge_count(n));
        for a in 0..n {
            for b in (a + 1)..=n {
                weights.push(edge(lo + a as i64, lo + b as i64));
            }
        }
        WeightWindow { lo, hi, weights, provenance: SeedProvenance::manual() }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    /// Number of gaps `hi - lo`; the window has `len() + 1` vertices.
    pub fn len(&self) -> usize {
        (self.hi - self.lo) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn provenance(&self) -> &SeedProvenance {
        &self.provenance
    }

    #[inline]
    fn index(&self, j: i64, k: i64) -> usize {
        debug_assert!(self.lo <= j && j < k && k <= self.hi, "edge ({j}, {k}) out of window");
        let n = self.len();
        let a = (j - self.lo) as usize;
        let b = (k - self.lo) as usize;
        // Row a starts after rows 0..a, which hold (n - i) edges each.
        a * n - a * (a + 1) / 2 + a + (b - a - 1)
    }

    /// Weight of the directed edge `(j, k)`, `lo <= j < k <= hi`.
    #[inline]
    pub fn weight(&self, j: i64, k: i64) -> Weight {
        self.weights[self.index(j, k)]
    }

    /// Overwrites one edge (planted test configurations).
    pub fn set_weight(&mut self, j: i64, k: i64, w: Weight) {
        let idx = self.index(j, k);
        self.weights[idx] = w;
    }

    /// CSV dump with header `j,k,weight`; `-inf` is written literally.
    pub fn write_csv<W: std::io::Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "j,k,weight")?;
        for j in self.lo..self.hi {
            for k in (j + 1)..=self.hi {
                writeln!(out, "{j},{k},{}", self.weight(j, k))?;
            }
        }
        Ok(())
    }
}

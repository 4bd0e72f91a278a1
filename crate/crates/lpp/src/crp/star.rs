//! Size-biased residual ("star") vector of a cycle law.
//!
//! The star vector `(tau*, zeta*)` has law `P(tau* = i, zeta* in dy) =
//! P(tau >= i + 1, u_i in dy) / Q` with `u_0 = 0` and `Q = E tau`.
//! Against an empirical cycle measure this is realized exactly by
//! picking a uniform "slot": a cycle with probability proportional to
//! its length, then a uniform index `i` in `{0, .., tau - 1}`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::regen::CycleSample;

/// Prepared sampler over the non-first cycles of a sample.
pub struct StarSampler<'a> {
    cycles: Vec<&'a CycleSample>,
    /// Prefix sums of tau over `cycles`; the last entry is `Q * n`.
    prefix: Vec<i64>,
}

impl<'a> StarSampler<'a> {
    pub fn new(cycles: &'a [CycleSample]) -> Result<StarSampler<'a>> {
        let kept: Vec<&CycleSample> = cycles.iter().filter(|c| !c.is_first).collect();
        if kept.is_empty() {
            return Err(Error::InsufficientData(
                "star sampling needs at least one non-first cycle".to_string(),
            ));
        }
        let mut prefix = Vec::with_capacity(kept.len() + 1);
        prefix.push(0);
        for c in &kept {
            assert_eq!(c.marks.len(), c.tau as usize, "cycle must carry its full mark vector");
            prefix.push(prefix.last().unwrap() + c.tau);
        }
        Ok(StarSampler { cycles: kept, prefix })
    }

    /// Total slot count, `n * Q_hat`.
    pub fn total_slots(&self) -> i64 {
        *self.prefix.last().unwrap()
    }

    /// One draw of `(tau*, zeta*)`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (i64, f64) {
        let slot = rng.gen_range(0..self.total_slots());
        // First cycle whose prefix exceeds the slot.
        let c = self.prefix.partition_point(|&p| p <= slot) - 1;
        let i = slot - self.prefix[c];
        let zeta_star = if i == 0 { 0.0 } else { self.cycles[c].marks[i as usize - 1] };
        (i, zeta_star)
    }
}

/// One-shot draw of the star vector from a cycle sample.
pub fn sample_star_vector<R: Rng + ?Sized>(
    cycles: &[CycleSample],
    rng: &mut R,
) -> Result<(i64, f64)> {
    Ok(StarSampler::new(cycles)?.sample(rng))
}

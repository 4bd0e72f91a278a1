//! Forward simulation of the cycle process and its renewal functionals.
//!
//! A path draws i.i.d. cycle increments `(tau_k, zeta_k)` (with mark
//! vectors), starting from `(tau_0, zeta_0) = (0, 0)`, and accumulates
//! the partial sums `T_k`, `Z_k` until they pass the query time `n`.
//! The functionals reported at `n`:
//!
//! * `nu_plus = max { k : T_k <= n }`,
//! * `gamma_plus = n - T[nu_plus]` (the elapsed time since the last
//!   completed cycle; the time defect),
//! * `z_plus = Z[nu_plus]`,
//! * the defect mark: the in-progress cycle's mark at depth
//!   `gamma_plus`, with depth 0 mapping to 0.
//!
//! The star variant adds an independent size-biased residual vector to
//! the first increment, which trades the defect conditioning for a
//! clean renewal-at-`n` event.

use rand::Rng;
use serde::Serialize;

use crate::crp::cgf::{AnalyticCgf, CgfModel};
use crate::crp::star::StarSampler;
use crate::error::{Error, Result};
use crate::regen::CycleSample;

/// One atom of a synthetic cycle law: probability plus the full mark
/// vector (`tau` is the vector length, `zeta` its last entry).
#[derive(Clone, Debug, Serialize)]
pub struct CycleAtom {
    pub prob: f64,
    pub marks: Vec<f64>,
}

/// A finite synthetic cycle law with exact moments and an exact star
/// law.
#[derive(Clone, Debug)]
pub struct SyntheticCycleLaw {
    atoms: Vec<CycleAtom>,
    cum: Vec<f64>,
    /// Exact star support `(i, u_i, prob)`.
    star: Vec<(i64, f64, f64)>,
    star_cum: Vec<f64>,
    e_tau: f64,
    e_zeta: f64,
}

impl SyntheticCycleLaw {
    pub fn new(atoms: Vec<CycleAtom>) -> SyntheticCycleLaw {
        assert!(!atoms.is_empty(), "synthetic law needs at least one atom");
        let total: f64 = atoms.iter().map(|a| a.prob).sum();
        assert!((total - 1.0).abs() < 1e-12, "atom probabilities must sum to 1, got {total}");
        for a in &atoms {
            assert!(!a.marks.is_empty(), "every cycle has tau >= 1");
            assert!(a.prob > 0.0);
            let last = *a.marks.last().unwrap();
            for &m in &a.marks {
                assert!(m.is_finite() && m > 0.0, "marks must be positive and finite");
                assert!(m <= last, "the terminal mark dominates the interior marks");
            }
        }
        let mut cum = Vec::with_capacity(atoms.len());
        let mut acc = 0.0;
        for a in &atoms {
            acc += a.prob;
            cum.push(acc);
        }
        let e_tau: f64 = atoms.iter().map(|a| a.prob * a.marks.len() as f64).sum();
        let e_zeta: f64 = atoms.iter().map(|a| a.prob * a.marks.last().unwrap()).sum();

        // Exact star law: atom (p, marks) contributes slot (i, u_i)
        // with weight p for every i in 0..tau; normalize by Q = E tau.
        let mut star: Vec<(i64, f64, f64)> = Vec::new();
        for a in &atoms {
            for i in 0..a.marks.len() {
                let u = if i == 0 { 0.0 } else { a.marks[i - 1] };
                match star.iter_mut().find(|(j, v, _)| *j == i as i64 && *v == u) {
                    Some(entry) => entry.2 += a.prob / e_tau,
                    None => star.push((i as i64, u, a.prob / e_tau)),
                }
            }
        }
        let mut star_cum = Vec::with_capacity(star.len());
        let mut acc = 0.0;
        for &(_, _, p) in &star {
            acc += p;
            star_cum.push(acc);
        }
        SyntheticCycleLaw { atoms, cum, star, star_cum, e_tau, e_zeta }
    }

    pub fn e_tau(&self) -> f64 {
        self.e_tau
    }

    pub fn e_zeta(&self) -> f64 {
        self.e_zeta
    }

    /// `Q = E tau`, the star-law normalizer.
    pub fn q(&self) -> f64 {
        self.e_tau
    }

    pub fn atoms(&self) -> &[CycleAtom] {
        &self.atoms
    }

    /// Exact star support with probabilities.
    pub fn star_atoms(&self) -> &[(i64, f64, f64)] {
        &self.star
    }

    /// Exact joint CGF of `(tau, zeta)`.
    pub fn cgf(&self) -> CgfModel {
        CgfModel::analytic(AnalyticCgf::TablePair {
            atoms: self
                .atoms
                .iter()
                .map(|a| (a.marks.len() as f64, *a.marks.last().unwrap(), a.prob))
                .collect(),
        })
    }
}

/// Where simulated cycles come from.
#[derive(Clone, Copy)]
pub enum CycleLaw<'a> {
    /// Uniform resampling of the non-first cycles of a detected sample.
    Resample(&'a [CycleSample]),
    /// A finite synthetic law.
    Synthetic(&'a SyntheticCycleLaw),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrpVariant {
    Plain,
    Star,
}

/// One simulated path: partial sums up to the first exceedance of `n`,
/// and the renewal functionals at `n`.
#[derive(Clone, Debug, Serialize)]
pub struct CrpPath {
    /// `T_0 = 0, T_1, .., T_K` with `T_K > n >= T_{K-1}`.
    pub t: Vec<i64>,
    /// Matching `Z_k`.
    pub z: Vec<f64>,
    pub n: i64,
    pub nu_plus: usize,
    pub gamma_plus: i64,
    pub z_plus: f64,
    /// Mark of the in-progress cycle at depth `gamma_plus` (0 at depth
    /// 0); `None` when that increment has no mark vector (the
    /// star-extended head).
    pub defect_mark: Option<f64>,
    /// Length of the first increment as built (plain cycle, or cycle
    /// plus star for the star variant).
    pub tau_first: i64,
    /// The residual vector added to the first increment, when any.
    pub star: Option<(i64, f64)>,
}

impl CrpPath {
    /// `max { k >= 0 : T_k < m }` (strict variant of the counting
    /// functional). Valid for `m <= T_K`.
    pub fn nu_strict(&self, m: i64) -> usize {
        assert!(m <= *self.t.last().unwrap(), "m beyond the simulated horizon");
        self.t.partition_point(|&t| t < m) - 1
    }

    pub fn z_strict(&self, m: i64) -> f64 {
        self.z[self.nu_strict(m)]
    }

    pub fn gamma_strict(&self, m: i64) -> i64 {
        m - self.t[self.nu_strict(m)]
    }
}

enum Increment {
    /// Index into the backing cycle collection.
    Cycle(usize),
    /// Star-extended head: no mark vector.
    StarHead { tau: i64, zeta: f64 },
}

/// Prepared simulator: one-time prefix tables, then O(path length)
/// per run with no allocation beyond the path itself.
pub struct CrpSimulator<'a> {
    law: CycleLaw<'a>,
    /// Non-first cycle indices (resample mode).
    pool: Vec<usize>,
    star_sampler: Option<StarSampler<'a>>,
}

impl<'a> CrpSimulator<'a> {
    pub fn new(law: CycleLaw<'a>) -> Result<CrpSimulator<'a>> {
        match law {
            CycleLaw::Resample(cycles) => {
                let pool: Vec<usize> = cycles
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_first)
                    .map(|(i, _)| i)
                    .collect();
                if pool.is_empty() {
                    return Err(Error::InsufficientData(
                        "cycle resampling needs at least one non-first cycle".to_string(),
                    ));
                }
                let star_sampler = Some(StarSampler::new(cycles)?);
                Ok(CrpSimulator { law, pool, star_sampler })
            }
            CycleLaw::Synthetic(_) => Ok(CrpSimulator { law, pool: Vec::new(), star_sampler: None }),
        }
    }

    fn draw_cycle<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        match self.law {
            CycleLaw::Resample(_) => self.pool[rng.gen_range(0..self.pool.len())],
            CycleLaw::Synthetic(law) => {
                let u: f64 = rng.gen();
                law.cum.partition_point(|&c| c <= u).min(law.atoms.len() - 1)
            }
        }
    }

    fn tau_of(&self, idx: usize) -> i64 {
        match self.law {
            CycleLaw::Resample(cycles) => cycles[idx].tau,
            CycleLaw::Synthetic(law) => law.atoms[idx].marks.len() as i64,
        }
    }

    fn zeta_of(&self, idx: usize) -> f64 {
        match self.law {
            CycleLaw::Resample(cycles) => cycles[idx].zeta,
            CycleLaw::Synthetic(law) => *law.atoms[idx].marks.last().unwrap(),
        }
    }

    fn mark_at(&self, idx: usize, depth: i64) -> f64 {
        if depth == 0 {
            return 0.0;
        }
        match self.law {
            CycleLaw::Resample(cycles) => cycles[idx].marks[depth as usize - 1],
            CycleLaw::Synthetic(law) => law.atoms[idx].marks[depth as usize - 1],
        }
    }

    fn draw_star<R: Rng + ?Sized>(&self, rng: &mut R) -> (i64, f64) {
        match self.law {
            CycleLaw::Resample(_) => {
                self.star_sampler.as_ref().expect("built in new()").sample(rng)
            }
            CycleLaw::Synthetic(law) => {
                let u: f64 = rng.gen();
                let k = law.star_cum.partition_point(|&c| c <= u).min(law.star.len() - 1);
                (law.star[k].0, law.star[k].1)
            }
        }
    }

    /// Simulates one path and evaluates the functionals at `n`.
    pub fn run<R: Rng + ?Sized>(&self, n: i64, variant: CrpVariant, rng: &mut R) -> CrpPath {
        assert!(n >= 1);
        let mut t = vec![0i64];
        let mut z = vec![0.0f64];
        let mut last_increment;
        let mut star = None;

        // First increment.
        let head = self.draw_cycle(rng);
        let (tau1, zeta1) = match variant {
            CrpVariant::Plain => {
                last_increment = Increment::Cycle(head);
                (self.tau_of(head), self.zeta_of(head))
            }
            CrpVariant::Star => {
                let (ts, zs) = self.draw_star(rng);
                star = Some((ts, zs));
                let tau = self.tau_of(head) + ts;
                let zeta = self.zeta_of(head) + zs;
                last_increment = Increment::StarHead { tau, zeta };
                (tau, zeta)
            }
        };
        let tau_first = tau1;
        t.push(tau1);
        z.push(zeta1);

        while *t.last().unwrap() <= n {
            let idx = self.draw_cycle(rng);
            t.push(t.last().unwrap() + self.tau_of(idx));
            z.push(z.last().unwrap() + self.zeta_of(idx));
            last_increment = Increment::Cycle(idx);
        }

        let k = t.len() - 1; // first index with T_k > n
        let nu_plus = k - 1;
        let gamma_plus = n - t[nu_plus];
        let z_plus = z[nu_plus];
        let defect_mark = if gamma_plus == 0 {
            Some(0.0)
        } else {
            match last_increment {
                Increment::Cycle(idx) => Some(self.mark_at(idx, gamma_plus)),
                Increment::StarHead { .. } => None,
            }
        };

        CrpPath { t, z, n, nu_plus, gamma_plus, z_plus, defect_mark, tau_first, star }
    }
}

/// One-shot convenience over [`CrpSimulator`].
pub fn simulate_crp<R: Rng + ?Sized>(
    law: CycleLaw<'_>,
    n: i64,
    variant: CrpVariant,
    rng: &mut R,
) -> Result<CrpPath> {
    Ok(CrpSimulator::new(law)?.run(n, variant, rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::derive_rng;

    pub(crate) fn bench_law() -> SyntheticCycleLaw {
        SyntheticCycleLaw::new(vec![
            CycleAtom { prob: 0.5, marks: vec![1.0] },
            CycleAtom { prob: 0.3, marks: vec![1.0, 3.0] },
            CycleAtom { prob: 0.2, marks: vec![1.0, 2.0, 4.0] },
        ])
    }

    #[test]
    fn synthetic_law_exact_quantities() {
        let law = bench_law();
        assert!((law.e_tau() - 1.7).abs() < 1e-15);
        assert!((law.e_zeta() - 2.2).abs() < 1e-15);
        // Star support: (0,0) w.p. 1/Q; (1,1) from atoms 2 and 3; (2,2)
        // from atom 3.
        let mut star = law.star_atoms().to_vec();
        star.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(star.len(), 3);
        assert_eq!(star[0].0, 0);
        assert!((star[0].2 - 1.0 / 1.7).abs() < 1e-15);
        assert_eq!((star[1].0, star[1].1), (1, 1.0));
        assert!((star[1].2 - 0.5 / 1.7).abs() < 1e-15);
        assert_eq!((star[2].0, star[2].1), (2, 2.0));
        assert!((star[2].2 - 0.2 / 1.7).abs() < 1e-15);
    }

    #[test]
    fn unit_cycles_have_no_defect() {
        let law = SyntheticCycleLaw::new(vec![CycleAtom { prob: 1.0, marks: vec![2.5] }]);
        let sim = CrpSimulator::new(CycleLaw::Synthetic(&law)).unwrap();
        let mut rng = derive_rng(7, "sim-unit", 0);
        let path = sim.run(20, CrpVariant::Plain, &mut rng);
        assert_eq!(path.nu_plus, 20);
        assert_eq!(path.gamma_plus, 0);
        assert_eq!(path.defect_mark, Some(0.0));
        assert!((path.z_plus - 20.0 * 2.5).abs() < 1e-12);
    }

    #[test]
    fn defect_bracketing_and_strict_relations_hold_on_every_path() {
        let law = bench_law();
        let sim = CrpSimulator::new(CycleLaw::Synthetic(&law)).unwrap();
        for rep in 0..2000u64 {
            let mut rng = derive_rng(8, "sim-bracket", rep);
            let n = 1 + (rep % 37) as i64;
            let path = sim.run(n, CrpVariant::Plain, &mut rng);
            // T_{nu+} <= n < T_{nu+ + 1}
            assert!(path.t[path.nu_plus] <= n && n < path.t[path.nu_plus + 1]);
            assert_eq!(path.gamma_plus, n - path.t[path.nu_plus]);
            // nu_plus(n) = nu(n+1) and Z_plus(n) = Z(n+1) on the integer
            // lattice of cycle lengths.
            assert_eq!(path.nu_plus, path.nu_strict(n + 1));
            assert_eq!(path.z_plus, path.z_strict(n + 1));
            // gamma_plus(n) = gamma(n+1) - 1, and the strict defect is
            // always >= 1.
            assert_eq!(path.gamma_plus, path.gamma_strict(n + 1) - 1);
            assert!(path.gamma_strict(n) >= 1);
        }
    }

    #[test]
    fn star_head_hides_defect_mark_only_when_cut_inside_it() {
        let law = bench_law();
        let sim = CrpSimulator::new(CycleLaw::Synthetic(&law)).unwrap();
        let mut none_seen = 0;
        for rep in 0..500u64 {
            let mut rng = derive_rng(9, "sim-star-head", rep);
            let path = sim.run(3, CrpVariant::Star, &mut rng);
            assert!(path.star.is_some());
            if path.defect_mark.is_none() {
                // The cut fell inside the star-extended first increment.
                assert_eq!(path.nu_plus, 0);
                none_seen += 1;
            }
        }
        assert!(none_seen > 0, "with n = 3 some cuts must land in the head");
    }

    #[test]
    fn resampled_cycles_drive_the_simulator() {
        let cycles = crate::crp::plain_cycles(&[(1, 1.0), (2, 3.0), (214, 250.0)]);
        let sim = CrpSimulator::new(CycleLaw::Resample(&cycles)).unwrap();
        let mut rng = derive_rng(10, "sim-resample", 0);
        let path = sim.run(50, CrpVariant::Plain, &mut rng);
        assert!(path.t[path.nu_plus] <= 50 && 50 < path.t[path.nu_plus + 1]);
    }

    #[test]
    fn renewal_identity_two_sided_monte_carlo() {
        // Left side: P(Z+(n) + defect mark in [x, x+1), tau_1 <= n).
        // Right side: Q P(Z*+(n) in [x, x+1), gamma*+(n) = 0).
        let law = bench_law();
        let sim = CrpSimulator::new(CycleLaw::Synthetic(&law)).unwrap();
        let n = 12i64;
        let q = law.q();
        let paths = 200_000u64;
        let probes = [14.0, 15.0, 16.0, 17.0];
        let mut lhs = [0u64; 4];
        let mut rhs = [0u64; 4];
        for rep in 0..paths {
            let mut rng = derive_rng(11, "sim-identity-plain", rep);
            let path = sim.run(n, CrpVariant::Plain, &mut rng);
            if path.tau_first <= n {
                let value = path.z_plus + path.defect_mark.expect("plain paths carry marks");
                for (slot, &x) in probes.iter().enumerate() {
                    if value >= x && value < x + 1.0 {
                        lhs[slot] += 1;
                    }
                }
            }
            let mut rng = derive_rng(11, "sim-identity-star", rep);
            let path = sim.run(n, CrpVariant::Star, &mut rng);
            if path.gamma_plus == 0 {
                for (slot, &x) in probes.iter().enumerate() {
                    if path.z_plus >= x && path.z_plus < x + 1.0 {
                        rhs[slot] += 1;
                    }
                }
            }
        }
        for slot in 0..probes.len() {
            let p_l = lhs[slot] as f64 / paths as f64;
            let p_r = rhs[slot] as f64 / paths as f64;
            let se_l = (p_l * (1.0 - p_l) / paths as f64).sqrt();
            let se_r = (p_r * (1.0 - p_r) / paths as f64).sqrt();
            let se = (se_l * se_l + q * q * se_r * se_r).sqrt();
            assert!(
                (p_l - q * p_r).abs() <= 4.0 * se,
                "x = {}: lhs {p_l} vs Q rhs {}, 4se = {}",
                probes[slot],
                q * p_r,
                4.0 * se
            );
        }
    }
}

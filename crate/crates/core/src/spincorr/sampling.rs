use rayon::prelude::*;

use super::models::{JointProbability, Outcome, PairModel};
use crate::error::{domain, Error, Result};
use crate::numkit::{sample_isotropic_direction, RandomStream, UnitVector3};

fn draw(rng: &mut RandomStream, p_up: f64) -> Outcome {
    if rng.uniform() < p_up {
        Outcome::Up
    } else {
        Outcome::Down
    }
}

/// Draws one correlated pair by the sequential "as-if" construction.
///
/// QM: the source spin σ is isotropic; A's result follows ½(1 + r_A σ·a); particle 2 is then
/// treated as pointing along −r_A a for B's draw. Semiclassical: B's draw uses the opposite
/// source spin −σ directly, independent of A's result.
pub fn sample_pair(
    model: &PairModel,
    a: &UnitVector3,
    b: &UnitVector3,
    rng: &mut RandomStream,
) -> Result<(Outcome, Outcome)> {
    let sigma = sample_isotropic_direction(rng);
    let ra = draw(rng, 0.5 * (1.0 + sigma.dot(a)));
    let rb = match model {
        PairModel::QmSinglet => {
            let partner = -ra.value() * a.dot(b);
            draw(rng, 0.5 * (1.0 + partner))
        }
        PairModel::Semiclassical => draw(rng, 0.5 * (1.0 - sigma.dot(b))),
        PairModel::Triplet { .. } => return Err(Error::UnsupportedModel("triplet pairs cannot be sampled".into())),
    };
    Ok((ra, rb))
}

/// Outcome tallies; merging shards is plain addition.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PairCounts {
    pub pp: u64,
    pub pm: u64,
    pub mp: u64,
    pub mm: u64,
}

impl PairCounts {
    pub fn record(&mut self, ra: Outcome, rb: Outcome) {
        match (ra, rb) {
            (Outcome::Up, Outcome::Up) => self.pp += 1,
            (Outcome::Up, Outcome::Down) => self.pm += 1,
            (Outcome::Down, Outcome::Up) => self.mp += 1,
            (Outcome::Down, Outcome::Down) => self.mm += 1,
        }
    }

    pub fn merge(self, o: PairCounts) -> PairCounts {
        PairCounts { pp: self.pp + o.pp, pm: self.pm + o.pm, mp: self.mp + o.mp, mm: self.mm + o.mm }
    }

    pub fn total(&self) -> u64 {
        self.pp + self.pm + self.mp + self.mm
    }

    pub fn frequencies(&self) -> JointProbability {
        let n = self.total().max(1) as f64;
        JointProbability {
            pp: self.pp as f64 / n,
            pm: self.pm as f64 / n,
            mp: self.mp as f64 / n,
            mm: self.mm as f64 / n,
        }
    }

    /// Analyzer coincidence estimate with (+,+) and (−,−) as like-channel hits.
    pub fn expectation(&self) -> Result<f64> {
        coincidence_expectation(self.pp, self.pm, self.mp, self.mm)
    }
}

/// Samples `n` pairs split over `shards` independent streams of `seed`.
///
/// Shard `i` uses stream `i`; its size depends only on `(n, shards, i)`, so the merged
/// result is fixed by `(seed, shards)` regardless of scheduling.
pub fn sample_counts(
    model: &PairModel,
    a: &UnitVector3,
    b: &UnitVector3,
    n: u64,
    seed: u64,
    shards: u64,
) -> Result<PairCounts> {
    if shards == 0 {
        return Err(domain("shard count must be positive"));
    }
    (0..shards)
        .into_par_iter()
        .map(|i| {
            let size = n / shards + u64::from(i < n % shards);
            let mut rng = RandomStream::new(seed, i);
            let mut c = PairCounts::default();
            for _ in 0..size {
                let (ra, rb) = sample_pair(model, a, b, &mut rng)?;
                c.record(ra, rb);
            }
            Ok(c)
        })
        .try_reduce(PairCounts::default, |x, y| Ok(x.merge(y)))
}

/// (N_LL + N_RR − N_LR − N_RL) / N from coincidence counts.
pub fn coincidence_expectation(n_ll: u64, n_lr: u64, n_rl: u64, n_rr: u64) -> Result<f64> {
    let total = n_ll + n_lr + n_rl + n_rr;
    if total == 0 {
        return Err(domain("coincidence counts are all zero"));
    }
    Ok((n_ll as f64 + n_rr as f64 - n_lr as f64 - n_rl as f64) / total as f64)
}

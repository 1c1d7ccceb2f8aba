use rand_distr::{Binomial, Distribution, Gamma, Geometric, Poisson};
use rayon::prelude::*;

use super::Statistics;
use crate::error::{domain, precondition, Error, Result};
use crate::numkit::{binomial_pmf, log_binomial, poisson_pmf, RandomStream};

const TAIL_TOL: f64 = 1e-14;
const MAX_TERMS: usize = 10_000_000;

/// Probabilities over a nonnegative integer count, either quanta in g packets or
/// detector counts.
#[derive(Debug, Clone, PartialEq)]
pub struct CountDistribution {
    pub statistics: Statistics,
    pub g: u64,
    pub mean: f64,
    pub probs: Vec<f64>,
}

impl CountDistribution {
    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }
}

fn check_g(g: u64) -> Result<()> {
    if g == 0 {
        return Err(precondition("packet count g must be positive"));
    }
    Ok(())
}

/// Negative binomial C(g+m−1, m)(1+x)^{−g}(1+1/x)^{−m}, truncated once the geometric
/// bound on the remaining tail drops below 1e-14.
fn negative_binomial(g: u64, x: f64) -> Result<Vec<f64>> {
    if x == 0.0 {
        return Ok(vec![1.0]);
    }
    let gf = g as f64;
    let (lg, lx) = (gf * x.ln_1p(), (1.0 / x).ln_1p());
    let mut probs = Vec::new();
    let mut m = 0u64;
    loop {
        let lc = log_binomial(gf + m as f64 - 1.0, m as i64)?;
        let w = (lc - lg - m as f64 * lx).exp();
        probs.push(w);
        // Successive ratio (g+m)/(m+1)·x/(1+x) decreases toward x/(1+x) past the mode.
        let ratio = (gf + m as f64) / (m as f64 + 1.0) * x / (1.0 + x);
        if ratio < 1.0 && w * ratio / (1.0 - ratio) < TAIL_TOL {
            return Ok(probs);
        }
        m += 1;
        if probs.len() >= MAX_TERMS {
            return Err(Error::Numerical(format!("negative binomial with g = {g}, x = {x} needs too many terms")));
        }
    }
}

/// C(g, m)(1−x)^g(1/x − 1)^{−m} for m = 0..g.
fn fermi_binomial(g: u64, x: f64) -> Result<Vec<f64>> {
    if x == 0.0 {
        return Ok(vec![1.0]);
    }
    let gf = g as f64;
    let (lg, lx) = (gf * (-x).ln_1p(), (1.0 / x - 1.0).ln());
    (0..=g).map(|m| Ok((log_binomial(gf, m as i64)? + lg - m as f64 * lx).exp())).collect()
}

fn poisson(mean: f64) -> Result<Vec<f64>> {
    let mut probs = Vec::new();
    let mut k = 0u64;
    loop {
        let p = poisson_pmf(k, mean);
        probs.push(p);
        let ratio = mean / (k as f64 + 1.0);
        if ratio < 1.0 && p * ratio / (1.0 - ratio) < TAIL_TOL {
            return Ok(probs);
        }
        k += 1;
        if probs.len() >= MAX_TERMS {
            return Err(Error::Numerical(format!("Poisson with mean {mean} needs too many terms")));
        }
    }
}

/// Law w(n; g) of the number of quanta carried by g independent packets with mean
/// occupancy s̄ each.
pub fn packet_quanta_dist(statistics: Statistics, g: u64, s_bar: f64) -> Result<CountDistribution> {
    check_g(g)?;
    if !(s_bar >= 0.0) || !s_bar.is_finite() {
        return Err(precondition(format!("mean occupancy must be finite and nonnegative, got {s_bar}")));
    }
    let probs = match statistics {
        Statistics::Bose => negative_binomial(g, s_bar)?,
        Statistics::Fermi => {
            if s_bar >= 1.0 {
                return Err(domain(format!("Fermi packets hold at most one quantum, got s̄ = {s_bar}")));
            }
            fermi_binomial(g, s_bar)?
        }
        Statistics::Boltzmann => poisson(g as f64 * s_bar)?,
    };
    Ok(CountDistribution { statistics, g, mean: g as f64 * s_bar, probs })
}

/// Law W(m; g) of detector counts when each quantum of g packets is registered with
/// probability η, in closed form.
pub fn count_distribution(statistics: Statistics, g: u64, s_bar: f64, eta: f64) -> Result<CountDistribution> {
    check_g(g)?;
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(precondition(format!("detection efficiency must lie in (0, 1], got {eta}")));
    }
    if !(s_bar >= 0.0) || !s_bar.is_finite() {
        return Err(precondition(format!("mean occupancy must be finite and nonnegative, got {s_bar}")));
    }
    let x = eta * s_bar;
    let probs = match statistics {
        Statistics::Bose => negative_binomial(g, x)?,
        Statistics::Fermi => {
            if x >= 1.0 {
                return Err(domain(format!("Fermi counts need η·s̄ < 1, got {x}")));
            }
            fermi_binomial(g, x)?
        }
        Statistics::Boltzmann => poisson(g as f64 * x)?,
    };
    Ok(CountDistribution { statistics, g, mean: g as f64 * x, probs })
}

/// W(m) = Σ_n w(n)·b(m; n, η), the explicit binomial thinning of a quanta law.
pub fn thin(w: &[f64], eta: f64) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(precondition(format!("detection efficiency must lie in [0, 1], got {eta}")));
    }
    Ok((0..w.len() as u64)
        .map(|m| (m..w.len() as u64).map(|n| w[n as usize] * binomial_pmf(m, n, eta)).sum())
        .collect())
}

/// m̄(1 + m̄/g) for Bose, m̄(1 − m̄/g) for Fermi, m̄ for Boltzmann.
pub fn count_variance(statistics: Statistics, g: u64, m_bar: f64) -> Result<f64> {
    check_g(g)?;
    if !(m_bar >= 0.0) || !m_bar.is_finite() {
        return Err(precondition(format!("mean count must be finite and nonnegative, got {m_bar}")));
    }
    let gf = g as f64;
    match statistics {
        Statistics::Bose => Ok(m_bar * (1.0 + m_bar / gf)),
        Statistics::Fermi => {
            if m_bar > gf {
                return Err(domain(format!("Fermi mean count {m_bar} exceeds packet count {g}")));
            }
            Ok(m_bar * (1.0 - m_bar / gf))
        }
        Statistics::Boltzmann => Ok(m_bar),
    }
}

/// Mean, variance and fourth central moment of a count law.
pub fn count_moments(probs: &[f64]) -> (f64, f64, f64) {
    let mean: f64 = probs.iter().enumerate().map(|(m, p)| m as f64 * p).sum();
    let central = |k: i32| -> f64 { probs.iter().enumerate().map(|(m, p)| (m as f64 - mean).powi(k) * p).sum() };
    (mean, central(2), central(4))
}

/// Σ|a − b|/2 with the shorter vector padded by zeros.
pub fn total_variation(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().max(b.len());
    0.5 * (0..n).map(|i| (a.get(i).copied().unwrap_or(0.0) - b.get(i).copied().unwrap_or(0.0)).abs()).sum::<f64>()
}

fn binomial_row(n: u64, eta: f64) -> Vec<f64> {
    (0..=n).map(|m| binomial_pmf(m, n, eta)).collect()
}

fn convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// max_m |(b(·; n1, η) ∗ b(·; n2, η))(m) − b(m; n1+n2, η)|.
pub fn binomial_fold_check(n1: u64, n2: u64, eta: f64) -> Result<f64> {
    unequal_fold_residual(n1, n2, eta, eta)
}

/// Same comparison with different efficiencies, against the pooled efficiency
/// (n1η1 + n2η2)/(n1 + n2). The residual is second order in η1 − η2.
pub fn unequal_fold_residual(n1: u64, n2: u64, eta1: f64, eta2: f64) -> Result<f64> {
    for eta in [eta1, eta2] {
        if !(0.0..=1.0).contains(&eta) {
            return Err(precondition(format!("detection efficiency must lie in [0, 1], got {eta}")));
        }
    }
    let total = n1 + n2;
    let pooled = if total == 0 { eta1 } else { (n1 as f64 * eta1 + n2 as f64 * eta2) / total as f64 };
    let folded = convolve(&binomial_row(n1, eta1), &binomial_row(n2, eta2));
    Ok(folded.iter().zip(binomial_row(total, pooled)).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

/// Monte Carlo estimate of the count variance with its 3σ band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountSample {
    pub trials: u64,
    pub mean: f64,
    pub variance: f64,
    pub expected_variance: f64,
    /// Three standard deviations of the sample variance under the exact law.
    pub band: f64,
}

impl CountSample {
    pub fn within_band(&self) -> bool {
        (self.variance - self.expected_variance).abs() <= self.band
    }
}

fn draw_quanta(statistics: Statistics, g: u64, s_bar: f64, rng: &mut RandomStream) -> u64 {
    match statistics {
        Statistics::Bose if s_bar == 0.0 => 0,
        Statistics::Bose if g <= 1000 => {
            let geo = Geometric::new(1.0 / (1.0 + s_bar)).expect("valid probability");
            (0..g).map(|_| geo.sample(rng)).sum()
        }
        Statistics::Bose => {
            // Gamma-mixed Poisson is the same negative binomial.
            let lambda = Gamma::new(g as f64, s_bar).expect("positive shape and scale").sample(rng);
            if lambda <= 0.0 {
                0
            } else {
                Poisson::new(lambda).expect("positive rate").sample(rng) as u64
            }
        }
        Statistics::Fermi => Binomial::new(g, s_bar).expect("valid probability").sample(rng),
        Statistics::Boltzmann => {
            let lambda = g as f64 * s_bar;
            if lambda <= 0.0 {
                0
            } else {
                Poisson::new(lambda).expect("positive rate").sample(rng) as u64
            }
        }
    }
}

/// Draws n quanta from w(n; g), thins them with efficiency η, and estimates the
/// variance of the resulting counts. Shard `i` uses stream `i`.
pub fn sample_count_variance(
    statistics: Statistics,
    g: u64,
    s_bar: f64,
    eta: f64,
    trials: u64,
    seed: u64,
    shards: u64,
) -> Result<CountSample> {
    if shards == 0 || trials < 2 {
        return Err(precondition("need at least one shard and two trials"));
    }
    let exact = count_distribution(statistics, g, s_bar, eta)?;
    packet_quanta_dist(statistics, g, s_bar)?;
    let (sum, sum_sq) = (0..shards)
        .into_par_iter()
        .map(|i| {
            let size = trials / shards + u64::from(i < trials % shards);
            let mut rng = RandomStream::new(seed, i);
            let (mut s, mut s2) = (0u128, 0u128);
            for _ in 0..size {
                let n = draw_quanta(statistics, g, s_bar, &mut rng);
                let m = if eta >= 1.0 { n } else { Binomial::new(n, eta).expect("valid probability").sample(&mut rng) };
                s += m as u128;
                s2 += (m as u128) * (m as u128);
            }
            (s, s2)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let nf = trials as f64;
    let mean = sum as f64 / nf;
    let variance = (sum_sq as f64 - nf * mean * mean) / (nf - 1.0);
    let expected_variance = count_variance(statistics, g, exact.mean)?;
    let (_, var, mu4) = count_moments(&exact.probs);
    let sd = ((mu4 - var * var * (nf - 3.0) / (nf - 1.0)) / nf).max(0.0).sqrt();
    Ok(CountSample { trials, mean, variance, expected_variance, band: 3.0 * sd })
}

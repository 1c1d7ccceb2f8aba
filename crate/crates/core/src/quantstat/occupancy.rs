use super::Statistics;
use crate::constants::K_B;
use crate::error::{domain, precondition, Error, Result};

const TAIL_TOL: f64 = 1e-13;
const MAX_TERMS: usize = 50_000_000;

/// Equilibrium probabilities q(s) that a single packet carries s quanta.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupancyDistribution {
    pub statistics: Statistics,
    /// Boltzmann factor exp(−(ε − μ)/kT).
    pub x: f64,
    pub s_bar: f64,
    pub q: Vec<f64>,
}

impl OccupancyDistribution {
    pub fn total(&self) -> f64 {
        self.q.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.q.iter().enumerate().map(|(s, q)| s as f64 * q).sum()
    }
}

/// Occupancy law of one phase-space cell at energy ε.
///
/// Bose: geometric (1 − x)x^s, truncated once the remaining probability and mean both
/// fall below 1e-13. Fermi: s ∈ {0, 1}. Boltzmann: Poisson with mean x, the
/// distinguishable-quanta limit.
pub fn occupancy(statistics: Statistics, epsilon: f64, mu: f64, temperature: f64) -> Result<OccupancyDistribution> {
    if !(temperature >= 0.0) || !epsilon.is_finite() || !mu.is_finite() {
        return Err(precondition(format!("need finite ε, μ and T ≥ 0, got {epsilon}, {mu}, {temperature}")));
    }
    if statistics == Statistics::Bose && epsilon <= mu {
        return Err(domain(format!("Bose occupancy diverges for ε ≤ μ ({epsilon} ≤ {mu})")));
    }
    let y = (epsilon - mu) / (K_B * temperature);
    // T = 0 gives y = ±∞; exp handles both.
    let x = if y.is_nan() { 1.0 } else { (-y).exp() };
    let (s_bar, q) = match statistics {
        Statistics::Fermi => {
            let q1 = 1.0 / (1.0 + 1.0 / x);
            (q1, vec![1.0 - q1, q1])
        }
        Statistics::Bose => {
            if x == 0.0 {
                (0.0, vec![1.0])
            } else {
                let s_bar = 1.0 / y.exp_m1();
                (s_bar, geometric(x)?)
            }
        }
        Statistics::Boltzmann => (x, poisson(x)?),
    };
    Ok(OccupancyDistribution { statistics, x, s_bar, q })
}

fn geometric(x: f64) -> Result<Vec<f64>> {
    let mut q = Vec::new();
    let mut term = 1.0 - x;
    let mut s = 0usize;
    loop {
        q.push(term);
        s += 1;
        // Tail beyond s: x^s and mean tail x^s(s + x/(1 − x)).
        let xs = x.powi(s as i32);
        if xs < TAIL_TOL && xs * (s as f64 + x / (1.0 - x)) < TAIL_TOL {
            return Ok(q);
        }
        if s >= MAX_TERMS {
            return Err(Error::Numerical(format!(
                "geometric occupancy with x = {x} needs more than {MAX_TERMS} terms"
            )));
        }
        term *= x;
    }
}

fn poisson(mean: f64) -> Result<Vec<f64>> {
    let mut q = Vec::new();
    let mut term = (-mean).exp();
    let mut cum = 0.0;
    let mut s = 0usize;
    loop {
        q.push(term);
        cum += term;
        s += 1;
        if s as f64 > mean && 1.0 - cum < TAIL_TOL && term * mean < TAIL_TOL {
            return Ok(q);
        }
        if s >= MAX_TERMS {
            return Err(Error::Numerical(format!(
                "Poisson occupancy with mean {mean} needs more than {MAX_TERMS} terms"
            )));
        }
        term *= mean / s as f64;
    }
}

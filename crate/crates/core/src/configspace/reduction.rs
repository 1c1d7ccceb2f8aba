use num_complex::Complex64;

use crate::error::{domain, precondition, Result};
use crate::numkit::RandomStream;

/// Coefficients c(n) of an expansion over an orthonormal set, Σ|c|² = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionCoefficients {
    c: Vec<Complex64>,
}

impl ExpansionCoefficients {
    pub fn new(c: Vec<Complex64>) -> Result<Self> {
        if c.is_empty() {
            return Err(precondition("expansion needs at least one coefficient"));
        }
        let n: f64 = c.iter().map(|z| z.norm_sqr()).sum();
        if (n - 1.0).abs() > 1e-10 {
            return Err(precondition(format!("Σ|c|² = {n}, expected 1")));
        }
        Ok(Self { c })
    }

    pub fn normalized(c: Vec<Complex64>) -> Result<Self> {
        let n: f64 = c.iter().map(|z| z.norm_sqr()).sum();
        if !(n > 0.0) || !n.is_finite() {
            return Err(precondition("cannot normalize a zero expansion"));
        }
        let s = 1.0 / n.sqrt();
        Self::new(c.into_iter().map(|z| z * s).collect())
    }

    pub fn unit(len: usize, n: usize) -> Result<Self> {
        if n >= len {
            return Err(precondition(format!("index {n} outside expansion of length {len}")));
        }
        let mut c = vec![Complex64::new(0.0, 0.0); len];
        c[n] = Complex64::new(1.0, 0.0);
        Self::new(c)
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.c
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.c.iter().map(|z| z.norm_sqr()).collect()
    }

    /// Index carrying the entire weight, if the expansion is a single eigenfunction.
    pub fn eigen_index(&self) -> Option<usize> {
        let nonzero: Vec<usize> = (0..self.c.len()).filter(|&i| self.c[i].norm_sqr() > 1e-24).collect();
        (nonzero.len() == 1).then(|| nonzero[0])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ReductionMode {
    /// Keep the listed indices and renormalize.
    Window(Vec<usize>),
    /// Draw one index with probability |c(n)|² and collapse onto it.
    SinglePick,
}

pub fn reduce_expansion(
    c: &ExpansionCoefficients,
    mode: &ReductionMode,
    rng: Option<&mut RandomStream>,
) -> Result<ExpansionCoefficients> {
    let len = c.c.len();
    match mode {
        ReductionMode::Window(idx) => {
            if idx.is_empty() {
                return Err(precondition("reduction window is empty"));
            }
            if let Some(&bad) = idx.iter().find(|&&i| i >= len) {
                return Err(precondition(format!("window index {bad} outside expansion of length {len}")));
            }
            let mut keep = vec![false; len];
            idx.iter().for_each(|&i| keep[i] = true);
            let out: Vec<Complex64> =
                c.c.iter().zip(&keep).map(|(z, &k)| if k { *z } else { Complex64::new(0.0, 0.0) }).collect();
            let mass: f64 = out.iter().map(|z| z.norm_sqr()).sum();
            if mass <= 1e-12 {
                return Err(domain(format!("reduction window carries no weight (mass {mass:e})")));
            }
            ExpansionCoefficients::normalized(out)
        }
        ReductionMode::SinglePick => {
            let rng = rng.ok_or_else(|| precondition("single-pick reduction needs a random stream"))?;
            let probs = c.probabilities();
            let total: f64 = probs.iter().sum();
            let target = rng.uniform() * total;
            let mut acc = 0.0;
            let mut pick = len - 1;
            for (i, p) in probs.iter().enumerate() {
                acc += p;
                if target < acc {
                    pick = i;
                    break;
                }
            }
            while probs[pick] == 0.0 {
                pick -= 1;
            }
            let mut out = vec![Complex64::new(0.0, 0.0); len];
            out[pick] = c.c[pick] / c.c[pick].norm();
            ExpansionCoefficients::new(out)
        }
    }
}

use crate::error::{domain, Result};

/// ln Γ(x) for x > 0: recurrence up to x ≥ 10, then the Stirling series.
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0, "ln_gamma requires x > 0, got {x}");
    let mut x = x;
    let mut shift = 0.0;
    while x < 10.0 {
        shift -= x.ln();
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv
        * (1.0 / 12.0
            + inv2
                * (-1.0 / 360.0
                    + inv2
                        * (1.0 / 1260.0
                            + inv2
                                * (-1.0 / 1680.0
                                    + inv2 * (1.0 / 1188.0 + inv2 * (-691.0 / 360360.0 + inv2 / 156.0))))));
    shift + (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + series
}

pub fn ln_factorial(n: u64) -> f64 {
    if n < 2 {
        0.0
    } else {
        ln_gamma(n as f64 + 1.0)
    }
}

/// ln C(n, k). `n` may be real for generalized coefficients; integer `n` must be ≥ k.
pub fn log_binomial(n: f64, k: i64) -> Result<f64> {
    if k < 0 {
        return Err(domain(format!("binomial lower index must be nonnegative, got {k}")));
    }
    if !n.is_finite() || n < 0.0 {
        return Err(domain(format!("binomial upper index must be finite and nonnegative, got {n}")));
    }
    let kf = k as f64;
    if n.fract() == 0.0 {
        if n < kf {
            return Err(domain(format!("binomial requires n ≥ k, got n = {n}, k = {k}")));
        }
        if n <= 120.0 {
            return Ok(exact_ln_binomial(n as u64, k as u64));
        }
        return Ok(ln_gamma(n + 1.0) - ln_gamma(kf + 1.0) - ln_gamma(n - kf + 1.0));
    }
    if n - kf + 1.0 <= 0.0 {
        return Err(domain(format!("generalized binomial C({n}, {k}) has a nonpositive gamma argument")));
    }
    Ok(ln_gamma(n + 1.0) - ln_gamma(kf + 1.0) - ln_gamma(n - kf + 1.0))
}

// Multiplicative formula in u128; every intermediate is itself a binomial, so it is exact
// while C(n, k) fits, which holds for n ≤ 120.
fn exact_ln_binomial(n: u64, k: u64) -> f64 {
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * (n - i) as u128 / (i + 1) as u128;
    }
    (c as f64).ln()
}

/// Binomial probability b(k; n, p), computed in log space.
pub fn binomial_pmf(k: u64, n: u64, p: f64) -> f64 {
    if k > n {
        return 0.0;
    }
    if p <= 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if p >= 1.0 {
        return if k == n { 1.0 } else { 0.0 };
    }
    let lc = log_binomial(n as f64, k as i64).expect("k ≤ n");
    (lc + k as f64 * p.ln() + (n - k) as f64 * (-p).ln_1p()).exp()
}

/// Poisson probability of `k` events at mean `mean`.
pub fn poisson_pmf(k: u64, mean: f64) -> f64 {
    if mean <= 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    (k as f64 * mean.ln() - mean - ln_factorial(k)).exp()
}

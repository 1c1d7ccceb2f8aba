use crate::error::{domain, precondition, Result};
use crate::numkit::{binomial_pmf, SampledFunction1D};

/// ∫_region |φ|² dx with each grid point owning the cell [x_i − dx/2, x_i + dx/2].
pub fn region_weight(phi: &SampledFunction1D, lo: f64, hi: f64) -> Result<f64> {
    let g = phi.grid();
    let half = 0.5 * g.spacing();
    let (gl, gh) = (g.start() - half, g.end() + half);
    let slack = 1e-12 * (gh - gl);
    if !(lo <= hi) || lo < gl - slack || hi > gh + slack {
        return Err(domain(format!("region [{lo}, {hi}] is not inside the grid extent [{gl}, {gh}]")));
    }
    Ok(phi
        .values()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let x = g.x(i);
            let overlap = (hi.min(x + half) - lo.max(x - half)).max(0.0);
            v.norm_sqr() * overlap
        })
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionProbabilities {
    /// Probability that one packet acts inside the region during the window.
    pub eta: f64,
    /// Probability that exactly m of the N condensed quanta act there.
    pub p2: f64,
}

/// η = κ∫_region|φ|² and the binomial probability C(N,m)η^m(1−η)^{N−m}.
pub fn region_action_probabilities(
    phi: &SampledFunction1D,
    region: (f64, f64),
    n: u64,
    m: u64,
    kappa: f64,
) -> Result<RegionProbabilities> {
    if m > n {
        return Err(precondition(format!("count m = {m} exceeds quanta N = {n}")));
    }
    if !(kappa > 0.0 && kappa <= 1.0) {
        return Err(precondition(format!("efficiency κ must lie in (0, 1], got {kappa}")));
    }
    phi.check_normalized("packet")?;
    let eta = (kappa * region_weight(phi, region.0, region.1)?).clamp(0.0, 1.0);
    Ok(RegionProbabilities { eta, p2: binomial_pmf(m, n, eta) })
}

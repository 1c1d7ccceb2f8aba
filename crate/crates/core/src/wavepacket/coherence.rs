use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::numkit::{dft, inverse_dft, wavenumbers, SampledFunction1D};

#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceProfile {
    /// |γ(b)| at each requested shift.
    pub magnitudes: Vec<f64>,
    /// First shift where |γ| falls to e^{−1/2}, interpolated between grid shifts.
    pub coherence_length: Option<f64>,
}

fn gamma_at_index(vals: &[Complex64], s: usize, dx: f64) -> Complex64 {
    vals.iter().zip(&vals[s..]).map(|(a, b)| a.conj() * b).sum::<Complex64>() * dx
}

/// Autocorrelation |γ(b)| with γ(b) = ∫ψ*(y)ψ(y + b)dy, and the coherence length.
///
/// Shifts are grid-index sums; shifts between nodes interpolate |γ| linearly.
pub fn coherence_profile(psi: &SampledFunction1D, shifts: &[f64]) -> Result<CoherenceProfile> {
    psi.check_normalized("coherence input")?;
    let g = psi.grid();
    let dx = g.spacing();
    let vals = psi.values();
    let max_shift = (g.points() - 1) as f64 * dx;
    let at = |s: usize| gamma_at_index(vals, s, dx).norm();
    let mut magnitudes = Vec::with_capacity(shifts.len());
    for &b in shifts {
        if !b.is_finite() || b.abs() > max_shift {
            return Err(domain(format!("shift {b} exceeds the grid extent {max_shift}")));
        }
        // |γ(−b)| = |γ(b)*| = |γ(b)|.
        let s = b.abs() / dx;
        let lo = s.floor() as usize;
        let f = s - lo as f64;
        let v = if f < 1e-12 || lo + 1 >= g.points() { at(lo) } else { at(lo) * (1.0 - f) + at(lo + 1) * f };
        magnitudes.push(v);
    }
    let threshold = (-0.5f64).exp();
    let mut coherence_length = None;
    let mut prev = at(0);
    for s in 1..g.points() {
        let cur = at(s);
        if cur <= threshold {
            let frac = (prev - threshold) / (prev - cur);
            coherence_length = Some((s as f64 - 1.0 + frac) * dx);
            break;
        }
        prev = cur;
    }
    Ok(CoherenceProfile { magnitudes, coherence_length })
}

/// Fringe visibility (I_max − I_min)/(I_max + I_min).
pub fn visibility(i_max: f64, i_min: f64) -> Result<f64> {
    if !(i_max >= i_min && i_min >= 0.0 && i_max > 0.0) {
        return Err(domain(format!("intensities must satisfy I_max ≥ I_min ≥ 0, got {i_max}, {i_min}")));
    }
    Ok((i_max - i_min) / (i_max + i_min))
}

/// Free evolution over time `t` under dispersion ω(k), applied in the discrete Fourier basis.
pub fn free_evolve(psi: &SampledFunction1D, omega: impl Fn(f64) -> f64, t: f64) -> Result<SampledFunction1D> {
    let mut spec = dft(psi.values())?;
    for (v, k) in spec.iter_mut().zip(wavenumbers(psi.grid())) {
        *v *= Complex64::from_polar(1.0, -omega(k) * t);
    }
    SampledFunction1D::new(*psi.grid(), inverse_dft(&spec)?)
}

/// Nonrelativistic free evolution, ω = (ħ/m)k²/2 with `hbar_over_m` in grid units.
pub fn schrodinger_evolve(psi: &SampledFunction1D, hbar_over_m: f64, t: f64) -> Result<SampledFunction1D> {
    free_evolve(psi, |k| 0.5 * hbar_over_m * k * k, t)
}

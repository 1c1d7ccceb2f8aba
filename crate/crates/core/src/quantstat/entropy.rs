use rayon::prelude::*;

use super::modes::{CavitySpec, ModeBin};
use super::occupancy::occupancy;
use super::Statistics;
use crate::constants::K_B;
use crate::error::{precondition, Error, Result};

/// Entropy and its derivatives at fixed bins.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyReport {
    pub entropy: f64,
    pub energy: f64,
    pub number: f64,
    /// (∂S/∂E) at fixed N.
    pub ds_de: f64,
    /// (∂S/∂N) at fixed E.
    pub ds_dn: f64,
    /// False when some factorial argument g·q(s) carrying probability above 1e-9 is below 10.
    pub stirling_valid: bool,
}

#[derive(Debug, Clone, Copy)]
struct Totals {
    entropy: f64,
    energy: f64,
    number: f64,
    stirling_valid: bool,
}

/// S = k Σ_bins [ln g! − Σ_s ln (g q_s)!] with Stirling's ln x! ≈ x ln x − x, plus
/// total energy and quanta count. Boltzmann cavities use the dilute form
/// k·N(1 − ln s̄) per bin.
pub fn entropy(cavity: &CavitySpec, bins: &[ModeBin]) -> Result<(f64, f64, f64, bool)> {
    let t = totals(cavity, bins)?;
    Ok((t.entropy, t.energy, t.number, t.stirling_valid))
}

fn totals(cavity: &CavitySpec, bins: &[ModeBin]) -> Result<Totals> {
    if bins.is_empty() {
        return Err(precondition("no mode bins given"));
    }
    // Ordered collect then a sequential sum keeps the result independent of scheduling.
    let parts = bins
        .par_iter()
        .map(|bin| {
            let occ = occupancy(cavity.statistics, bin.energy, cavity.mu, cavity.temperature)?;
            let g = bin.modes;
            if cavity.statistics == Statistics::Boltzmann {
                // Dilute limit: ln(g^N/N!) with N = g·s̄.
                let n = g * occ.s_bar;
                let s = if n > 0.0 { n * (1.0 - occ.s_bar.ln()) } else { 0.0 };
                return Ok(Totals { entropy: K_B * s, energy: bin.energy * n, number: n, stirling_valid: n >= 10.0 });
            }
            let mut valid = true;
            // g ln g − g − Σ (P ln P − P) with P = g q; since Σ P = g this is −g Σ q ln q.
            let mut s = 0.0;
            for &q in &occ.q {
                if q > 0.0 {
                    s -= g * q * q.ln();
                }
                if q > 1e-9 && g * q < 10.0 {
                    valid = false;
                }
            }
            Ok(Totals {
                entropy: K_B * s,
                energy: bin.energy * g * occ.s_bar,
                number: g * occ.s_bar,
                stirling_valid: valid,
            })
        })
        .collect::<Result<Vec<Totals>>>()?;
    Ok(parts.into_iter().fold(Totals { entropy: 0.0, energy: 0.0, number: 0.0, stirling_valid: true }, |a, b| Totals {
        entropy: a.entropy + b.entropy,
        energy: a.energy + b.energy,
        number: a.number + b.number,
        stirling_valid: a.stirling_valid && b.stirling_valid,
    }))
}

/// Entropy plus (∂S/∂E)_N and (∂S/∂N)_E from centered differences in T and μ.
///
/// The 2×2 Jacobian ∂(E, N)/∂(T, μ) is inverted to change variables. Photon
/// cavities are probed at μ = ±δμ as well, which needs every bin energy above δμ.
pub fn entropy_and_derivatives(cavity: &CavitySpec, bins: &[ModeBin]) -> Result<EntropyReport> {
    let base = totals(cavity, bins)?;
    let t = cavity.temperature;
    let dt = 1e-4 * t;
    let dmu = 1e-4 * cavity.kt();
    let at = |tt: f64, mu: f64| totals(&cavity.with_state(tt, mu), bins);
    let (tp, tm) = (at(t + dt, cavity.mu)?, at(t - dt, cavity.mu)?);
    let (mp, mm) = (at(t, cavity.mu + dmu)?, at(t, cavity.mu - dmu)?);
    let d = |p: f64, m: f64, h: f64| (p - m) / (2.0 * h);
    let (s_t, e_t, n_t) = (d(tp.entropy, tm.entropy, dt), d(tp.energy, tm.energy, dt), d(tp.number, tm.number, dt));
    let (s_m, e_m, n_m) = (d(mp.entropy, mm.entropy, dmu), d(mp.energy, mm.energy, dmu), d(mp.number, mm.number, dmu));
    let det = e_t * n_m - e_m * n_t;
    if !det.is_finite() || det.abs() <= f64::EPSILON * (e_t * n_m).abs().max((e_m * n_t).abs()) {
        return Err(Error::Numerical("energy/number Jacobian is singular".into()));
    }
    // [dT, dμ] = J⁻¹ [dE, dN]; dS = [S_T, S_μ]·J⁻¹·[dE, dN].
    let ds_de = (s_t * n_m - s_m * n_t) / det;
    let ds_dn = (s_m * e_t - s_t * e_m) / det;
    Ok(EntropyReport {
        entropy: base.entropy,
        energy: base.energy,
        number: base.number,
        ds_de,
        ds_dn,
        stirling_valid: base.stirling_valid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::H;

    fn photon_bins(volume: f64, t: f64, n: usize) -> Vec<ModeBin> {
        let kt = K_B * t;
        let (lo, hi) = (0.05 * kt / H, 20.0 * kt / H);
        let w = (hi - lo) / n as f64;
        (0..n).map(|i| ModeBin::from_frequency(volume, lo + (i as f64 + 0.5) * w, w).unwrap()).collect()
    }

    #[test]
    fn photon_gas_temperature() {
        let t = 1000.0;
        let bins = photon_bins(1.0, t, 200);
        let r = entropy_and_derivatives(&CavitySpec::photon(1.0, t).unwrap(), &bins).unwrap();
        assert!(r.stirling_valid);
        assert!((r.ds_de * t - 1.0).abs() < 0.01, "{}", r.ds_de * t);
        assert!(r.ds_dn.abs() < 1e-3 * K_B, "{}", r.ds_dn / K_B);
    }

    #[test]
    fn massive_gas_chemical_potential() {
        let t = 300.0;
        let kt = K_B * t;
        for (st, mu) in [(Statistics::Bose, -2.0 * kt), (Statistics::Fermi, 3.0 * kt), (Statistics::Boltzmann, -kt)] {
            let cav = CavitySpec::new(1e-6, t, mu, 0.0, st).unwrap();
            let bins: Vec<ModeBin> = (0..300)
                .map(|i| {
                    let e = (i as f64 + 0.5) * 0.05 * kt;
                    ModeBin::new(1e-6, e / crate::constants::C, 0.05 * kt / crate::constants::C, 0.0).unwrap()
                })
                .collect();
            let r = entropy_and_derivatives(&cav, &bins).unwrap();
            assert!((r.ds_de * t - 1.0).abs() < 1e-4, "{st:?} {}", r.ds_de * t);
            assert!((r.ds_dn * t / mu + 1.0).abs() < 1e-4, "{st:?} {}", r.ds_dn * t / mu);
        }
    }

    #[test]
    fn extensive_in_volume() {
        let t = 1000.0;
        let s1 = entropy(&CavitySpec::photon(1.0, t).unwrap(), &photon_bins(1.0, t, 200)).unwrap().0;
        let s2 = entropy(&CavitySpec::photon(2.0, t).unwrap(), &photon_bins(2.0, t, 200)).unwrap().0;
        assert!((s2 / s1 - 2.0).abs() < 2e-3);
    }

    #[test]
    fn tiny_volume_flags_stirling() {
        let t = 1000.0;
        let (_, _, _, valid) = entropy(&CavitySpec::photon(1e-18, t).unwrap(), &photon_bins(1e-18, t, 200)).unwrap();
        assert!(!valid);
    }
}

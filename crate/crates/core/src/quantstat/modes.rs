use std::f64::consts::PI;

use super::Statistics;
use crate::constants::{C, H, K_B};
use crate::error::{domain, precondition, Result};

/// Number of phase-space cells 4πVp²dp/h³ in volume V and momentum shell dp.
pub fn mode_count(volume: f64, p: f64, dp: f64) -> Result<f64> {
    for (name, v) in [("volume", volume), ("momentum", p), ("momentum width", dp)] {
        if !(v >= 0.0) || !v.is_finite() {
            return Err(precondition(format!("{name} must be nonnegative, got {v}")));
        }
    }
    Ok(4.0 * PI * volume * p * p * dp / (H * H * H))
}

/// Photon form 4πVν²dν/c³ (one polarization).
pub fn photon_mode_count(volume: f64, nu: f64, dnu: f64) -> Result<f64> {
    for (name, v) in [("volume", volume), ("frequency", nu), ("frequency width", dnu)] {
        if !(v >= 0.0) || !v.is_finite() {
            return Err(precondition(format!("{name} must be nonnegative, got {v}")));
        }
    }
    Ok(4.0 * PI * volume * nu * nu * dnu / (C * C * C))
}

/// Momentum shell [p − dp/2, p + dp/2] with its energy and mode count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeBin {
    pub p: f64,
    pub dp: f64,
    pub energy: f64,
    pub d_energy: f64,
    pub modes: f64,
}

impl ModeBin {
    pub fn new(volume: f64, p: f64, dp: f64, mass: f64) -> Result<Self> {
        if !(p > 0.0 && dp > 0.0) {
            return Err(precondition(format!("bin needs positive p and dp, got {p}, {dp}")));
        }
        let mc2 = mass * C * C;
        let energy = (p * p * C * C + mc2 * mc2).sqrt();
        let d_energy = p * C * C / energy * dp;
        Ok(Self { p, dp, energy, d_energy, modes: mode_count(volume, p, dp)? })
    }

    /// Photon bin centered on ν with width dν.
    pub fn from_frequency(volume: f64, nu: f64, dnu: f64) -> Result<Self> {
        Self::new(volume, H * nu / C, H * dnu / C, 0.0)
    }

    pub fn frequency(&self) -> f64 {
        self.energy / H
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavitySpec {
    pub volume: f64,
    pub temperature: f64,
    pub mu: f64,
    pub mass: f64,
    pub statistics: Statistics,
    pub photon: bool,
}

impl CavitySpec {
    pub fn new(volume: f64, temperature: f64, mu: f64, mass: f64, statistics: Statistics) -> Result<Self> {
        if !(volume > 0.0) || !(temperature > 0.0) {
            return Err(precondition(format!("volume and temperature must be positive, got {volume}, {temperature}")));
        }
        if !(mass >= 0.0) || !mu.is_finite() {
            return Err(precondition("mass must be nonnegative and μ finite"));
        }
        Ok(Self { volume, temperature, mu, mass, statistics, photon: false })
    }

    /// Black-body cavity: Bose statistics with m = 0 and μ = 0.
    pub fn photon(volume: f64, temperature: f64) -> Result<Self> {
        let mut c = Self::new(volume, temperature, 0.0, 0.0, Statistics::Bose)?;
        c.photon = true;
        Ok(c)
    }

    pub fn kt(&self) -> f64 {
        K_B * self.temperature
    }

    /// Same species at a different (T, μ); photon cavities keep their flag so that
    /// derivative probes in μ stay well defined.
    pub(crate) fn with_state(&self, temperature: f64, mu: f64) -> Self {
        Self { temperature, mu, ..*self }
    }

    /// Mean number of quanta N dp in one bin.
    pub fn occupancy_number(&self, bin: &ModeBin) -> Result<f64> {
        let y = (bin.energy - self.mu) / self.kt();
        let per_mode = match self.statistics {
            Statistics::Bose => {
                if !(y > 0.0) {
                    return Err(domain(format!(
                        "Bose occupancy diverges: ε − μ = {} J at p = {}",
                        bin.energy - self.mu,
                        bin.p
                    )));
                }
                1.0 / y.exp_m1()
            }
            Statistics::Fermi => 1.0 / (y.exp() + 1.0),
            Statistics::Boltzmann => (-y).exp(),
        };
        Ok(bin.modes * per_mode)
    }
}

/// N(p,T)dp = g_p/{exp[(ε − μ)/kT] ± 1} for each bin.
pub fn spectral_distribution(cavity: &CavitySpec, bins: &[ModeBin]) -> Result<Vec<f64>> {
    bins.iter().map(|b| cavity.occupancy_number(b)).collect()
}

/// Planck energy density per unit frequency, both polarizations: (8πhν³/c³)/(e^{hν/kT} − 1).
pub fn planck_energy_density(temperature: f64, nu: f64) -> f64 {
    8.0 * PI * H * nu.powi(3) / (C * C * C) / (H * nu / (K_B * temperature)).exp_m1()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::RADIATION_A;

    #[test]
    fn photon_mode_count_example() {
        let g = photon_mode_count(1.0, 5e14, 1e10).unwrap();
        assert!((g / 1.1654e15 - 1.0).abs() < 1e-3);
        let b = ModeBin::from_frequency(1.0, 5e14, 1e10).unwrap();
        assert!((b.modes / g - 1.0).abs() < 1e-12);
        assert!((photon_mode_count(2.0, 5e14, 1e10).unwrap() / g - 2.0).abs() < 1e-12);
        assert!((mode_count(1.0, 1e-27, 1e-33).unwrap() / mode_count(1.0, 1e-27, 2e-33).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn planck_bins_match_energy_density() {
        let t = 5800.0;
        let cav = CavitySpec::photon(1.0, t).unwrap();
        for nu in [1e13, 3e14, 1e15] {
            let dnu = 1e6;
            let bin = ModeBin::from_frequency(1.0, nu, dnu).unwrap();
            let n = cav.occupancy_number(&bin).unwrap();
            let u = 2.0 * H * nu * n / dnu;
            assert!((u / planck_energy_density(t, nu) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn wien_peak() {
        let t = 5800.0;
        let kt = K_B * t;
        let xs: Vec<f64> = (1..20000).map(|i| i as f64 * 5e-4).collect();
        let peak = xs
            .iter()
            .copied()
            .max_by(|a, b| planck_energy_density(t, a * kt / H).total_cmp(&planck_energy_density(t, b * kt / H)))
            .unwrap();
        // Oracle: bisection on 3(1 − e^{−x}) = x.
        let (mut lo, mut hi) = (1.0f64, 5.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if 3.0 * (1.0 - (-mid).exp()) - mid > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((peak - lo).abs() < 1e-3);
        assert!((lo - 2.8214393721).abs() < 1e-9);
    }

    #[test]
    fn high_energy_limit_is_boltzmann() {
        let kt = K_B * 300.0;
        let p = 30.0 * kt / C;
        let bin = ModeBin::new(1.0, p, p * 1e-6, 0.0).unwrap();
        let boltz =
            CavitySpec::new(1.0, 300.0, 0.0, 0.0, Statistics::Boltzmann).unwrap().occupancy_number(&bin).unwrap();
        for st in [Statistics::Bose, Statistics::Fermi] {
            let n = CavitySpec::new(1.0, 300.0, 0.0, 0.0, st).unwrap().occupancy_number(&bin).unwrap();
            assert!((n / boltz - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn fermi_step_at_low_temperature() {
        let mu = 1e-19;
        let cav = CavitySpec::new(1.0, 1e-3, mu, 0.0, Statistics::Fermi).unwrap();
        let below = ModeBin::new(1.0, 0.9 * mu / C, 1e-40, 0.0).unwrap();
        let above = ModeBin::new(1.0, 1.1 * mu / C, 1e-40, 0.0).unwrap();
        assert!((cav.occupancy_number(&below).unwrap() / below.modes - 1.0).abs() < 1e-12);
        assert!(cav.occupancy_number(&above).unwrap() / above.modes < 1e-12);
    }

    #[test]
    fn bose_pole_rejected() {
        let cav = CavitySpec::new(1.0, 300.0, 1e-20, 0.0, Statistics::Bose).unwrap();
        let bin = ModeBin::new(1.0, 0.5e-20 / C, 1e-30, 0.0).unwrap();
        assert!(spectral_distribution(&cav, &[bin]).is_err());
    }

    #[test]
    fn stefan_boltzmann_total() {
        let t = 1000.0;
        let kt = K_B * t;
        let (lo, hi) = ((1e-3 * kt / H).ln(), (60.0 * kt / H).ln());
        let n = 500;
        let step = (hi - lo) / n as f64;
        let cav = CavitySpec::photon(2.0, t).unwrap();
        let bins: Vec<ModeBin> = (0..n)
            .map(|i| {
                let (a, b) = ((lo + i as f64 * step).exp(), (lo + (i + 1) as f64 * step).exp());
                ModeBin::from_frequency(2.0, 0.5 * (a + b), b - a).unwrap()
            })
            .collect();
        let counts = spectral_distribution(&cav, &bins).unwrap();
        let energy: f64 = bins.iter().zip(&counts).map(|(b, n)| 2.0 * b.energy * n).sum();
        assert!((energy / (RADIATION_A * t.powi(4) * 2.0) - 1.0).abs() < 0.005);
    }
}

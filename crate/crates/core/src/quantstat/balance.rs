use std::f64::consts::PI;

use crate::constants::{C, H, K_B};
use crate::error::{precondition, Result};

use super::modes::{CavitySpec, ModeBin};

/// Parameters of the two-species exchange balance. Species 1 moves n quanta from
/// energy e1i to e1f while species 2 moves n2 quanta from e2i to e2f.
///
/// Occupancy laws are p(s, ε) = a1·exp(−(b1ε − c1)s) and q(s, ε) = a2·exp(−(b2ε − c2)s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BalanceParams {
    pub a1: f64,
    pub a2: f64,
    pub b1: f64,
    pub b2: f64,
    pub c1: f64,
    pub c2: f64,
    pub n: u32,
    pub n2: u32,
    pub e1i: f64,
    pub e1f: f64,
    pub e2i: f64,
    pub e2f: f64,
    pub s: f64,
    pub r: f64,
    pub s2: f64,
    pub r2: f64,
}

impl BalanceParams {
    fn ln_p(&self, s: f64, e: f64) -> f64 {
        self.a1.ln() - (self.b1 * e - self.c1) * s
    }

    fn ln_q(&self, s: f64, e: f64) -> f64 {
        self.a2.ln() - (self.b2 * e - self.c2) * s
    }

    /// Energy bookkeeping n(e1i − e1f) − n2(e2f − e2i).
    pub fn energy_mismatch(&self) -> f64 {
        self.n as f64 * (self.e1i - self.e1f) - self.n2 as f64 * (self.e2f - self.e2i)
    }
}

/// |LHS − RHS| / LHS of the forward/backward rate balance
/// p(s,e1i)p(r,e1f)q(s2,e2i)q(r2,e2f) = p(s−n,e1i)p(r+n,e1f)q(s2−n2,e2i)q(r2+n2,e2f).
///
/// Both sides are formed in log space.
pub fn balance_residual(params: &BalanceParams) -> Result<f64> {
    let p = params;
    if !(p.a1 > 0.0 && p.a2 > 0.0) {
        return Err(precondition("occupancy prefactors must be positive"));
    }
    let scale =
        [p.n as f64 * p.e1i.abs(), p.n as f64 * p.e1f.abs(), p.n2 as f64 * p.e2i.abs(), p.n2 as f64 * p.e2f.abs()]
            .into_iter()
            .fold(f64::MIN_POSITIVE, f64::max);
    if p.energy_mismatch().abs() > 1e-12 * scale {
        return Err(precondition(format!(
            "energy is not conserved: n(e1i − e1f) − n′(e2f − e2i) = {}",
            p.energy_mismatch()
        )));
    }
    let (n, n2) = (p.n as f64, p.n2 as f64);
    let lhs = p.ln_p(p.s, p.e1i) + p.ln_p(p.r, p.e1f) + p.ln_q(p.s2, p.e2i) + p.ln_q(p.r2, p.e2f);
    let rhs = p.ln_p(p.s - n, p.e1i) + p.ln_p(p.r + n, p.e1f) + p.ln_q(p.s2 - n2, p.e2i) + p.ln_q(p.r2 + n2, p.e2f);
    Ok((rhs - lhs).exp_m1().abs())
}

/// Both sides of the two-level absorption/emission balance at frequency ν.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EinsteinBalance {
    /// ρ, the radiation energy per volume and frequency from the Planck bin.
    pub rho: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub a_over_b: f64,
    pub relative_residual: f64,
}

/// Checks e^{−ε_n/kT}ρ = e^{−ε_m/kT}(ρ + A/B) with ε_n = 0, ε_m = hν and
/// A/B = 4πhν³/c³, taking ρ = hν·N dν/(V dν) from a one-polarization photon bin.
pub fn einstein_balance(temperature: f64, nu: f64, volume: f64, dnu: f64) -> Result<EinsteinBalance> {
    if !(temperature > 0.0 && nu > 0.0 && volume > 0.0 && dnu > 0.0) {
        return Err(precondition("T, ν, V and dν must be positive"));
    }
    let cavity = CavitySpec::photon(volume, temperature)?;
    let bin = ModeBin::from_frequency(volume, nu, dnu)?;
    let count = cavity.occupancy_number(&bin)?;
    let rho = H * nu * count / (volume * dnu);
    let a_over_b = 4.0 * PI * H * nu.powi(3) / (C * C * C);
    let x = H * nu / (K_B * temperature);
    let lhs = rho;
    let rhs = (-x).exp() * (rho + a_over_b);
    // Log space keeps the comparison meaningful when ρ underflows; ln(e^x − 1) = x + ln(1 − e^{−x}).
    let ln_lhs = (H * nu * bin.modes / (volume * dnu)).ln() - (x + (-(-x).exp()).ln_1p());
    let ln_ab = a_over_b.ln();
    let ln_rhs = -x + ln_ab + (ln_lhs - ln_ab).exp().ln_1p();
    Ok(EinsteinBalance { rho, lhs, rhs, a_over_b, relative_residual: (ln_rhs - ln_lhs).exp_m1().abs() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_params(rng: &mut ChaCha8Rng) -> BalanceParams {
        let n = rng.random_range(0..6u32);
        let n2 = rng.random_range(1..6u32);
        let e1i = rng.random_range(0.1..5.0);
        let e1f = rng.random_range(0.1..5.0);
        let e2i = rng.random_range(0.1..5.0);
        let b = rng.random_range(0.1..2.0);
        BalanceParams {
            a1: rng.random_range(0.1..2.0),
            a2: rng.random_range(0.1..2.0),
            b1: b,
            b2: b,
            c1: rng.random_range(-1.0..1.0),
            c2: rng.random_range(-1.0..1.0),
            n,
            n2,
            e1i,
            e1f,
            e2i,
            e2f: e2i + n as f64 * (e1i - e1f) / n2 as f64,
            s: rng.random_range(0.0..10.0),
            r: rng.random_range(0.0..10.0),
            s2: rng.random_range(0.0..10.0),
            r2: rng.random_range(0.0..10.0),
        }
    }

    #[test]
    fn exact_solution_balances() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2000 {
            let p = random_params(&mut rng);
            assert!(balance_residual(&p).unwrap() < 1e-12);
        }
    }

    #[test]
    fn perturbed_species_breaks_balance() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut p = random_params(&mut rng);
        p.n = 2;
        p.e1i = 3.0;
        p.e1f = 1.0;
        p.e2f = p.e2i + 2.0 * 2.0 / p.n2 as f64;
        p.b2 = p.b1 * 1.1;
        assert!(balance_residual(&p).unwrap() > 1e-3);
    }

    #[test]
    fn degenerate_exchange() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut p = random_params(&mut rng);
        p.n = 0;
        p.n2 = 0;
        p.e2f = 9.0;
        p.b2 = 7.0;
        assert_eq!(balance_residual(&p).unwrap(), 0.0);
    }

    #[test]
    fn energy_violation_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mut p = random_params(&mut rng);
        p.n = 1;
        p.e2f += 0.1;
        assert!(balance_residual(&p).is_err());
    }

    #[test]
    fn einstein_room_temperature() {
        let e = einstein_balance(300.0, 1e13, 1.0, 1e8).unwrap();
        assert!(e.relative_residual < 1e-10);
        assert!((e.lhs / e.rhs - 1.0).abs() < 1e-10);
    }

    #[test]
    fn a_over_b_value() {
        let e = einstein_balance(300.0, 1e15, 1.0, 1e8).unwrap();
        // 4π·6.62607015e-34·1e45/299792458³
        let oracle = 4.0 * PI * 6.62607015e-34 * 1e45 / 299792458f64.powi(3);
        assert!((e.a_over_b / oracle - 1.0).abs() < 1e-14);
        assert!((e.a_over_b / 3.0903e-13 - 1.0).abs() < 1e-4);
        assert!(e.relative_residual < 1e-10);
    }

    #[test]
    fn hot_limit_is_stimulated() {
        let e = einstein_balance(1e7, 1e12, 1.0, 1e6).unwrap();
        assert!(e.rho > 1e3 * e.a_over_b);
    }
}

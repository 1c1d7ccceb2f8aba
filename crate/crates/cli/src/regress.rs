//! Reference-number checks with pinned tolerances.

use serde_json::{json, Value};

use qmlab::actionprob::{action_ratio_audit, box_plane_waves, ScattererTemplate, TransitionSetup};
use qmlab::constants::{EV, H, K_B, MEV, M_PROTON};
use qmlab::numkit::sample_isotropic_direction;
use qmlab::numkit::{fourier_widths, poisson_pmf, Grid1D, RandomStream, SampledFunction1D};
use qmlab::quantstat::{
    balance_residual, count_distribution, entropy_and_derivatives, packet_quanta_dist, planck_energy_density,
    sample_count_variance, spectral_distribution, thin, total_variation, vonlaue_dof, CavitySpec, LaueConvention,
    Statistics,
};
use qmlab::spincorr::{chsh, lhv_chsh_audit, marginal, ChshSettings, Outcome, PairModel};
use qmlab::wavepacket::{accumulation_time, flight_spread, Dispersion};

use crate::args::{CoherenceArgs, RegressArgs};
use crate::commands::{
    balance_params, cavity_bins, coherence_lengths, einstein_grid, mc_chsh, nosignal_max_deviation, random_lhv,
    random_settings,
};
use crate::output::Table;
use crate::{CliError, Report};

#[derive(Debug, Clone, Copy)]
enum Kind {
    Abs,
    Rel,
    Upper,
    Lower,
}

#[derive(Debug, Clone)]
struct Check {
    name: &'static str,
    value: f64,
    reference: f64,
    tolerance: f64,
    kind: Kind,
}

impl Check {
    fn pass(&self) -> bool {
        match self.kind {
            Kind::Abs => (self.value - self.reference).abs() <= self.tolerance,
            Kind::Rel => (self.value / self.reference - 1.0).abs() <= self.tolerance,
            Kind::Upper => self.value <= self.reference + self.tolerance,
            Kind::Lower => self.value >= self.reference - self.tolerance,
        }
    }

    fn to_json(&self) -> Value {
        let kind = match self.kind {
            Kind::Abs => "abs",
            Kind::Rel => "rel",
            Kind::Upper => "upper",
            Kind::Lower => "lower",
        };
        json!({
            "name": self.name,
            "value": self.value,
            "reference": self.reference,
            "tolerance": self.tolerance,
            "kind": kind,
            "pass": self.pass(),
        })
    }
}

fn abs(name: &'static str, value: f64, reference: f64, tolerance: f64) -> Check {
    Check { name, value, reference, tolerance, kind: Kind::Abs }
}
fn rel(name: &'static str, value: f64, reference: f64, tolerance: f64) -> Check {
    Check { name, value, reference, tolerance, kind: Kind::Rel }
}
fn upper(name: &'static str, value: f64, bound: f64) -> Check {
    Check { name, value, reference: bound, tolerance: 0.0, kind: Kind::Upper }
}
fn lower(name: &'static str, value: f64, bound: f64) -> Check {
    Check { name, value, reference: bound, tolerance: 0.0, kind: Kind::Lower }
}

fn correlations(seed: u64, shards: u64, quick: bool, out: &mut Vec<Check>) -> Result<(), CliError> {
    let tsirelson = 2.0 * 2f64.sqrt();
    let s = ChshSettings::coplanar(0.0, 45f64.to_radians(), 90f64.to_radians(), (-45f64).to_radians());
    out.push(abs("chsh_closed_form", chsh(&PairModel::QmSinglet, &s), tsirelson, 1e-9));
    if !quick {
        let (k, _, _) = mc_chsh(&PairModel::QmSinglet, &s, 1_000_000, seed, shards)?;
        out.push(abs("chsh_monte_carlo", k, tsirelson, 0.01));
    }
    out.push(rel("semiclassical_chsh_at_same_angles", chsh(&PairModel::Semiclassical, &s), tsirelson / 3.0, 1e-12));

    let mut rng = RandomStream::new(seed, 1);
    let (models, settings) = if quick { (50, 50) } else { (1000, 1000) };
    let mut max_lhv: f64 = 0.0;
    let mut max_sc: f64 = 0.0;
    for _ in 0..models {
        let m = random_lhv(&mut rng, 8)?;
        for _ in 0..settings {
            let st = random_settings(&mut rng);
            max_lhv = max_lhv.max(lhv_chsh_audit(&m, &st)?.k);
            max_sc = max_sc.max(chsh(&PairModel::Semiclassical, &st));
        }
    }
    out.push(upper("random_lhv_max_chsh", max_lhv, 2.0 + 1e-9));
    out.push(upper("semiclassical_max_chsh", max_sc, 4.0 / 3.0 + 1e-9));

    out.push(upper("no_signaling_max_deviation", nosignal_max_deviation(200, 8, seed)?, 1e-10));

    let mut rng = RandomStream::new(seed, 2);
    let mut dev: f64 = 0.0;
    for _ in 0..10_000 {
        let (a, b) = (sample_isotropic_direction(&mut rng), sample_isotropic_direction(&mut rng));
        for m in [PairModel::QmSinglet, PairModel::Semiclassical] {
            for r in Outcome::BOTH {
                dev = dev.max((marginal(&m, &a, &b, r)? - 0.5).abs());
            }
        }
    }
    out.push(upper("marginal_deviation_from_half", dev, 1e-12));
    Ok(())
}

fn packets(out: &mut Vec<Check>) -> Result<(), CliError> {
    let t = accumulation_time(2.18 * EV, 3.5e-13, 1e-18)?;
    out.push(rel("accumulation_time_s", t, 1e12, 0.05));

    let disp = Dispersion::new(M_PROTON)?;
    let k0 = disp.k_from_kinetic_energy(6.0 * MEV)?;
    let f = flight_spread(&disp, k0, 2e-15, 0.05)?;
    out.push(rel("proton_spread_cm", f.width * 100.0, 2.3, 0.10));

    let g = Grid1D::centered(0.0, 0.05, 1024)?;
    let (dx, dk) = fourier_widths(&SampledFunction1D::gaussian(g, 0.0, 1.5, 2.0)?)?;
    out.push(rel("min_gaussian_dx_dk", dx * dk, 0.5, 0.01));

    let c = CoherenceArgs { sigma: 1.0, spacing: 0.1, points: 1024, time: 8.0, hbar_over_m: 1.0 };
    let (l0, lt, _) = coherence_lengths(&c)?;
    out.push(rel("coherence_length_over_2dy", l0 / 2.0, 1.0, 0.01));
    out.push(upper("coherence_length_drift", (lt - l0).abs() / l0, 0.02));

    let grid = Grid1D::centered(0.0, 0.1, 12_001)?;
    let psi = SampledFunction1D::gaussian(grid, 0.0, 100.0, 0.0)?;
    let setup = TransitionSetup::new(psi, 0.0, 1.0, 0.0)?;
    let (_, w) = setup.psi_i().position_moments();
    let centers: Vec<f64> = (0..9).map(|i| w * (-1.0 + i as f64 / 4.0)).collect();
    let finals = box_plane_waves(grid, &(1..=16).collect::<Vec<_>>())?;
    let audit = action_ratio_audit(&setup, &ScattererTemplate { width: 1.0, strength: 1.0 }, &centers, &finals)?;
    out.push(upper("action_ratio_spread_width_100", audit.max_relative_spread, 0.02));
    Ok(())
}

fn statistics(seed: u64, shards: u64, quick: bool, out: &mut Vec<Check>) -> Result<(), CliError> {
    let mut rng = RandomStream::new(seed, 3);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        worst = worst.max(balance_residual(&balance_params(&mut rng, 0.0))?);
    }
    out.push(upper("balance_residual", worst, 1e-12));
    let mut p = balance_params(&mut rng, 0.1);
    (p.n, p.e1i, p.e1f) = (2, 3.0, 1.0);
    p.e2f = p.e2i + 4.0 / p.n2 as f64;
    out.push(lower("balance_perturbed_residual", balance_residual(&p)?, 1e-3));
    let (e, ab, _) = einstein_grid()?;
    out.push(upper("einstein_balance_residual", e, 1e-10));
    out.push(upper("a_over_b_formula_error", ab, 1e-15));
    out.push(rel(
        "a_over_b_1e15_Hz",
        qmlab::quantstat::einstein_balance(300.0, 1e15, 1.0, 1e9)?.a_over_b,
        3.0903e-13,
        1e-4,
    ));

    let w = count_distribution(Statistics::Bose, 1, 1.0, 1.0)?;
    let err = (0..6).map(|m| (w.probs[m] - 0.5f64.powi(m as i32 + 1)).abs()).fold(0.0, f64::max);
    out.push(upper("bose_single_packet_law", err, 1e-15));
    let f = count_distribution(Statistics::Fermi, 1, 0.3, 1.0)?;
    out.push(abs("fermi_single_packet_w0", f.probs[0], 0.7, 1e-15));
    let d = count_distribution(Statistics::Bose, 10_000, 2e-4, 1.0)?;
    let poisson: Vec<f64> = (0..d.probs.len() as u64 + 20).map(|k| poisson_pmf(k, 2.0)).collect();
    out.push(upper("bose_many_packets_tv_to_poisson", total_variation(&d.probs, &poisson), 1e-3));

    let mut fold: f64 = 0.0;
    for st in [Statistics::Bose, Statistics::Fermi, Statistics::Boltzmann] {
        for g in [1u64, 2, 5, 10, 20] {
            for s in [0.1, 0.5, 0.9, 2.0, 5.0] {
                if st == Statistics::Fermi && s >= 1.0 {
                    continue;
                }
                for eta in [0.1, 0.3, 0.7, 1.0] {
                    let w = packet_quanta_dist(st, g, s)?;
                    let t = thin(&w.probs, eta)?;
                    let c = count_distribution(st, g, s, eta)?;
                    let n = t.len().max(c.probs.len());
                    for m in 0..n {
                        let x = t.get(m).copied().unwrap_or(0.0) - c.probs.get(m).copied().unwrap_or(0.0);
                        fold = fold.max(x.abs());
                    }
                }
            }
        }
    }
    out.push(upper("closed_form_vs_thinning", fold, 1e-9));

    if !quick {
        let mut outside = 0.0;
        for (st, eta) in [(Statistics::Bose, 0.5), (Statistics::Fermi, 0.9)] {
            for g in [1u64, 3, 10] {
                for mbar in [0.5, 1.0, 2.0] {
                    if st == Statistics::Fermi && mbar >= g as f64 {
                        continue;
                    }
                    let s_bar = mbar / (g as f64 * eta);
                    let r = sample_count_variance(
                        st,
                        g,
                        s_bar,
                        eta,
                        1_000_000,
                        seed.wrapping_add(g * 31 + (mbar * 4.0) as u64),
                        shards,
                    )?;
                    if !r.within_band() {
                        outside += 1.0;
                    }
                }
            }
        }
        out.push(upper("mc_variance_outside_3sigma", outside, 0.0));
    }

    let t = 1000.0;
    let bins = cavity_bins(1.0, t, 0.0, 200, 0.05, 20.0, false)?;
    let r = entropy_and_derivatives(&CavitySpec::photon(1.0, t)?, &bins)?;
    out.push(rel("photon_dS_dE_times_T", r.ds_de * t, 1.0, 0.01));
    let bins = cavity_bins(1.0, t, 0.0, 500, 1e-3, 60.0, true)?;
    let counts = spectral_distribution(&CavitySpec::photon(1.0, t)?, &bins)?;
    let u: f64 = bins.iter().zip(&counts).map(|(b, n)| 2.0 * b.energy * n).sum();
    out.push(rel("stefan_boltzmann", u / (qmlab::constants::RADIATION_A * t.powi(4)), 1.0, 0.005));
    let kt = K_B * 5800.0;
    let peak = (1..100_000)
        .map(|i| i as f64 * 1e-4)
        .max_by(|a, b| planck_energy_density(5800.0, a * kt / H).total_cmp(&planck_energy_density(5800.0, b * kt / H)))
        .unwrap_or(0.0);
    out.push(abs("wien_peak_x", peak, 2.8214393721, 1e-3));

    let v = vonlaue_dof(1e-4, 0.3, 1e9, 1e-10, 1e-3, LaueConvention::AverageExtension)?;
    out.push(abs("vonlaue_product_ratio", v.product_ratio, 1.0, 1e-10));
    let v = vonlaue_dof(1e-4, 0.3, 1e9, 1e-10, 1e-3, LaueConvention::MinimumPacket)?;
    out.push(rel("vonlaue_minimum_packets", v.product_ratio, 2.0 * std::f64::consts::PI, 1e-10));
    Ok(())
}

pub fn run(a: &RegressArgs, seed: u64, shards: u64) -> Result<Report, CliError> {
    let mut checks = Vec::new();
    correlations(seed, shards, a.quick, &mut checks)?;
    packets(&mut checks)?;
    statistics(seed, shards, a.quick, &mut checks)?;
    let failed = checks.iter().filter(|c| !c.pass()).count();
    let table = Table {
        headers: ["name", "value", "reference", "tolerance", "pass"].map(String::from).to_vec(),
        rows: checks
            .iter()
            .map(|c| vec![json!(c.name), json!(c.value), json!(c.reference), json!(c.tolerance), json!(c.pass())])
            .collect(),
    };
    let mut r = Report::new(json!({
        "checks": checks.iter().map(Check::to_json).collect::<Vec<_>>(),
        "passed": checks.len() - failed,
        "failed": failed,
    }));
    r.table = Some(table);
    r.failed = failed > 0;
    Ok(r)
}

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use qmlab::actionprob::{action_ratio_audit, box_plane_waves, ScattererTemplate, TransitionSetup};
use qmlab::configspace::{
    conditional_probability, overlap_measure, product_form_test, reduce_expansion, symmetrize, ExpansionCoefficients,
    ManyBodyWavefunction, ReductionMode,
};
use qmlab::constants::{C, EV, K_B, MEV, M_ELECTRON, M_PROTON, RADIATION_A};
use qmlab::numkit::{sample_isotropic_direction, Grid1D, RandomStream, SampledFunction1D, UnitVector3};
use qmlab::quantstat::{
    count_distribution, count_moments, count_variance, einstein_balance, entropy_and_derivatives,
    sample_count_variance, spectral_distribution, vonlaue_dof, CavitySpec, LaueConvention, ModeBin, Statistics,
};
use qmlab::spincorr::{
    chsh, expectation, joint_table, lhv_chsh_audit, marginal, no_signaling_audit, random_unitary, sample_counts,
    semiclassical_lhv, BipartiteCoefficients, ChshSettings, LhvModel, Outcome, PairModel, TripletM,
};
use qmlab::wavepacket::{
    accumulation_time, bohr_magneton, coherence_profile, flight_spread, schrodinger_evolve, stern_gerlach_deflection,
    Dispersion,
};

use crate::args::*;
use crate::output::Table;
use crate::parse::{parse_angles_deg, parse_indices, parse_list, parse_vector};
use crate::{regress, CliError, Report};

type CmdResult = Result<Report, CliError>;

fn invalid(flag: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Invalid(format!("--{flag}: {msg}"))
}

fn params<T: Serialize>(args: &T) -> Value {
    serde_json::to_value(args).expect("argument structs serialize")
}

pub fn dispatch(cli: &Cli) -> Result<(String, Value, Report), CliError> {
    let seed = cli.seed;
    let shards = cli.shards;
    let (name, p, r) = match &cli.command {
        Command::Bell(a) => ("bell", params(a), bell(a)?),
        Command::Chsh(a) => ("chsh", params(a), chsh_cmd(a, seed, shards)?),
        Command::Sample(a) => ("sample", params(a), sample(a, seed, shards)?),
        Command::Lhv(a) => ("lhv", params(a), lhv(a, seed)?),
        Command::Nosignal(a) => ("nosignal", params(a), nosignal(a, seed)?),
        Command::Reduce(a) => ("reduce", params(a), reduce(a, seed)?),
        Command::Condspace(a) => ("condspace", params(a), condspace(a)?),
        Command::Actionprob(a) => ("actionprob", params(a), actionprob(a)?),
        Command::Packet(PacketCommand::Spread(a)) => ("packet spread", params(a), spread(a)?),
        Command::Packet(PacketCommand::Coherence(a)) => ("packet coherence", params(a), coherence(a)?),
        Command::Packet(PacketCommand::Accum(a)) | Command::Accum(a) => ("packet accum", params(a), accum(a)?),
        Command::Packet(PacketCommand::Sterngerlach(a)) => ("packet sterngerlach", params(a), sterngerlach(a)?),
        Command::Cavity(a) => ("cavity", params(a), cavity(a)?),
        Command::Counts(a) => ("counts", params(a), counts(a, seed, shards)?),
        Command::Balance(a) => ("balance", params(a), balance(a, seed)?),
        Command::Vonlaue(a) => ("vonlaue", params(a), vonlaue(a)?),
        Command::Regress(a) => ("regress", params(a), regress::run(a, seed, shards)?),
    };
    Ok((name.to_string(), p, r))
}

fn model(m: ModelArg, triplet_axis: &str) -> Result<PairModel, CliError> {
    let axis = || parse_vector(triplet_axis).map(|v| v.0).map_err(|e| invalid("triplet-axis", e));
    Ok(match m {
        ModelArg::Qm => PairModel::QmSinglet,
        ModelArg::Sc => PairModel::Semiclassical,
        ModelArg::TripletPlus => PairModel::Triplet { m: TripletM::Plus, axis: axis()? },
        ModelArg::TripletZero => PairModel::Triplet { m: TripletM::Zero, axis: axis()? },
        ModelArg::TripletMinus => PairModel::Triplet { m: TripletM::Minus, axis: axis()? },
    })
}

/// Axes from either `--angles-deg` or one `--<name> x,y,z` flag per axis.
fn resolve_axes(
    angles: &Option<String>,
    vectors: &[(&str, &Option<String>)],
    warnings: &mut Vec<String>,
) -> Result<Vec<UnitVector3>, CliError> {
    let given = vectors.iter().filter(|(_, v)| v.is_some()).count();
    match angles {
        Some(s) => {
            if given > 0 {
                return Err(invalid("angles-deg", "give either angles or axis vectors, not both"));
            }
            let r = parse_angles_deg(s, vectors.len()).map_err(|e| invalid("angles-deg", e))?;
            Ok(r.into_iter().map(UnitVector3::in_plane).collect())
        }
        None => {
            if given != vectors.len() {
                let names: Vec<String> = vectors.iter().map(|(n, _)| format!("--{n}")).collect();
                return Err(CliError::Invalid(format!(
                    "axes missing: give --angles-deg or all of {}",
                    names.join(", ")
                )));
            }
            vectors
                .iter()
                .map(|(n, v)| {
                    let (u, warn) = parse_vector(v.as_deref().unwrap_or_default()).map_err(|e| invalid(n, e))?;
                    if warn {
                        warnings.push(format!("--{n} was not a unit vector and has been normalized"));
                    }
                    Ok(u)
                })
                .collect()
        }
    }
}

fn vec3(u: &UnitVector3) -> Value {
    json!([u.x(), u.y(), u.z()])
}

fn bell(a: &BellArgs) -> CmdResult {
    let mut warnings = Vec::new();
    let ax = resolve_axes(&a.axes.angles_deg, &[("a", &a.axes.a), ("b", &a.axes.b)], &mut warnings)?;
    let m = model(a.model, &a.triplet_axis)?;
    let e = expectation(&m, &ax[0], &ax[1]);
    let mut result = json!({
        "a": vec3(&ax[0]),
        "b": vec3(&ax[1]),
        "angle_deg": ax[0].angle_to(&ax[1]).to_degrees(),
        "expectation": e,
    });
    if let Ok(t) = joint_table(&m, &ax[0], &ax[1]) {
        result["joint"] = json!({"pp": t.pp, "pm": t.pm, "mp": t.mp, "mm": t.mm});
        result["marginal_b"] = json!({
            "up": marginal(&m, &ax[0], &ax[1], Outcome::Up)?,
            "down": marginal(&m, &ax[0], &ax[1], Outcome::Down)?,
        });
    }
    let mut r = Report::new(result);
    r.warnings = warnings;
    Ok(r)
}

fn chsh_cmd(a: &ChshArgs, seed: u64, shards: u64) -> CmdResult {
    let mut warnings = Vec::new();
    let q = &a.axes;
    let ax = resolve_axes(&q.angles_deg, &[("a", &q.a), ("b", &q.b), ("a2", &q.a2), ("b2", &q.b2)], &mut warnings)?;
    let settings = ChshSettings { a: ax[0], b: ax[1], a2: ax[2], b2: ax[3] };
    let m = model(a.model, &a.triplet_axis)?;
    let k = chsh(&m, &settings);
    let e: Vec<f64> = settings.pairs().iter().map(|(x, y)| expectation(&m, x, y)).collect();
    let mut result = json!({"K": k, "expectations": e, "local_bound": 2.0, "violates_local_bound": k > 2.0});
    if let Some(n) = a.pairs {
        if n < 2 {
            return Err(invalid("pairs", "need at least 2 pairs per setting"));
        }
        let (k_mc, band, e_mc) = mc_chsh(&m, &settings, n, seed, shards)?;
        result["monte_carlo"] = json!({
            "K": k_mc,
            "band_3sigma": band,
            "samples_per_setting": n,
            "samples": 4 * n,
            "expectations": e_mc,
        });
    }
    let mut r = Report::new(result);
    r.warnings = warnings;
    Ok(r)
}

/// Monte Carlo K with each setting pair on its own seed offset; the band propagates
/// the four binomial standard errors.
pub fn mc_chsh(
    m: &PairModel,
    settings: &ChshSettings,
    n: u64,
    seed: u64,
    shards: u64,
) -> Result<(f64, f64, Vec<f64>), CliError> {
    let mut e = Vec::new();
    let mut var = 0.0;
    for (i, (x, y)) in settings.pairs().iter().enumerate() {
        let c = sample_counts(m, x, y, n, seed.wrapping_add(i as u64 * 0x9E37_79B9), shards)?;
        let ei = c.expectation()?;
        var += (1.0 - ei * ei) / n as f64;
        e.push(ei);
    }
    let k = (e[0] + e[1] + e[2] - e[3]).abs();
    Ok((k, 3.0 * var.sqrt(), e))
}

fn sample(a: &SampleArgs, seed: u64, shards: u64) -> CmdResult {
    let mut warnings = Vec::new();
    let ax = resolve_axes(&a.axes.angles_deg, &[("a", &a.axes.a), ("b", &a.axes.b)], &mut warnings)?;
    if a.pairs == 0 {
        return Err(invalid("pairs", "must be positive"));
    }
    let m = model(a.model, "0,0,1")?;
    let c = sample_counts(&m, &ax[0], &ax[1], a.pairs, seed, shards)?;
    let f = c.frequencies();
    let exact = joint_table(&m, &ax[0], &ax[1])?;
    let n = a.pairs as f64;
    let band = |p: f64| 3.0 * (p * (1.0 - p) / n).sqrt();
    let e = c.expectation()?;
    let e_exact = expectation(&m, &ax[0], &ax[1]);
    let result = json!({
        "samples": a.pairs,
        "counts": {"pp": c.pp, "pm": c.pm, "mp": c.mp, "mm": c.mm},
        "frequencies": {"pp": f.pp, "pm": f.pm, "mp": f.mp, "mm": f.mm},
        "exact": {"pp": exact.pp, "pm": exact.pm, "mp": exact.mp, "mm": exact.mm},
        "band_3sigma": {"pp": band(exact.pp), "pm": band(exact.pm), "mp": band(exact.mp), "mm": band(exact.mm)},
        "expectation": e,
        "expectation_exact": e_exact,
        "expectation_band_3sigma": 3.0 * ((1.0 - e_exact * e_exact) / n).sqrt(),
    });
    let mut r = Report::new(result);
    r.warnings = warnings;
    Ok(r)
}

pub fn random_settings(rng: &mut RandomStream) -> ChshSettings {
    let mut d = || sample_isotropic_direction(rng);
    ChshSettings { a: d(), b: d(), a2: d(), b2: d() }
}

/// Random local model: each λ carries two axes, two strengths and a switch between a
/// smooth response ½(1 + s·u·a) and a deterministic sign response.
pub fn random_lhv(rng: &mut RandomStream, n_lambda: usize) -> Result<LhvModel<[f64; 10]>, CliError> {
    let lambdas: Vec<[f64; 10]> = (0..n_lambda)
        .map(|_| {
            let u = sample_isotropic_direction(rng);
            let v = sample_isotropic_direction(rng);
            [u.x(), u.y(), u.z(), rng.uniform(), v.x(), v.y(), v.z(), rng.uniform(), rng.uniform(), rng.uniform()]
        })
        .collect();
    let raw: Vec<f64> = (0..n_lambda).map(|_| rng.uniform() + 1e-6).collect();
    let total: f64 = raw.iter().sum();
    let weights = raw.iter().map(|w| w / total).collect();
    let response = |off: usize, sw: usize| {
        move |ax: &UnitVector3, l: &[f64; 10]| {
            let dot = l[off] * ax.x() + l[off + 1] * ax.y() + l[off + 2] * ax.z();
            if l[sw] < 0.5 {
                (0.5 * (1.0 + l[off + 3] * dot)).clamp(0.0, 1.0)
            } else if dot >= 0.0 {
                1.0
            } else {
                0.0
            }
        }
    };
    Ok(LhvModel::new(lambdas, weights, response(0, 8), response(4, 9))?)
}

fn lhv(a: &LhvArgs, seed: u64) -> CmdResult {
    let mut rng = RandomStream::new(seed, 0);
    let fixed = match &a.angles_deg {
        Some(s) => {
            let r = parse_angles_deg(s, 4).map_err(|e| invalid("angles-deg", e))?;
            Some(ChshSettings::coplanar(r[0], r[1], r[2], r[3]))
        }
        None => None,
    };
    let result = match a.kind {
        LhvKind::Semiclassical => {
            let model = semiclassical_lhv(a.polar, a.azimuth)?;
            let settings: Vec<ChshSettings> = match fixed {
                Some(s) => vec![s],
                None => (0..a.settings).map(|_| random_settings(&mut rng)).collect(),
            };
            let mut max_grid: f64 = 0.0;
            let mut max_closed: f64 = 0.0;
            for s in &settings {
                max_grid = max_grid.max(lhv_chsh_audit(&model, s)?.k);
                max_closed = max_closed.max(chsh(&PairModel::Semiclassical, s));
            }
            json!({
                "settings": settings.len(),
                "lambda_points": model.len(),
                "max_K_grid_model": max_grid,
                "max_K_closed_form": max_closed,
                "closed_form_bound": 4.0 / 3.0,
                "local_bound": 2.0,
                "within_bounds": max_grid <= 2.0 + 1e-9 && max_closed <= 4.0 / 3.0 + 1e-9,
            })
        }
        LhvKind::Random => {
            if a.models == 0 || a.lambdas == 0 {
                return Err(invalid("models", "models and lambdas must be positive"));
            }
            let mut max_k: f64 = 0.0;
            for _ in 0..a.models {
                let model = random_lhv(&mut rng, a.lambdas)?;
                let count = if fixed.is_some() { 1 } else { a.settings };
                for _ in 0..count {
                    let s = fixed.unwrap_or_else(|| random_settings(&mut rng));
                    max_k = max_k.max(lhv_chsh_audit(&model, &s)?.k);
                }
            }
            json!({
                "models": a.models,
                "settings_per_model": if fixed.is_some() { 1 } else { a.settings },
                "max_K": max_k,
                "local_bound": 2.0,
                "within_bound": max_k <= 2.0 + 1e-9,
            })
        }
    };
    Ok(Report::new(result))
}

/// Largest three-route marginal disagreement over random states and basis changes.
pub fn nosignal_max_deviation(trials: usize, max_dim: usize, seed: u64) -> Result<f64, CliError> {
    let mut rng = RandomStream::new(seed, 0);
    let mut max_dev: f64 = 0.0;
    for _ in 0..trials {
        let rows = 1 + (rng.uniform() * max_dim as f64) as usize % max_dim;
        let cols = 1 + (rng.uniform() * max_dim as f64) as usize % max_dim;
        let coeffs = BipartiteCoefficients::random(rows, cols, &mut rng)?;
        let u = random_unitary(rows, &mut rng)?;
        for n in 0..cols {
            max_dev = max_dev.max(no_signaling_audit(&coeffs, &u, n)?.max_deviation);
        }
    }
    Ok(max_dev)
}

fn nosignal(a: &NosignalArgs, seed: u64) -> CmdResult {
    if a.max_dim == 0 || a.max_dim > 64 {
        return Err(invalid("max-dim", "must lie in 1..=64"));
    }
    let dev = nosignal_max_deviation(a.trials, a.max_dim, seed)?;
    Ok(Report::new(json!({"trials": a.trials, "max_deviation": dev, "no_signaling": dev < 1e-10})))
}

fn reduce(a: &ReduceArgs, seed: u64) -> CmdResult {
    let amps = parse_list(&a.amplitudes).map_err(|e| invalid("amplitudes", e))?;
    let phases = match &a.phases_deg {
        Some(s) => parse_list(s).map_err(|e| invalid("phases-deg", e))?,
        None => vec![0.0; amps.len()],
    };
    if phases.len() != amps.len() {
        return Err(invalid("phases-deg", format!("expected {} phases, got {}", amps.len(), phases.len())));
    }
    let c: Vec<Complex64> = amps.iter().zip(&phases).map(|(r, p)| Complex64::from_polar(*r, p.to_radians())).collect();
    let coeffs = ExpansionCoefficients::normalized(c)?;
    let probs = coeffs.probabilities();
    let result = match (&a.window, a.draws) {
        (Some(_), Some(_)) => return Err(invalid("window", "give either --window or --draws")),
        (Some(w), None) => {
            let idx = parse_indices(w).map_err(|e| invalid("window", e))?;
            let r = reduce_expansion(&coeffs, &ReductionMode::Window(idx), None)?;
            json!({"before": probs, "after": r.probabilities()})
        }
        (None, Some(n)) => {
            if n == 0 {
                return Err(invalid("draws", "must be positive"));
            }
            let mut rng = RandomStream::new(seed, 0);
            let mut tally = vec![0u64; probs.len()];
            for _ in 0..n {
                let r = reduce_expansion(&coeffs, &ReductionMode::SinglePick, Some(&mut rng))?;
                if let Some(i) = r.eigen_index() {
                    tally[i] += 1;
                }
            }
            let nf = n as f64;
            let freq: Vec<f64> = tally.iter().map(|t| *t as f64 / nf).collect();
            let band: Vec<f64> = probs.iter().map(|p| 3.0 * (p * (1.0 - p) / nf).sqrt()).collect();
            json!({"samples": n, "probabilities": probs, "frequencies": freq, "band_3sigma": band})
        }
        (None, None) => return Err(CliError::Invalid("give --window or --draws".into())),
    };
    Ok(Report::new(result))
}

fn condspace(a: &CondspaceArgs) -> CmdResult {
    if a.sign != 1 && a.sign != -1 {
        return Err(invalid("sign", "must be 1 or -1"));
    }
    let grid = Grid1D::centered(0.0, a.spacing, a.points)?;
    let (c1, c2) = (-0.5 * a.separation, 0.5 * a.separation);
    let left = SampledFunction1D::gaussian(grid, c1, a.sigma, 0.0)?;
    let right = SampledFunction1D::gaussian(grid, c2, a.sigma, 0.0)?;
    let product = ManyBodyWavefunction::product(&[left.clone(), right.clone()])?;
    let sym = symmetrize(&product, a.sign)?;
    let index_of =
        |x: f64| ((x - grid.start()) / grid.spacing()).round().clamp(0.0, (grid.points() - 1) as f64) as usize;
    let variation = |psi: &ManyBodyWavefunction| -> Result<f64, CliError> {
        // Two conditioning points inside the second packet, where it has density.
        let p = conditional_probability(psi, index_of(c2 - a.sigma))?;
        let q = conditional_probability(psi, index_of(c2 + a.sigma))?;
        Ok(p.iter().zip(&q).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
    };
    let tp = product_form_test(&product)?;
    let ts = product_form_test(&sym)?;
    Ok(Report::new(json!({
        "overlap": overlap_measure(&left, &right)?,
        "product": {"is_product": tp.is_product, "schmidt_residual": tp.schmidt_residual, "conditional_variation": variation(&product)?},
        "symmetrized": {"is_product": ts.is_product, "schmidt_residual": ts.schmidt_residual, "conditional_variation": variation(&sym)?},
    })))
}

fn actionprob(a: &ActionprobArgs) -> CmdResult {
    if a.probes < 2 {
        return Err(invalid("probes", "need at least 2 probe centers"));
    }
    if a.modes < 1 || a.modes > 16 {
        return Err(invalid("modes", "must lie in 1..=16"));
    }
    let grid = Grid1D::centered(0.0, a.spacing, a.points)?;
    let psi = SampledFunction1D::gaussian(grid, 0.0, a.sigma, 0.0)?;
    let setup = TransitionSetup::new(psi, 0.0, 1.0, 0.0)?;
    let (_, dx) = setup.psi_i().position_moments();
    let centers: Vec<f64> = (0..a.probes).map(|i| dx * (-1.0 + 2.0 * i as f64 / (a.probes - 1) as f64)).collect();
    let finals = box_plane_waves(grid, &(1..=a.modes).collect::<Vec<_>>())?;
    let template = ScattererTemplate { width: a.width, strength: a.strength };
    let audit = action_ratio_audit(&setup, &template, &centers, &finals)?;
    Ok(Report::new(json!({
        "width_ratio": setup.width_ratio(a.width),
        "regime": format!("{:?}", audit.regime),
        "centers": centers,
        "ratios": audit.ratios,
        "kappa": audit.kappa,
        "max_relative_spread": audit.max_relative_spread,
    })))
}

fn particle_mass(p: Particle) -> f64 {
    match p {
        Particle::Electron => M_ELECTRON,
        Particle::Proton => M_PROTON,
    }
}

fn spread(a: &SpreadArgs) -> CmdResult {
    let mass = a.mass_kg.unwrap_or(particle_mass(a.particle));
    let disp = Dispersion::new(mass)?;
    let k0 = disp.k_from_kinetic_energy(a.kinetic_mev * MEV)?;
    let f = flight_spread(&disp, k0, 0.5 * a.full_length, a.distance)?;
    Ok(Report::new(json!({
        "beta": disp.beta(k0),
        "delta_y0_m": 0.5 * a.full_length,
        "flight_time_s": f.flight_time,
        "doubling_time_s": f.doubling_time,
        "spreading_velocity_m_s": f.spreading_velocity,
        "asymptotic": f.asymptotic,
        "width_m": f.width,
        "width_cm": f.width * 100.0,
    })))
}

/// Coherence lengths of a minimum Gaussian and of the same packet after free spreading.
pub fn coherence_lengths(a: &CoherenceArgs) -> Result<(f64, f64, f64), CliError> {
    let grid = Grid1D::centered(0.0, a.spacing, a.points)?;
    let psi = SampledFunction1D::gaussian(grid, 0.0, a.sigma, 0.0)?;
    let l0 = coherence_profile(&psi, &[])?.coherence_length;
    let evolved = schrodinger_evolve(&psi, a.hbar_over_m, a.time)?.normalized()?;
    let (_, width_t) = evolved.position_moments();
    let lt = coherence_profile(&evolved, &[])?.coherence_length;
    match (l0, lt) {
        (Some(l0), Some(lt)) => Ok((l0, lt, width_t)),
        _ => Err(CliError::Numerical("coherence never decays to e^{-1/2} on this grid".into())),
    }
}

fn coherence(a: &CoherenceArgs) -> CmdResult {
    let (l0, lt, width_t) = coherence_lengths(a)?;
    Ok(Report::new(json!({
        "coherence_length_initial": l0,
        "coherence_length_spread": lt,
        "ratio_to_twice_min_width": l0 / (2.0 * a.sigma),
        "relative_change": (lt - l0).abs() / l0,
        "width_initial": a.sigma,
        "width_spread": width_t,
    })))
}

fn accum(a: &AccumArgs) -> CmdResult {
    let t = accumulation_time(a.threshold_ev * EV, a.flux, a.area)?;
    Ok(Report::new(json!({"time_s": t, "time_years": t / (365.25 * 86_400.0)})))
}

fn sterngerlach(a: &SternGerlachArgs) -> CmdResult {
    let mass = particle_mass(a.particle);
    let mu = bohr_magneton(mass)?;
    let disp = Dispersion::new(mass)?;
    let p_y = disp.k_from_kinetic_energy(a.kinetic_ev * EV)? * qmlab::constants::HBAR;
    let angle = stern_gerlach_deflection(mu, a.grad_b, a.dt, p_y)?;
    Ok(Report::new(json!({"magneton_J_T": mu, "p_y": p_y, "deflection_rad": angle})))
}

fn statistics(s: StatArg) -> Statistics {
    match s {
        StatArg::Bose | StatArg::Photon => Statistics::Bose,
        StatArg::Fermi => Statistics::Fermi,
        StatArg::Boltzmann => Statistics::Boltzmann,
    }
}

/// Momentum bins between x_min·kT/c and x_max·kT/c.
pub fn cavity_bins(
    volume: f64,
    temperature: f64,
    mass: f64,
    n: usize,
    x_min: f64,
    x_max: f64,
    log: bool,
) -> Result<Vec<ModeBin>, CliError> {
    if n == 0 || !(x_min > 0.0 && x_max > x_min) {
        return Err(CliError::Invalid("bins need n > 0 and 0 < x-min < x-max".into()));
    }
    let scale = K_B * temperature / C;
    let edge = |i: usize| {
        let f = i as f64 / n as f64;
        if log {
            x_min * (x_max / x_min).powf(f)
        } else {
            x_min + (x_max - x_min) * f
        }
    };
    (0..n)
        .map(|i| {
            let (lo, hi) = (edge(i) * scale, edge(i + 1) * scale);
            Ok(ModeBin::new(volume, 0.5 * (lo + hi), hi - lo, mass)?)
        })
        .collect()
}

fn cavity(a: &CavityArgs) -> CmdResult {
    let photon = a.stat == StatArg::Photon;
    let cav = if photon {
        CavitySpec::photon(a.volume, a.temperature)?
    } else {
        CavitySpec::new(a.volume, a.temperature, a.mu_ev * EV, a.mass_kg, statistics(a.stat))?
    };
    let mass = if photon { 0.0 } else { a.mass_kg };
    let bins = cavity_bins(a.volume, a.temperature, mass, a.bins, a.x_min, a.x_max, a.log)?;
    let counts = spectral_distribution(&cav, &bins)?;
    let ent = entropy_and_derivatives(&cav, &bins)?;
    let mut warnings = Vec::new();
    if !ent.stirling_valid {
        warnings.push("some factorial arguments are below 10; Stirling entropy is inaccurate".into());
    }
    let mut result = json!({
        "bins": bins.len(),
        "total_quanta": ent.number,
        "total_energy_J": ent.energy,
        "entropy_J_K": ent.entropy,
        "dS_dE_times_T": ent.ds_de * a.temperature,
        "dS_dN_J_K": ent.ds_dn,
        "minus_mu_over_T": -cav.mu / a.temperature,
        "stirling_valid": ent.stirling_valid,
    });
    if photon {
        // Two polarizations.
        let u = 2.0 * ent.energy;
        result["stefan_boltzmann_ratio"] = json!(u / (RADIATION_A * a.temperature.powi(4) * a.volume));
    }
    let table = Table {
        headers: ["p", "energy_J", "frequency_Hz", "modes", "count"].map(String::from).to_vec(),
        rows: bins
            .iter()
            .zip(&counts)
            .map(|(b, n)| vec![json!(b.p), json!(b.energy), json!(b.frequency()), json!(b.modes), json!(n)])
            .collect(),
    };
    let mut r = Report::new(result);
    r.table = Some(table);
    r.warnings = warnings;
    Ok(r)
}

fn count_stat(s: CountStat) -> Statistics {
    match s {
        CountStat::Bose => Statistics::Bose,
        CountStat::Fermi => Statistics::Fermi,
        CountStat::Boltzmann => Statistics::Boltzmann,
    }
}

fn counts(a: &CountsArgs, seed: u64, shards: u64) -> CmdResult {
    if a.g == 0 {
        return Err(invalid("g", "must be positive"));
    }
    if !(a.eta > 0.0 && a.eta <= 1.0) {
        return Err(invalid("eta", "must lie in (0, 1]"));
    }
    if !(a.mbar >= 0.0) {
        return Err(invalid("mbar", "must be nonnegative"));
    }
    let st = count_stat(a.stat);
    let s_bar = a.mbar / (a.g as f64 * a.eta);
    let d = count_distribution(st, a.g, s_bar, a.eta)?;
    let mut w = d.probs.clone();
    if let Some(mmax) = a.mmax {
        w.resize(mmax + 1, 0.0);
    }
    let (_, var_dist, _) = count_moments(&d.probs);
    let mut result = json!({
        "s_bar": s_bar,
        "mean": d.mean,
        "W": w,
        "variance": count_variance(st, a.g, a.mbar)?,
        "variance_from_distribution": var_dist,
        "truncated_mass": 1.0 - d.total(),
    });
    if let Some(n) = a.trials {
        let s = sample_count_variance(st, a.g, s_bar, a.eta, n, seed, shards)?;
        result["monte_carlo"] = json!({
            "samples": s.trials,
            "mean": s.mean,
            "variance": s.variance,
            "expected_variance": s.expected_variance,
            "band_3sigma": s.band,
            "within_band": s.within_band(),
        });
    }
    let table = Table {
        headers: vec!["m".into(), "W".into()],
        rows: w.iter().enumerate().map(|(m, p)| vec![json!(m), json!(p)]).collect(),
    };
    let mut r = Report::new(result);
    r.table = Some(table);
    Ok(r)
}

/// Random exchange-balance parameter sets that conserve energy, with species 2's b
/// scaled by (1 + perturb).
pub fn balance_params(rng: &mut RandomStream, perturb: f64) -> qmlab::quantstat::BalanceParams {
    let mut u = |lo: f64, hi: f64| lo + (hi - lo) * rng.uniform();
    let n = u(1.0, 6.0).floor() as u32;
    let n2 = u(1.0, 6.0).floor() as u32;
    let (e1i, e1f, e2i) = (u(0.1, 5.0), u(0.1, 5.0), u(0.1, 5.0));
    let b = u(0.1, 2.0);
    qmlab::quantstat::BalanceParams {
        a1: u(0.1, 2.0),
        a2: u(0.1, 2.0),
        b1: b,
        b2: b * (1.0 + perturb),
        c1: u(-1.0, 1.0),
        c2: u(-1.0, 1.0),
        n,
        n2,
        e1i,
        e1f,
        e2i,
        e2f: e2i + n as f64 * (e1i - e1f) / n2 as f64,
        s: u(0.0, 10.0),
        r: u(0.0, 10.0),
        s2: u(0.0, 10.0),
        r2: u(0.0, 10.0),
    }
}

/// Worst Einstein-balance residual and A/B error over a fixed (T, ν) grid.
pub fn einstein_grid() -> Result<(f64, f64, usize), CliError> {
    let mut worst: f64 = 0.0;
    let mut worst_ab: f64 = 0.0;
    let mut n = 0;
    for t in [3.0, 30.0, 300.0, 3000.0, 30_000.0] {
        for nu in [1e9, 1e11, 1e13, 1e14, 1e15] {
            let e = einstein_balance(t, nu, 1.0, nu * 1e-6)?;
            let ab = 4.0 * std::f64::consts::PI * qmlab::constants::H * nu * nu * nu / (C * C * C);
            worst = worst.max(e.relative_residual);
            worst_ab = worst_ab.max((e.a_over_b / ab - 1.0).abs());
            n += 1;
        }
    }
    Ok((worst, worst_ab, n))
}

fn balance(a: &BalanceArgs, seed: u64) -> CmdResult {
    let mut rng = RandomStream::new(seed, 0);
    let mut max_res: f64 = 0.0;
    for _ in 0..a.trials {
        let p = balance_params(&mut rng, a.perturb);
        max_res = max_res.max(qmlab::quantstat::balance_residual(&p)?);
    }
    let (einstein, ab_err, points) = einstein_grid()?;
    Ok(Report::new(json!({
        "trials": a.trials,
        "max_residual": max_res,
        "einstein": {"grid_points": points, "max_relative_residual": einstein, "a_over_b_max_relative_error": ab_err},
    })))
}

fn vonlaue(a: &VonlaueArgs) -> CmdResult {
    let conv = match (a.r, a.convention) {
        (Some(r), _) => LaueConvention::Custom(r),
        (None, ConventionArg::Average) => LaueConvention::AverageExtension,
        (None, ConventionArg::Minimum) => LaueConvention::MinimumPacket,
    };
    let v = vonlaue_dof(a.area, a.length, a.dnu, a.focal_area, a.dy, conv)?;
    Ok(Report::new(json!({
        "F": v.f,
        "dnu_packet": v.dnu_packet,
        "N1": v.n1,
        "N2": v.n2,
        "N3": v.n3,
        "product_ratio": v.product_ratio,
        "r": conv.r(),
    })))
}

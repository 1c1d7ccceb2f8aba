//! First-order transition probability of a large packet meeting a small localized
//! scatterer through a contact interaction, and the check that it factors into
//! κ·|ψ_i(x₀)|².
//!
//! Natural units with ħ = 1: energies are angular frequencies, V carries energy·length.

use num_complex::Complex64;

use crate::error::{domain, precondition, Result};
use crate::numkit::{Grid1D, SampledFunction1D};

const ORTHO_TOL: f64 = 1e-6;
const MAX_FINAL_STATES: usize = 16;

/// Scatterer at `x0` with ground function Φ₀, excited function Φ_n and contact strength V.
#[derive(Debug, Clone)]
pub struct ScattererSpec {
    x0: f64,
    phi0: SampledFunction1D,
    phin: SampledFunction1D,
    strength: f64,
}

impl ScattererSpec {
    pub fn new(x0: f64, phi0: SampledFunction1D, phin: SampledFunction1D, strength: f64) -> Result<Self> {
        phi0.check_normalized("ground function")?;
        phin.check_normalized("excited function")?;
        if !phi0.same_grid(&phin) {
            return Err(precondition("scatterer functions must share one grid"));
        }
        let ov = inner(&phin, &phi0).norm();
        if ov > ORTHO_TOL {
            return Err(precondition(format!("ground and excited functions overlap by {ov:e}")));
        }
        Ok(Self { x0, phi0, phin, strength })
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }
    pub fn strength(&self) -> f64 {
        self.strength
    }
    pub fn phi0(&self) -> &SampledFunction1D {
        &self.phi0
    }
    pub fn phin(&self) -> &SampledFunction1D {
        &self.phin
    }
}

/// Gaussian ground state and first excited (odd) state of a given |Φ₀|² width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScattererTemplate {
    pub width: f64,
    pub strength: f64,
}

impl ScattererTemplate {
    pub fn place(&self, grid: Grid1D, x0: f64) -> Result<ScattererSpec> {
        if !(self.width > 0.0) {
            return Err(precondition(format!("scatterer width must be positive, got {}", self.width)));
        }
        let w = self.width;
        let phi0 = SampledFunction1D::gaussian(grid, x0, w, 0.0)?;
        let phin = SampledFunction1D::from_fn(grid, |x| {
            let u = x - x0;
            Complex64::new(u / w * (-u * u / (4.0 * w * w)).exp(), 0.0)
        })?
        .normalized()?;
        ScattererSpec::new(x0, phi0, phin, self.strength)
    }
}

/// Packet/scatterer size regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum WidthRegime {
    /// Δx/w below 10: the packet is not large compared with the scatterer.
    Marginal,
    /// 10 ≤ Δx/w < 100.
    Standard,
    /// Δx/w ≥ 100.
    HighAccuracy,
}

impl WidthRegime {
    /// Thresholds carry a 1e-6 relative slack so grid truncation of a nominal width does
    /// not drop a packet into the lower regime.
    pub fn from_ratio(r: f64) -> Self {
        let r = r * (1.0 + 1e-6);
        if r >= 100.0 {
            WidthRegime::HighAccuracy
        } else if r >= 10.0 {
            WidthRegime::Standard
        } else {
            WidthRegime::Marginal
        }
    }
}

/// Incoming packet and time window. `delta_e` is the energy mismatch
/// E_f + E_n − E_i − E₀ of the free phases over the window.
#[derive(Debug, Clone)]
pub struct TransitionSetup {
    psi_i: SampledFunction1D,
    t0: f64,
    t: f64,
    delta_e: f64,
}

impl TransitionSetup {
    pub fn new(psi_i: SampledFunction1D, t0: f64, t: f64, delta_e: f64) -> Result<Self> {
        if !(t > t0) {
            return Err(precondition(format!("time window must satisfy t > t0, got [{t0}, {t}]")));
        }
        Ok(Self { psi_i, t0, t, delta_e })
    }

    pub fn psi_i(&self) -> &SampledFunction1D {
        &self.psi_i
    }

    /// Same window with a different incoming packet.
    pub fn with_packet(&self, psi_i: SampledFunction1D) -> Self {
        Self { psi_i, ..self.clone() }
    }

    /// ∫_{t0}^{t} e^{iΔE τ} dτ.
    pub fn time_factor(&self) -> Complex64 {
        let dt = self.t - self.t0;
        let x = self.delta_e * dt;
        if x.abs() < 1e-8 {
            return Complex64::new(dt, 0.0) * Complex64::new(0.0, self.delta_e * (self.t + self.t0) / 2.0).exp();
        }
        let i = Complex64::new(0.0, 1.0);
        ((i * self.delta_e * self.t).exp() - (i * self.delta_e * self.t0).exp()) / (i * self.delta_e)
    }

    /// Packet width over scatterer width.
    pub fn width_ratio(&self, scatterer_width: f64) -> f64 {
        self.psi_i.position_moments().1 / scatterer_width
    }
}

fn inner(a: &SampledFunction1D, b: &SampledFunction1D) -> Complex64 {
    a.values().iter().zip(b.values()).map(|(x, y)| x.conj() * y).sum::<Complex64>() * a.grid().spacing()
}

/// W = |V|²·|∫e^{iΔEτ}dτ|²·|∫ψ_f* Φ_n* ψ_i Φ₀ dx|².
///
/// The contact interaction Vδ(x₁ − x₂) collapses the two space integrals to one.
pub fn first_order_transition(
    setup: &TransitionSetup,
    scatterer: &ScattererSpec,
    psi_f: &SampledFunction1D,
) -> Result<f64> {
    let psi_i = &setup.psi_i;
    if !psi_i.same_grid(psi_f) || !psi_i.same_grid(&scatterer.phi0) {
        return Err(precondition("packets and scatterer functions must share one grid"));
    }
    let amp: Complex64 = psi_f
        .values()
        .iter()
        .zip(scatterer.phin.values())
        .zip(psi_i.values().iter().zip(scatterer.phi0.values()))
        .map(|((f, n), (i, z))| f.conj() * n.conj() * i * z)
        .sum::<Complex64>()
        * psi_i.grid().spacing();
    Ok(scatterer.strength.powi(2) * setup.time_factor().norm_sqr() * amp.norm_sqr())
}

/// Orthonormal plane waves e^{i k_j x}/√L on the grid's periodic box, k_j = 2πj/(N·dx).
pub fn box_plane_waves(grid: Grid1D, modes: &[i64]) -> Result<Vec<SampledFunction1D>> {
    if modes.is_empty() || modes.len() > MAX_FINAL_STATES {
        return Err(precondition(format!("final family must hold 1..={MAX_FINAL_STATES} states")));
    }
    let len = grid.points() as f64 * grid.spacing();
    let norm = 1.0 / len.sqrt();
    modes
        .iter()
        .map(|&j| {
            let k = 2.0 * std::f64::consts::PI * j as f64 / len;
            SampledFunction1D::from_fn(grid, |x| Complex64::from_polar(norm, k * (x - grid.start())))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ActionRatioAudit {
    /// ΣW/|ψ_i(x₀)|² at each probe center.
    pub ratios: Vec<f64>,
    pub kappa: f64,
    pub max_relative_spread: f64,
    pub regime: WidthRegime,
}

fn interpolate(psi: &SampledFunction1D, x: f64) -> Result<Complex64> {
    let g = psi.grid();
    let s = (x - g.start()) / g.spacing();
    if s < 0.0 || s > (g.points() - 1) as f64 {
        return Err(domain(format!("probe center {x} lies outside the grid")));
    }
    let i = (s.floor() as usize).min(g.points() - 2);
    let f = s - i as f64;
    Ok(psi.values()[i] * (1.0 - f) + psi.values()[i + 1] * f)
}

/// Checks that the summed transition probability tracks |ψ_i(x₀)|² across probe centers.
pub fn action_ratio_audit(
    setup: &TransitionSetup,
    template: &ScattererTemplate,
    centers: &[f64],
    finals: &[SampledFunction1D],
) -> Result<ActionRatioAudit> {
    if centers.is_empty() {
        return Err(precondition("audit needs at least one probe center"));
    }
    if finals.is_empty() || finals.len() > MAX_FINAL_STATES {
        return Err(precondition(format!("final family must hold 1..={MAX_FINAL_STATES} states")));
    }
    let grid = *setup.psi_i.grid();
    let (mean, width) = setup.psi_i.position_moments();
    let mut ratios = Vec::with_capacity(centers.len());
    for &x0 in centers {
        if (x0 - mean).abs() > width * (1.0 + 1e-6) {
            return Err(precondition(format!(
                "probe center {x0} lies outside the packet core ⟨x⟩ ± Δx = {mean} ± {width}"
            )));
        }
        let density = interpolate(&setup.psi_i, x0)?.norm_sqr();
        if density < 1e-15 {
            return Err(domain(format!("packet density {density:e} at {x0} is too small to normalize by")));
        }
        let sc = template.place(grid, x0)?;
        let mut w = 0.0;
        for f in finals {
            w += first_order_transition(setup, &sc, f)?;
        }
        ratios.push(w / density);
    }
    let kappa = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let spread = ratios.iter().map(|r| (r - kappa).abs() / kappa).fold(0.0, f64::max);
    Ok(ActionRatioAudit {
        ratios,
        kappa,
        max_relative_spread: spread,
        regime: WidthRegime::from_ratio(setup.width_ratio(template.width)),
    })
}

/// Splits a transition probability into intensity I₁ = κ(Δt)·∫|ψ|² and conditional P₁ = W₁/I₁.
pub fn efficiency_decomposition(w1: f64, psi_norm_sq: f64, kappa_dt: f64) -> Result<(f64, f64)> {
    if !(psi_norm_sq > 0.0) {
        return Err(precondition(format!("∫|ψ|² must be positive, got {psi_norm_sq}")));
    }
    if !(kappa_dt > 0.0 && kappa_dt <= 1.0) {
        return Err(precondition(format!("κ(Δt) must lie in (0, 1], got {kappa_dt}")));
    }
    let i1 = kappa_dt * psi_norm_sq;
    if i1 == 0.0 {
        return Err(domain("intensity vanishes"));
    }
    Ok((i1, w1 / i1))
}

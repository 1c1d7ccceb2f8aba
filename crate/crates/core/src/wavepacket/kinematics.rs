use crate::constants::{C, E_CHARGE, HBAR};
use crate::error::{domain, precondition, Result};

/// Relativistic free dispersion ω = c√(k² + κ²), κ = mc/ħ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dispersion {
    mass: f64,
    kappa: f64,
}

impl Dispersion {
    pub fn new(mass: f64) -> Result<Self> {
        if !(mass >= 0.0) || !mass.is_finite() {
            return Err(precondition(format!("mass must be finite and nonnegative, got {mass}")));
        }
        Ok(Self { mass, kappa: mass * C / HBAR })
    }

    pub fn photon() -> Self {
        Self { mass: 0.0, kappa: 0.0 }
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }
    /// Inverse reduced Compton length, 1/m.
    pub fn kappa(&self) -> f64 {
        self.kappa
    }
    pub fn is_massless(&self) -> bool {
        self.kappa == 0.0
    }

    /// Carrier wavenumber of a particle with the given kinetic energy (J).
    pub fn k_from_kinetic_energy(&self, kinetic: f64) -> Result<f64> {
        if !(kinetic >= 0.0) {
            return Err(domain(format!("kinetic energy must be nonnegative, got {kinetic}")));
        }
        let rest = self.mass * C * C;
        let pc = (kinetic * (kinetic + 2.0 * rest)).sqrt();
        Ok(pc / (HBAR * C))
    }

    /// v₀/c at carrier wavenumber k0.
    pub fn beta(&self, k0: f64) -> f64 {
        if self.is_massless() {
            1.0
        } else {
            k0 / k0.hypot(self.kappa)
        }
    }
}

/// Returns (v₀, ω₀) with ω₀ = c√(k₀² + κ²) and v₀ = k₀c²/ω₀.
pub fn group_velocity(disp: &Dispersion, k0: f64) -> Result<(f64, f64)> {
    if !(k0 >= 0.0) {
        return Err(domain(format!("carrier wavenumber must be nonnegative, got {k0}")));
    }
    let omega = C * k0.hypot(disp.kappa);
    if omega == 0.0 {
        // A massless packet at rest has no defined velocity; by continuity in k0 it is c.
        return Ok((C, 0.0));
    }
    Ok((k0 * C * C / omega, omega))
}

/// Ratio max(Δk)/k₀ above which the narrow-packet expansion is flagged.
pub const NARROWNESS_LIMIT: f64 = 0.1;

/// Momentum-space description of a packet travelling along y.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPacket {
    pub k0: f64,
    pub dk_x: f64,
    pub dk_y: f64,
    pub dk_z: f64,
}

impl SpectralPacket {
    pub fn new(k0: f64, dk_x: f64, dk_y: f64, dk_z: f64) -> Result<Self> {
        if !(k0 >= 0.0) {
            return Err(precondition(format!("k0 must be nonnegative, got {k0}")));
        }
        for (name, v) in [("Δk_x", dk_x), ("Δk_y", dk_y), ("Δk_z", dk_z)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(precondition(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self { k0, dk_x, dk_y, dk_z })
    }

    pub fn narrowness(&self) -> f64 {
        self.dk_x.max(self.dk_y).max(self.dk_z) / self.k0
    }

    pub fn narrowness_warning(&self) -> bool {
        !(self.narrowness() <= NARROWNESS_LIMIT)
    }
}

/// Width history σ²(t) = σ²(t₀) + Δv_g²(t − t₀)² of a free packet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketEvolution {
    sigma0: f64,
    t0: f64,
    v_mean: f64,
    dv: f64,
}

impl PacketEvolution {
    pub fn new(sigma0: f64, t0: f64, v_mean: f64, dv: f64) -> Result<Self> {
        if !(sigma0 > 0.0) {
            return Err(precondition(format!("initial width must be positive, got {sigma0}")));
        }
        if !(dv >= 0.0) {
            return Err(precondition(format!("velocity spread must be nonnegative, got {dv}")));
        }
        Ok(Self { sigma0, t0, v_mean, dv })
    }

    pub fn sigma0(&self) -> f64 {
        self.sigma0
    }
    pub fn dv(&self) -> f64 {
        self.dv
    }

    pub fn center_at(&self, t: f64) -> f64 {
        self.v_mean * (t - self.t0)
    }

    pub fn width_at_time(&self, t: f64) -> f64 {
        self.sigma0.hypot(self.dv * (t - self.t0))
    }

    /// ∂σ/∂t = Δv²(t − t₀)/σ(t).
    pub fn spreading_velocity(&self, t: f64) -> f64 {
        self.dv * self.dv * (t - self.t0) / self.width_at_time(t)
    }

    /// Time after t₀ for the width to double, √3·σ₀/Δv; infinite without spread.
    pub fn doubling_time(&self) -> f64 {
        if self.dv == 0.0 {
            f64::INFINITY
        } else {
            3f64.sqrt() * self.sigma0 / self.dv
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpreadingVelocities {
    pub v_sx: f64,
    pub v_sy: f64,
    /// v_sx / v_sy; infinite for massless packets.
    pub ratio: f64,
    pub narrowness_warning: bool,
}

/// Asymptotic transverse (x) and longitudinal (y) spreading velocities.
pub fn spreading_velocities(disp: &Dispersion, packet: &SpectralPacket) -> Result<SpreadingVelocities> {
    if disp.is_massless() && packet.k0 == 0.0 {
        return Err(domain("massless packet needs a nonzero carrier wavenumber"));
    }
    let k2 = packet.k0 * packet.k0 + disp.kappa * disp.kappa;
    let k = k2.sqrt();
    let v_sx = C * packet.dk_x / k;
    let v_sy = C * packet.dk_y * disp.kappa * disp.kappa / (k2 * k);
    let ratio = if v_sy == 0.0 { f64::INFINITY } else { v_sx / v_sy };
    Ok(SpreadingVelocities { v_sx, v_sy, ratio, narrowness_warning: packet.narrowness_warning() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Transverse,
    Longitudinal,
}

/// Spreading velocity of a minimum-uncertainty packet with initial width Δx(0):
/// c(1 − β²)^{1/2}/(2κΔx₀) transverse, c(1 − β²)^{3/2}/(2κΔx₀) longitudinal.
pub fn min_width_spreading_bound(disp: &Dispersion, k0: f64, delta_x0: f64, dir: Direction) -> Result<f64> {
    if disp.is_massless() {
        return Err(domain("minimum-width bound involves 1/κ and is undefined for massless packets"));
    }
    if !(delta_x0 > 0.0) {
        return Err(domain(format!("initial width must be positive, got {delta_x0}")));
    }
    let b = disp.beta(k0);
    let g = 1.0 - b * b;
    let factor = match dir {
        Direction::Transverse => g.sqrt(),
        Direction::Longitudinal => g * g.sqrt(),
    };
    Ok(C * factor / (2.0 * disp.kappa * delta_x0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlightSpread {
    pub flight_time: f64,
    pub doubling_time: f64,
    /// Width Δy after the flight.
    pub width: f64,
    /// True when the asymptotic v·t estimate was used (t > 3τ₂).
    pub asymptotic: bool,
    pub spreading_velocity: f64,
}

/// Longitudinal width of a minimum packet after flying `distance` at its group velocity.
pub fn flight_spread(disp: &Dispersion, k0: f64, delta_y0: f64, distance: f64) -> Result<FlightSpread> {
    if !(distance >= 0.0) {
        return Err(domain(format!("flight distance must be nonnegative, got {distance}")));
    }
    let v_s = min_width_spreading_bound(disp, k0, delta_y0, Direction::Longitudinal)?;
    let (v0, _) = group_velocity(disp, k0)?;
    if v0 == 0.0 {
        return Err(domain("packet at rest never covers the flight distance"));
    }
    let t = distance / v0;
    let evo = PacketEvolution::new(delta_y0, 0.0, v0, v_s)?;
    let tau2 = evo.doubling_time();
    let asymptotic = t > 3.0 * tau2;
    let width = if asymptotic { v_s * t } else { evo.width_at_time(t) };
    Ok(FlightSpread { flight_time: t, doubling_time: tau2, width, asymptotic, spreading_velocity: v_s })
}

/// Time to collect `threshold` joules from a flux (W/m²) through `area` (m²).
pub fn accumulation_time(threshold: f64, flux: f64, area: f64) -> Result<f64> {
    for (name, v) in [("threshold energy", threshold), ("flux", flux), ("area", area)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(domain(format!("{name} must be positive, got {v}")));
        }
    }
    Ok(threshold / (flux * area))
}

/// eħ/2m for a particle of the given mass (J/T).
pub fn bohr_magneton(mass: f64) -> Result<f64> {
    if !(mass > 0.0) {
        return Err(domain(format!("mass must be positive, got {mass}")));
    }
    Ok(E_CHARGE * HBAR / (2.0 * mass))
}

/// Deflection angle μ_z(∂B_z/∂z)Δt/p_y.
pub fn stern_gerlach_deflection(mu_z: f64, grad_b: f64, dt: f64, p_y: f64) -> Result<f64> {
    if !(p_y > 0.0) {
        return Err(domain(format!("forward momentum must be positive, got {p_y}")));
    }
    Ok(mu_z * grad_b * dt / p_y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{MEV, M_ELECTRON, M_PROTON};

    #[test]
    fn group_velocity_limits() {
        let ph = Dispersion::photon();
        assert_eq!(group_velocity(&ph, 3.0e7).unwrap().0, C);
        let e = Dispersion::new(M_ELECTRON).unwrap();
        assert_eq!(group_velocity(&e, 0.0).unwrap().0, 0.0);
        let (v, _) = group_velocity(&e, e.kappa()).unwrap();
        assert!((v / C - 1.0 / 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn width_evolution() {
        let evo = PacketEvolution::new(2.0, 1.0, 5.0, 0.5).unwrap();
        assert_eq!(evo.width_at_time(1.0), 2.0);
        let t2 = 1.0 + evo.doubling_time();
        assert!((evo.width_at_time(t2) - 4.0).abs() < 1e-12);
        assert!((evo.spreading_velocity(t2) - 3f64.sqrt() / 2.0 * 0.5).abs() < 1e-12);
        assert_eq!(evo.width_at_time(1.0 + 0.3), evo.width_at_time(1.0 - 0.3));
        let still = PacketEvolution::new(2.0, 0.0, 1.0, 0.0).unwrap();
        assert_eq!(still.width_at_time(1e9), 2.0);
    }

    #[test]
    fn spreading_examples() {
        let ph = Dispersion::photon();
        let p = SpectralPacket::new(1e7, 1e4, 2e4, 1e4).unwrap();
        let s = spreading_velocities(&ph, &p).unwrap();
        assert_eq!(s.v_sy, 0.0);
        assert!((s.v_sx - C * 1e4 / 1e7).abs() < 1e-6);
        assert!(s.ratio.is_infinite());

        let e = Dispersion::new(M_ELECTRON).unwrap();
        let slow = SpectralPacket::new(1e-4 * e.kappa(), 1e3, 1e3, 1e3).unwrap();
        let s = spreading_velocities(&e, &slow).unwrap();
        let nr = HBAR * 1e3 / M_ELECTRON;
        assert!((s.v_sx / nr - 1.0).abs() < 1e-7 && (s.v_sy / nr - 1.0).abs() < 1e-7);
        assert!(!s.narrowness_warning);
        let broad = SpectralPacket::new(1e3, 1e3, 1e3, 1e3).unwrap();
        assert!(spreading_velocities(&e, &broad).unwrap().narrowness_warning);

        // β = 0.6 → k0 = 0.75 κ
        let fast = SpectralPacket::new(0.75 * e.kappa(), 1e3, 1e3, 1e3).unwrap();
        let s = spreading_velocities(&e, &fast).unwrap();
        assert!((s.ratio - 1.5625).abs() < 1e-12);
        assert!(spreading_velocities(&ph, &SpectralPacket::new(0.0, 1.0, 1.0, 1.0).unwrap()).is_err());
    }

    #[test]
    fn proton_flight() {
        let p = Dispersion::new(M_PROTON).unwrap();
        let k0 = p.k_from_kinetic_energy(6.0 * MEV).unwrap();
        let v = min_width_spreading_bound(&p, k0, 2e-15, Direction::Longitudinal).unwrap();
        assert!((v / 1.55e7 - 1.0).abs() < 0.01);
        let f = flight_spread(&p, k0, 2e-15, 0.05).unwrap();
        assert!(f.asymptotic);
        assert!((f.width / 0.023 - 1.0).abs() < 0.01);
        let wide = flight_spread(&p, k0, 4e-15, 0.05).unwrap();
        assert!((wide.width / 0.0116 - 1.0).abs() < 0.02);
    }

    #[test]
    fn bound_scaling() {
        let e = Dispersion::new(M_ELECTRON).unwrap();
        let b1 = min_width_spreading_bound(&e, 1e-6 * e.kappa(), 1e-9, Direction::Transverse).unwrap();
        assert!((b1 / (HBAR / (2.0 * M_ELECTRON * 1e-9)) - 1.0).abs() < 1e-9);
        let b2 = min_width_spreading_bound(&e, 1e-6 * e.kappa(), 2e-9, Direction::Transverse).unwrap();
        assert!((b1 / b2 - 2.0).abs() < 1e-12);
        assert!(min_width_spreading_bound(&Dispersion::photon(), 1.0, 1.0, Direction::Transverse).is_err());
    }

    #[test]
    fn accumulation_examples() {
        let t = accumulation_time(2.18 * E_CHARGE, 3.5e-13, 1e-18).unwrap();
        assert!((t / 9.979e11 - 1.0).abs() < 1e-3);
        let t2 = accumulation_time(2.18 * E_CHARGE, 3.5e-13, 1e-14).unwrap();
        assert!((t2 / 1e8 - 1.0).abs() < 0.01);
        let t3 = accumulation_time(2.18 * E_CHARGE, 7e-13, 1e-18).unwrap();
        assert!((t / t3 - 2.0).abs() < 1e-12);
        assert!(accumulation_time(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn stern_gerlach() {
        assert_eq!(stern_gerlach_deflection(0.0, 10.0, 1e-4, 1e-24).unwrap(), 0.0);
        let a = stern_gerlach_deflection(1e-23, 10.0, 1e-4, 1e-24).unwrap();
        let b = stern_gerlach_deflection(-1e-23, 10.0, 1e-4, 1e-24).unwrap();
        assert_eq!(a, -b);
        assert!((bohr_magneton(M_ELECTRON).unwrap() / 9.274e-24 - 1.0).abs() < 1e-3);
        assert!(stern_gerlach_deflection(1.0, 1.0, 1.0, 0.0).is_err());
    }
}

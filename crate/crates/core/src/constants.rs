//! Physical constants in SI units (CODATA 2018; the first five are exact).

/// Speed of light in vacuum, m/s.
pub const C: f64 = 299_792_458.0;
/// Planck constant, J·s.
pub const H: f64 = 6.626_070_15e-34;
/// Reduced Planck constant, J·s.
pub const HBAR: f64 = H / (2.0 * std::f64::consts::PI);
/// Elementary charge, C.
pub const E_CHARGE: f64 = 1.602_176_634e-19;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;
/// Electron rest mass, kg.
pub const M_ELECTRON: f64 = 9.109_383_701_5e-31;
/// Proton rest mass, kg.
pub const M_PROTON: f64 = 1.672_621_923_69e-27;
/// One electronvolt in joules.
pub const EV: f64 = E_CHARGE;
/// One mega-electronvolt in joules.
pub const MEV: f64 = 1.0e6 * EV;
/// Stefan-Boltzmann radiation constant a = 8π⁵k⁴/(15h³c³), J/(m³·K⁴).
pub const RADIATION_A: f64 = 7.565_733_250_280_007e-16;

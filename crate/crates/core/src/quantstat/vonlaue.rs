use std::f64::consts::PI;

use crate::constants::C;
use crate::error::{precondition, Result};

/// Relation between a packet's frequency spread and its length, Δν = r·c/(4πΔy).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LaueConvention {
    /// r = 2π, the average-extension choice under which the cell count equals F.
    AverageExtension,
    /// r = 1, minimum-uncertainty packets.
    MinimumPacket,
    Custom(f64),
}

impl LaueConvention {
    pub fn r(self) -> f64 {
        match self {
            LaueConvention::AverageExtension => 2.0 * PI,
            LaueConvention::MinimumPacket => 1.0,
            LaueConvention::Custom(r) => r,
        }
    }
}

/// Degrees of freedom of a light bundle and their factorization into packet counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VonLaue {
    pub f: f64,
    pub dnu_packet: f64,
    pub n1: f64,
    pub n2: f64,
    pub n3: f64,
    pub product_ratio: f64,
}

/// F = A·l·dν/(a·c) against N1 = dν/Δν (spectral), N2 = A/a (transverse) and
/// N3 = l/(2Δy) (longitudinal).
pub fn vonlaue_dof(
    area: f64,
    length: f64,
    dnu: f64,
    a_focal: f64,
    dy: f64,
    convention: LaueConvention,
) -> Result<VonLaue> {
    let r = convention.r();
    for (name, v) in [("area", area), ("length", length), ("dν", dnu), ("focal area", a_focal), ("Δy", dy), ("r", r)]
    {
        if !(v > 0.0 && v.is_finite()) {
            return Err(precondition(format!("{name} must be positive, got {v}")));
        }
    }
    let f = area * length * dnu / (a_focal * C);
    let dnu_packet = r * C / (4.0 * PI * dy);
    let (n1, n2, n3) = (dnu / dnu_packet, area / a_focal, length / (2.0 * dy));
    Ok(VonLaue { f, dnu_packet, n1, n2, n3, product_ratio: n1 * n2 * n3 / f })
}

use crate::error::{precondition, Result};

const NORM_TOL: f64 = 1e-12;

/// A point on the unit sphere. Construction enforces |v| = 1 within 1e-12.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitVector3 {
    x: f64,
    y: f64,
    z: f64,
}

impl UnitVector3 {
    pub const X: UnitVector3 = UnitVector3 { x: 1.0, y: 0.0, z: 0.0 };
    pub const Y: UnitVector3 = UnitVector3 { x: 0.0, y: 1.0, z: 0.0 };
    pub const Z: UnitVector3 = UnitVector3 { x: 0.0, y: 0.0, z: 1.0 };

    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let n2 = x * x + y * y + z * z;
        if !n2.is_finite() || (n2.sqrt() - 1.0).abs() > NORM_TOL {
            return Err(precondition(format!("vector ({x}, {y}, {z}) has norm {} (expected 1)", n2.sqrt())));
        }
        Ok(Self { x, y, z })
    }

    /// Scales an arbitrary nonzero finite vector onto the sphere.
    pub fn normalize(x: f64, y: f64, z: f64) -> Result<Self> {
        let n = (x * x + y * y + z * z).sqrt();
        if !n.is_finite() || n == 0.0 {
            return Err(precondition(format!("cannot normalize ({x}, {y}, {z})")));
        }
        Ok(Self { x: x / n, y: y / n, z: z / n })
    }

    /// Polar angle from +z and azimuth from +x, both in radians.
    pub fn from_angles(polar: f64, azimuth: f64) -> Self {
        let s = polar.sin();
        Self { x: s * azimuth.cos(), y: s * azimuth.sin(), z: polar.cos() }
    }

    /// Direction at `angle` radians from +x inside the x-y plane.
    pub fn in_plane(angle: f64) -> Self {
        Self { x: angle.cos(), y: angle.sin(), z: 0.0 }
    }

    pub fn x(&self) -> f64 {
        self.x
    }
    pub fn y(&self) -> f64 {
        self.y
    }
    pub fn z(&self) -> f64 {
        self.z
    }
    pub fn components(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(&self, other: &UnitVector3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Angle between two axes; the cosine is clamped so parallel axes give exactly 0 or π.
    pub fn angle_to(&self, other: &UnitVector3) -> f64 {
        self.dot(other).clamp(-1.0, 1.0).acos()
    }

    pub fn neg(&self) -> Self {
        Self { x: -self.x, y: -self.y, z: -self.z }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_off_sphere() {
        assert!(UnitVector3::new(1.0, 1.0, 0.0).is_err());
        assert!(UnitVector3::new(f64::NAN, 0.0, 0.0).is_err());
        assert!(UnitVector3::normalize(0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn angle_is_clamped_for_parallel_axes() {
        let a = UnitVector3::normalize(1.0, 1e-9, 0.0).unwrap();
        assert_eq!(a.angle_to(&a), 0.0);
        assert_eq!(a.angle_to(&a.neg()), std::f64::consts::PI);
    }

    #[test]
    fn from_angles_lands_on_sphere() {
        for i in 0..50 {
            let v = UnitVector3::from_angles(0.07 * i as f64, 0.3 * i as f64);
            let [x, y, z] = v.components();
            assert!(UnitVector3::new(x, y, z).is_ok());
        }
    }
}

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::numkit::UnitVector3;

/// Measurement result of a spin analyzer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Up,
    Down,
}

impl Outcome {
    pub fn value(self) -> f64 {
        match self {
            Outcome::Up => 1.0,
            Outcome::Down => -1.0,
        }
    }

    pub fn from_value(v: i32) -> Result<Self> {
        match v {
            1 => Ok(Outcome::Up),
            -1 => Ok(Outcome::Down),
            _ => Err(domain(format!("outcome must be +1 or -1, got {v}"))),
        }
    }

    pub const BOTH: [Outcome; 2] = [Outcome::Up, Outcome::Down];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TripletM {
    Plus,
    Zero,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PairModel {
    /// Singlet pair with the quantum correlation −cos θ.
    QmSinglet,
    /// Independent spins with isotropically distributed, opposite directions.
    Semiclassical,
    /// Triplet state |1, m⟩ quantized along `axis`. Only expectations are defined.
    Triplet { m: TripletM, axis: UnitVector3 },
}

/// Joint outcome table P(r_A, r_B).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointProbability {
    pub pp: f64,
    pub pm: f64,
    pub mp: f64,
    pub mm: f64,
}

impl JointProbability {
    pub fn get(&self, ra: Outcome, rb: Outcome) -> f64 {
        match (ra, rb) {
            (Outcome::Up, Outcome::Up) => self.pp,
            (Outcome::Up, Outcome::Down) => self.pm,
            (Outcome::Down, Outcome::Up) => self.mp,
            (Outcome::Down, Outcome::Down) => self.mm,
        }
    }

    pub fn total(&self) -> f64 {
        self.pp + self.pm + self.mp + self.mm
    }

    /// Σ r_A r_B P(r_A, r_B).
    pub fn correlation(&self) -> f64 {
        self.pp + self.mm - self.pm - self.mp
    }
}

/// Probability ½(1 + cos θ) of finding spin up along an axis at angle θ to the spin.
pub fn spin_up_probability(theta: f64) -> Result<f64> {
    if !(0.0..=PI).contains(&theta) {
        return Err(domain(format!("angle must lie in [0, π], got {theta}")));
    }
    Ok(0.5 * (1.0 + theta.cos()))
}

fn correlation_strength(model: &PairModel) -> Result<f64> {
    match model {
        PairModel::QmSinglet => Ok(1.0),
        PairModel::Semiclassical => Ok(1.0 / 3.0),
        PairModel::Triplet { .. } => {
            Err(Error::UnsupportedModel("triplet pairs have expectation values only; no joint outcome law".into()))
        }
    }
}

pub fn joint_probability(model: &PairModel, ra: Outcome, rb: Outcome, a: &UnitVector3, b: &UnitVector3) -> Result<f64> {
    let s = correlation_strength(model)?;
    let cos = a.angle_to(b).cos();
    Ok(0.25 * (1.0 - s * ra.value() * rb.value() * cos))
}

pub fn joint_table(model: &PairModel, a: &UnitVector3, b: &UnitVector3) -> Result<JointProbability> {
    Ok(JointProbability {
        pp: joint_probability(model, Outcome::Up, Outcome::Up, a, b)?,
        pm: joint_probability(model, Outcome::Up, Outcome::Down, a, b)?,
        mp: joint_probability(model, Outcome::Down, Outcome::Up, a, b)?,
        mm: joint_probability(model, Outcome::Down, Outcome::Down, a, b)?,
    })
}

/// ⟨r_A r_B⟩ for analyzer axes `a` and `b`.
pub fn expectation(model: &PairModel, a: &UnitVector3, b: &UnitVector3) -> f64 {
    match model {
        PairModel::QmSinglet => -a.angle_to(b).cos(),
        PairModel::Semiclassical => -a.angle_to(b).cos() / 3.0,
        PairModel::Triplet { m, axis } => {
            let az = a.dot(axis);
            let bz = b.dot(axis);
            match m {
                TripletM::Plus | TripletM::Minus => az * bz,
                TripletM::Zero => a.dot(b) - 2.0 * az * bz,
            }
        }
    }
}

/// Analyzer settings a, b (first pair) and a′, b′ (second pair).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshSettings {
    pub a: UnitVector3,
    pub b: UnitVector3,
    pub a2: UnitVector3,
    pub b2: UnitVector3,
}

impl ChshSettings {
    /// Coplanar settings at the given angles (radians) in the x-y plane.
    pub fn coplanar(a: f64, b: f64, a2: f64, b2: f64) -> Self {
        Self {
            a: UnitVector3::in_plane(a),
            b: UnitVector3::in_plane(b),
            a2: UnitVector3::in_plane(a2),
            b2: UnitVector3::in_plane(b2),
        }
    }

    /// The four (A, B) axis pairs in the order ab, ab′, a′b, a′b′.
    pub fn pairs(&self) -> [(UnitVector3, UnitVector3); 4] {
        [(self.a, self.b), (self.a, self.b2), (self.a2, self.b), (self.a2, self.b2)]
    }
}

/// K = |E(a,b) + E(a,b′) + E(a′,b) − E(a′,b′)|.
pub fn chsh_from_expectations(e: [f64; 4]) -> f64 {
    (e[0] + e[1] + e[2] - e[3]).abs()
}

pub fn chsh(model: &PairModel, s: &ChshSettings) -> f64 {
    let p = s.pairs();
    chsh_from_expectations(p.map(|(a, b)| expectation(model, &a, &b)))
}

/// Probability that B observes `rb`, summed over A's outcomes.
pub fn marginal(model: &PairModel, a: &UnitVector3, b: &UnitVector3, rb: Outcome) -> Result<f64> {
    Ok(joint_probability(model, Outcome::Up, rb, a, b)? + joint_probability(model, Outcome::Down, rb, a, b)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn deg(d: f64) -> f64 {
        d.to_radians()
    }

    #[test]
    fn spin_up_examples() {
        assert_eq!(spin_up_probability(0.0).unwrap(), 1.0);
        assert!(spin_up_probability(PI).unwrap().abs() < 1e-16);
        assert!((spin_up_probability(PI / 2.0).unwrap() - 0.5).abs() < 1e-16);
        assert!(spin_up_probability(-0.1).is_err());
        assert!(spin_up_probability(3.2).is_err());
    }

    #[test]
    fn joint_examples() {
        let z = UnitVector3::Z;
        let x = UnitVector3::X;
        let qm = PairModel::QmSinglet;
        assert!((joint_probability(&qm, Outcome::Up, Outcome::Down, &z, &z).unwrap() - 0.5).abs() < 1e-15);
        for ra in Outcome::BOTH {
            for rb in Outcome::BOTH {
                let p = joint_probability(&qm, ra, rb, &z, &x).unwrap();
                assert!((p - 0.25).abs() < 1e-15);
            }
        }
        let sc = joint_probability(&PairModel::Semiclassical, Outcome::Up, Outcome::Up, &z, &z).unwrap();
        assert!((sc - 1.0 / 6.0).abs() < 1e-15);
        let t = PairModel::Triplet { m: TripletM::Zero, axis: z };
        assert!(matches!(joint_probability(&t, Outcome::Up, Outcome::Up, &z, &z), Err(Error::UnsupportedModel(_))));
    }

    #[test]
    fn expectation_examples() {
        let z = UnitVector3::Z;
        assert_eq!(expectation(&PairModel::QmSinglet, &z, &z), -1.0);
        assert!((expectation(&PairModel::Semiclassical, &z, &z.neg()) - 1.0 / 3.0).abs() < 1e-15);
        let t0 = PairModel::Triplet { m: TripletM::Zero, axis: z };
        assert_eq!(expectation(&t0, &z, &z), -1.0);
        let tp = PairModel::Triplet { m: TripletM::Plus, axis: z };
        assert_eq!(expectation(&tp, &z, &z), 1.0);
    }

    #[test]
    fn chsh_examples() {
        let s = ChshSettings::coplanar(0.0, deg(45.0), deg(90.0), deg(-45.0));
        let k = chsh(&PairModel::QmSinglet, &s);
        assert!((k - 2.0 * 2f64.sqrt()).abs() < 1e-12);
        let k = chsh(&PairModel::Semiclassical, &s);
        assert!((k - 2.0 * 2f64.sqrt() / 3.0).abs() < 1e-12);
        let d = ChshSettings::coplanar(0.3, FRAC_PI_4, 0.3, FRAC_PI_4);
        assert!(chsh(&PairModel::QmSinglet, &d) <= 2.0);
    }

    #[test]
    fn marginal_is_half() {
        for m in [PairModel::QmSinglet, PairModel::Semiclassical] {
            for ang in [0.0, 0.4, 1.9, PI] {
                let a = UnitVector3::from_angles(ang, 0.7);
                let p = marginal(&m, &a, &UnitVector3::Z, Outcome::Down).unwrap();
                assert!((p - 0.5).abs() < 1e-12);
            }
        }
    }
}

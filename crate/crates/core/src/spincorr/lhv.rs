use super::models::{chsh_from_expectations, ChshSettings};
use crate::error::{precondition, Result};
use crate::numkit::UnitVector3;

type Response<L> = Box<dyn Fn(&UnitVector3, &L) -> f64 + Send + Sync>;

/// Local hidden-variable model on a finite weighted λ grid.
///
/// Each response maps (own axis, λ) to the probability of outcome +1. The signatures make
/// the factorized form structural: side A never sees b and side B never sees a.
pub struct LhvModel<L> {
    lambdas: Vec<L>,
    weights: Vec<f64>,
    p1: Response<L>,
    p2: Response<L>,
}

impl<L> LhvModel<L> {
    pub fn new(
        lambdas: Vec<L>,
        weights: Vec<f64>,
        p1: impl Fn(&UnitVector3, &L) -> f64 + Send + Sync + 'static,
        p2: impl Fn(&UnitVector3, &L) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if lambdas.is_empty() || lambdas.len() != weights.len() {
            return Err(precondition(format!("λ grid has {} points but {} weights", lambdas.len(), weights.len())));
        }
        if let Some(w) = weights.iter().find(|w| !(**w >= 0.0) || !w.is_finite()) {
            return Err(precondition(format!("λ weight {w} is negative or not finite")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(precondition(format!("λ weights sum to {total}, expected 1")));
        }
        Ok(Self { lambdas, weights, p1: Box::new(p1), p2: Box::new(p2) })
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    fn mean_outcome(resp: &Response<L>, axis: &UnitVector3, lambda: &L, side: &str) -> Result<f64> {
        let p = resp(axis, lambda);
        if !(0.0..=1.0).contains(&p) {
            return Err(precondition(format!("response probability {p} on side {side} is outside [0, 1]")));
        }
        Ok(2.0 * p - 1.0)
    }

    /// E(a, b) = Σ_λ f(λ) Ā(a, λ) B̄(b, λ).
    pub fn expectation(&self, a: &UnitVector3, b: &UnitVector3) -> Result<f64> {
        let mut e = 0.0;
        for (lambda, w) in self.lambdas.iter().zip(&self.weights) {
            let abar = Self::mean_outcome(&self.p1, a, lambda, "A")?;
            let bbar = Self::mean_outcome(&self.p2, b, lambda, "B")?;
            e += w * abar * bbar;
        }
        Ok(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LhvAudit {
    pub k: f64,
    pub expectations: [f64; 4],
    pub bound_satisfied: bool,
}

/// Evaluates K for a local model and checks it against the bound 2 (slack 1e-9).
pub fn lhv_chsh_audit<L>(model: &LhvModel<L>, settings: &ChshSettings) -> Result<LhvAudit> {
    let p = settings.pairs();
    let mut e = [0.0; 4];
    for (slot, (a, b)) in e.iter_mut().zip(p.iter()) {
        *slot = model.expectation(a, b)?;
    }
    let k = chsh_from_expectations(e);
    Ok(LhvAudit { k, expectations: e, bound_satisfied: k <= 2.0 + 1e-9 })
}

/// Semiclassical pair as a local model: λ is the source spin σ on an equal-area sphere grid
/// (midpoints in cos θ × midpoints in azimuth); A answers ½(1 + σ·a), B answers ½(1 − σ·b).
pub fn semiclassical_lhv(n_polar: usize, n_azimuth: usize) -> Result<LhvModel<UnitVector3>> {
    if n_polar == 0 || n_azimuth == 0 {
        return Err(precondition("sphere grid needs at least one cell per direction"));
    }
    let mut lambdas = Vec::with_capacity(n_polar * n_azimuth);
    for i in 0..n_polar {
        let z = -1.0 + (2.0 * i as f64 + 1.0) / n_polar as f64;
        for j in 0..n_azimuth {
            let phi = 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / n_azimuth as f64;
            lambdas.push(UnitVector3::from_angles(z.acos(), phi));
        }
    }
    let w = 1.0 / lambdas.len() as f64;
    let weights = vec![w; lambdas.len()];
    LhvModel::new(
        lambdas,
        weights,
        |a, s| (0.5 * (1.0 + s.dot(a))).clamp(0.0, 1.0),
        |b, s| (0.5 * (1.0 - s.dot(b))).clamp(0.0, 1.0),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spincorr::models::{chsh, expectation, PairModel};

    fn sign(x: f64) -> f64 {
        if x >= 0.0 {
            1.0
        } else {
            -1.0
        }
    }

    #[test]
    fn deterministic_anticorrelated_model() {
        let grid = semiclassical_lhv(20, 20).unwrap();
        let lambdas = grid.lambdas.clone();
        let w = grid.weights.clone();
        let m = LhvModel::new(
            lambdas,
            w,
            |a, l: &UnitVector3| 0.5 * (1.0 + sign(l.dot(a))),
            |b, l: &UnitVector3| 0.5 * (1.0 - sign(l.dot(b))),
        )
        .unwrap();
        for t in 0..20 {
            let s = ChshSettings::coplanar(0.1 * t as f64, 0.7 + 0.2 * t as f64, 1.5, -0.3 * t as f64);
            let audit = lhv_chsh_audit(&m, &s).unwrap();
            assert!(audit.bound_satisfied, "K = {}", audit.k);
        }
    }

    #[test]
    fn constant_response_saturates() {
        let m = LhvModel::new(vec![()], vec![1.0], |_, _| 1.0, |_, _| 1.0).unwrap();
        let s = ChshSettings::coplanar(0.0, 1.0, 2.0, 3.0);
        let audit = lhv_chsh_audit(&m, &s).unwrap();
        assert_eq!(audit.k, 2.0);
        assert!(audit.bound_satisfied);
    }

    #[test]
    fn semiclassical_grid_matches_closed_form() {
        let m = semiclassical_lhv(60, 60).unwrap();
        for deg in [0.0f64, 30.0, 60.0, 90.0, 135.0, 180.0] {
            let a = UnitVector3::in_plane(0.0);
            let b = UnitVector3::in_plane(deg.to_radians());
            let e = m.expectation(&a, &b).unwrap();
            assert!((e - expectation(&PairModel::Semiclassical, &a, &b)).abs() < 1e-3);
        }
        let s = ChshSettings::coplanar(0.0, 45f64.to_radians(), 90f64.to_radians(), -45f64.to_radians());
        let audit = lhv_chsh_audit(&m, &s).unwrap();
        assert!(audit.k <= 4.0 / 3.0);
        assert!((audit.k - chsh(&PairModel::Semiclassical, &s)).abs() < 3e-3);
    }

    #[test]
    fn invalid_models_rejected() {
        assert!(LhvModel::new(vec![(), ()], vec![0.5, 0.6], |_, _| 0.5, |_, _| 0.5).is_err());
        assert!(LhvModel::new(vec![(), ()], vec![1.5, -0.5], |_, _| 0.5, |_, _| 0.5).is_err());
        let m = LhvModel::new(vec![()], vec![1.0], |_, _| 1.2, |_, _| 0.5).unwrap();
        let s = ChshSettings::coplanar(0.0, 1.0, 2.0, 3.0);
        assert!(lhv_chsh_audit(&m, &s).is_err());
    }
}

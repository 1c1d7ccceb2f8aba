use num_complex::Complex64;
use std::ops::{Add, Mul, Sub};

use crate::error::{precondition, Error, Result};

const MAX_DEPTH: u32 = 30;
const MIN_DEPTH: u32 = 3;

/// Values adaptive Simpson can integrate: reals and complex numbers.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn magnitude(&self) -> f64;
    fn is_finite_value(&self) -> bool;
}

impl QuadValue for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl QuadValue for Complex64 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn is_finite_value(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` with absolute tolerance `tol`.
///
/// Each panel is accepted once the Richardson difference satisfies |ΔS| ≤ 15·tol_panel,
/// after at least three forced subdivisions. Exhausting depth 30 is an error.
pub fn integrate_1d<T, F>(f: F, a: f64, b: f64, tol: f64) -> Result<T>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(precondition(format!("integration bounds must satisfy a < b, got [{a}, {b}]")));
    }
    if !(tol > 0.0) {
        return Err(precondition(format!("tolerance must be positive, got {tol}")));
    }
    let fa = eval(&f, a)?;
    let fb = eval(&f, b)?;
    let m = 0.5 * (a + b);
    let fm = eval(&f, m)?;
    let whole = simpson(a, b, fa, fm, fb);
    step(&f, a, b, fa, fm, fb, whole, tol, 0)
}

fn eval<T: QuadValue, F: Fn(f64) -> T>(f: &F, x: f64) -> Result<T> {
    let v = f(x);
    if v.is_finite_value() {
        Ok(v)
    } else {
        Err(precondition(format!("integrand is not finite at x = {x}")))
    }
}

fn simpson<T: QuadValue>(a: f64, b: f64, fa: T, fm: T, fb: T) -> T {
    (fa + fm * 4.0 + fb) * ((b - a) / 6.0)
}

#[allow(clippy::too_many_arguments)]
fn step<T: QuadValue, F: Fn(f64) -> T>(
    f: &F,
    a: f64,
    b: f64,
    fa: T,
    fm: T,
    fb: T,
    whole: T,
    tol: f64,
    depth: u32,
) -> Result<T> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = eval(f, lm)?;
    let frm = eval(f, rm)?;
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth >= MIN_DEPTH && delta.magnitude() <= 15.0 * tol {
        return Ok(left + right + delta * (1.0 / 15.0));
    }
    if depth >= MAX_DEPTH {
        return Err(Error::Numerical(format!(
            "adaptive Simpson did not converge on [{a}, {b}] within depth {MAX_DEPTH}"
        )));
    }
    let l = step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1)?;
    let r = step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1)?;
    Ok(l + r)
}

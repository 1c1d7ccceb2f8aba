use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{precondition, Result};

const MIN_POINTS: usize = 8;
const MAX_DFT_POINTS: usize = 4096;
const NORM_TOL: f64 = 1e-8;
const EDGE_FRACTION: f64 = 1e-6;

/// Uniform 1-D grid: `x_i = start + i·spacing`, `i < points`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    start: f64,
    spacing: f64,
    points: usize,
}

impl Grid1D {
    pub fn new(start: f64, spacing: f64, points: usize) -> Result<Self> {
        if !(spacing > 0.0) || !spacing.is_finite() || !start.is_finite() {
            return Err(precondition(format!("grid spacing must be positive and finite, got {spacing}")));
        }
        if points < MIN_POINTS {
            return Err(precondition(format!("grid needs at least {MIN_POINTS} points, got {points}")));
        }
        Ok(Self { start, spacing, points })
    }

    /// Grid of `points` nodes symmetric about `center` with the given spacing.
    pub fn centered(center: f64, spacing: f64, points: usize) -> Result<Self> {
        Self::new(center - 0.5 * spacing * (points as f64 - 1.0), spacing, points)
    }

    pub fn start(&self) -> f64 {
        self.start
    }
    pub fn spacing(&self) -> f64 {
        self.spacing
    }
    pub fn points(&self) -> usize {
        self.points
    }
    pub fn x(&self, i: usize) -> f64 {
        self.start + i as f64 * self.spacing
    }
    pub fn end(&self) -> f64 {
        self.x(self.points - 1)
    }
    pub fn xs(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.points).map(move |i| self.x(i))
    }

    /// Same spacing and node positions within a relative 1e-12.
    pub fn matches(&self, other: &Grid1D) -> bool {
        let scale = self.spacing.max(other.spacing);
        self.points == other.points
            && (self.spacing - other.spacing).abs() <= 1e-12 * scale
            && (self.start - other.start).abs() <= 1e-12 * scale.max(self.start.abs())
    }
}

/// Complex samples of a one-dimensional wavefunction on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction1D {
    grid: Grid1D,
    values: Vec<Complex64>,
}

impl SampledFunction1D {
    pub fn new(grid: Grid1D, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.points() {
            return Err(precondition(format!(
                "sample count {} does not match grid size {}",
                values.len(),
                grid.points()
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(precondition("samples must be finite"));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = grid.xs().map(f).collect();
        Self::new(grid, values)
    }

    /// Gaussian with |ψ|² of standard deviation `sigma`, carrier wavenumber `k0`,
    /// normalized on the grid.
    pub fn gaussian(grid: Grid1D, center: f64, sigma: f64, k0: f64) -> Result<Self> {
        if !(sigma > 0.0) {
            return Err(precondition(format!("gaussian width must be positive, got {sigma}")));
        }
        let f = Self::from_fn(grid, |x| {
            let u = x - center;
            Complex64::from_polar((-u * u / (4.0 * sigma * sigma)).exp(), k0 * x)
        })?;
        f.normalized()
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// Σ|ψ|²·spacing.
    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.spacing()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sq();
        if !(n > 0.0) {
            return Err(precondition("cannot normalize the zero function"));
        }
        let s = 1.0 / n.sqrt();
        Ok(Self { grid: self.grid, values: self.values.iter().map(|v| v * s).collect() })
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self { grid: self.grid, values: self.values.iter().map(|v| v * factor).collect() }
    }

    pub fn same_grid(&self, other: &SampledFunction1D) -> bool {
        self.grid.matches(&other.grid)
    }

    /// ⟨x⟩ and Δx from |ψ|² weights (normalization taken from the samples).
    pub fn position_moments(&self) -> (f64, f64) {
        let w: Vec<f64> = self.values.iter().map(|v| v.norm_sqr()).collect();
        weighted_moments(self.grid.xs(), &w)
    }

    pub(crate) fn check_normalized(&self, what: &str) -> Result<()> {
        let n = self.norm_sq();
        if (n - 1.0).abs() > NORM_TOL {
            return Err(precondition(format!("{what} must be normalized (Σ|ψ|²·dx = {n})")));
        }
        Ok(())
    }
}

fn weighted_moments(xs: impl Iterator<Item = f64>, w: &[f64]) -> (f64, f64) {
    let xs: Vec<f64> = xs.collect();
    let total: f64 = w.iter().sum();
    let mean = xs.iter().zip(w).map(|(x, w)| x * w).sum::<f64>() / total;
    let var = xs.iter().zip(w).map(|(x, w)| (x - mean).powi(2) * w).sum::<f64>() / total;
    (mean, var.max(0.0).sqrt())
}

/// Angular wavenumbers of the discrete transform, `2πj/(N·dx)` with indices wrapped
/// to the symmetric range.
pub fn wavenumbers(grid: &Grid1D) -> Vec<f64> {
    let n = grid.points();
    let dk = 2.0 * PI / (n as f64 * grid.spacing());
    (0..n)
        .map(|j| {
            let jj = if j <= n / 2 { j as i64 } else { j as i64 - n as i64 };
            jj as f64 * dk
        })
        .collect()
}

fn check_dft_size(n: usize) -> Result<()> {
    if n > MAX_DFT_POINTS {
        return Err(precondition(format!("direct transform limited to {MAX_DFT_POINTS} points, got {n}")));
    }
    Ok(())
}

/// Direct O(N²) transform φ_j = Σ_n ψ_n e^{−i k_j (x_n − x_0)}.
pub fn dft(values: &[Complex64]) -> Result<Vec<Complex64>> {
    check_dft_size(values.len())?;
    Ok(direct(values, -1.0))
}

/// Inverse of [`dft`], including the 1/N factor.
pub fn inverse_dft(spectrum: &[Complex64]) -> Result<Vec<Complex64>> {
    check_dft_size(spectrum.len())?;
    let n = spectrum.len() as f64;
    Ok(direct(spectrum, 1.0).into_iter().map(|v| v / n).collect())
}

fn direct(values: &[Complex64], sign: f64) -> Vec<Complex64> {
    let n = values.len();
    // Twiddle table indexed by (j·m) mod N keeps the phases exact for large products.
    let twiddle: Vec<Complex64> =
        (0..n).map(|t| Complex64::from_polar(1.0, sign * 2.0 * PI * t as f64 / n as f64)).collect();
    (0..n)
        .map(|j| {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut idx = 0usize;
            for v in values {
                acc += v * twiddle[idx];
                idx += j;
                if idx >= n {
                    idx -= n;
                }
            }
            acc
        })
        .collect()
}

/// Position and wavenumber standard deviations of a normalized sampled function.
pub fn fourier_widths(psi: &SampledFunction1D) -> Result<(f64, f64)> {
    psi.check_normalized("fourier_widths input")?;
    let vals = psi.values();
    let peak = vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let edge = vals[0].norm().max(vals[vals.len() - 1].norm());
    if edge > EDGE_FRACTION * peak {
        return Err(precondition(format!(
            "boundary amplitude {edge:e} exceeds {EDGE_FRACTION:e} of the peak {peak:e}"
        )));
    }
    let (_, dx) = psi.position_moments();
    let spectrum = dft(vals)?;
    let w: Vec<f64> = spectrum.iter().map(|v| v.norm_sqr()).collect();
    let (_, dk) = weighted_moments(wavenumbers(psi.grid()).into_iter(), &w);
    Ok((dx, dk))
}

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{domain, precondition, Result};
use crate::numkit::{Grid1D, SampledFunction1D};

const MAX_PARTICLES: usize = 3;
const MAX_POINTS: usize = 256;
const NORM_TOL: f64 = 1e-8;
const SYMMETRY_TOL: f64 = 1e-10;
const DEGENERATE_NORM: f64 = 1e-12;
const PRODUCT_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    None,
    Symmetric,
    Antisymmetric,
}

impl Symmetry {
    fn sign(self) -> Option<f64> {
        match self {
            Symmetry::None => None,
            Symmetry::Symmetric => Some(1.0),
            Symmetry::Antisymmetric => Some(-1.0),
        }
    }
}

/// Ψ(x₁, …, x_N) on grid^N, stored row-major with x₁ as the slowest index.
#[derive(Debug, Clone, PartialEq)]
pub struct ManyBodyWavefunction {
    particles: usize,
    grid: Grid1D,
    amplitudes: Vec<Complex64>,
    symmetry: Symmetry,
}

impl ManyBodyWavefunction {
    pub fn new(particles: usize, grid: Grid1D, amplitudes: Vec<Complex64>, symmetry: Symmetry) -> Result<Self> {
        if particles == 0 || particles > MAX_PARTICLES {
            return Err(precondition(format!("particle count {particles} outside 1..={MAX_PARTICLES}")));
        }
        if grid.points() > MAX_POINTS {
            return Err(precondition(format!("grid has {} points, limit {MAX_POINTS}", grid.points())));
        }
        let expected = grid.points().pow(particles as u32);
        if amplitudes.len() != expected {
            return Err(precondition(format!("tensor has {} entries, expected {expected}", amplitudes.len())));
        }
        let psi = Self { particles, grid, amplitudes, symmetry };
        let n = psi.norm_sq();
        if (n - 1.0).abs() > NORM_TOL {
            return Err(precondition(format!("Σ|Ψ|²·dx^N = {n}, expected 1")));
        }
        if let Some(sign) = symmetry.sign() {
            let dev = psi.max_transposition_deviation(sign);
            let scale = psi.amplitudes.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if dev > SYMMETRY_TOL * scale.max(1.0) {
                return Err(precondition(format!(
                    "tensor violates its {symmetry:?} tag by {dev:e} under particle exchange"
                )));
            }
        }
        Ok(psi)
    }

    /// Normalized product φ₁(x₁)…φ_N(x_N) of single-particle functions on one grid.
    pub fn product(factors: &[SampledFunction1D]) -> Result<Self> {
        let first = factors.first().ok_or_else(|| precondition("product needs at least one factor"))?;
        if factors.iter().any(|f| !f.same_grid(first)) {
            return Err(precondition("product factors must share one grid"));
        }
        let grid = *first.grid();
        let p = grid.points();
        let n = factors.len();
        if n > MAX_PARTICLES {
            return Err(precondition(format!("particle count {n} outside 1..={MAX_PARTICLES}")));
        }
        let total = p.pow(n as u32);
        let mut amps = Vec::with_capacity(total);
        for flat in 0..total {
            let mut v = Complex64::new(1.0, 0.0);
            let mut rem = flat;
            for f in factors.iter().rev() {
                v *= f.values()[rem % p];
                rem /= p;
            }
            amps.push(v);
        }
        let s = unnormalized_norm(&amps, grid.spacing(), n);
        if !(s > 0.0) {
            return Err(precondition("product of the factors vanishes"));
        }
        let scale = 1.0 / s.sqrt();
        amps.iter_mut().for_each(|z| *z *= scale);
        Self::new(n, grid, amps, Symmetry::None)
    }

    pub fn particles(&self) -> usize {
        self.particles
    }
    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }
    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sq(&self) -> f64 {
        unnormalized_norm(&self.amplitudes, self.grid.spacing(), self.particles)
    }

    /// Amplitude at a multi-index (one grid index per particle).
    pub fn at(&self, idx: &[usize]) -> Complex64 {
        self.amplitudes[self.flat(idx)]
    }

    fn flat(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &i| acc * self.grid.points() + i)
    }

    fn unflat(&self, mut flat: usize) -> [usize; MAX_PARTICLES] {
        let p = self.grid.points();
        let mut idx = [0; MAX_PARTICLES];
        for slot in idx[..self.particles].iter_mut().rev() {
            *slot = flat % p;
            flat /= p;
        }
        idx
    }

    /// Tensor with particle labels permuted: result(x₁…x_N) = Ψ(x_{π(1)}…x_{π(N)}).
    fn permuted(&self, perm: &[usize]) -> Vec<Complex64> {
        (0..self.amplitudes.len())
            .map(|flat| {
                let idx = self.unflat(flat);
                let mut src = [0; MAX_PARTICLES];
                for (slot, &p) in src.iter_mut().zip(perm) {
                    *slot = idx[p];
                }
                self.amplitudes[self.flat(&src[..self.particles])]
            })
            .collect()
    }

    fn max_transposition_deviation(&self, sign: f64) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.particles {
            for j in i + 1..self.particles {
                let mut perm: Vec<usize> = (0..self.particles).collect();
                perm.swap(i, j);
                let swapped = self.permuted(&perm);
                for (a, b) in self.amplitudes.iter().zip(&swapped) {
                    dev = dev.max((a - b * sign).norm());
                }
            }
        }
        dev
    }
}

fn unnormalized_norm(amps: &[Complex64], dx: f64, particles: usize) -> f64 {
    amps.iter().map(|z| z.norm_sqr()).sum::<f64>() * dx.powi(particles as i32)
}

/// All permutations of 0..n with their parity sign.
fn permutations(n: usize) -> Vec<(Vec<usize>, f64)> {
    fn rec(prefix: &mut Vec<usize>, rest: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..rest.len() {
            let v = rest.remove(i);
            prefix.push(v);
            rec(prefix, rest, out);
            prefix.pop();
            rest.insert(i, v);
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut (0..n).collect(), &mut out);
    out.into_iter()
        .map(|p| {
            let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            let parity = if inversions % 2 == 0 { 1.0 } else { -1.0 };
            (p, parity)
        })
        .collect()
}

/// Sums Ψ over all label permutations with sign^parity and renormalizes by the computed norm.
///
/// An input already carrying the requested tag is returned unchanged up to rounding.
pub fn symmetrize(psi: &ManyBodyWavefunction, sign: i32) -> Result<ManyBodyWavefunction> {
    let target = match sign {
        1 => Symmetry::Symmetric,
        -1 => Symmetry::Antisymmetric,
        _ => return Err(precondition(format!("symmetrization sign must be ±1, got {sign}"))),
    };
    if psi.symmetry != Symmetry::None && psi.symmetry != target {
        return Err(precondition(format!("input is already tagged {:?}", psi.symmetry)));
    }
    let mut acc = vec![Complex64::new(0.0, 0.0); psi.amplitudes.len()];
    for (perm, parity) in permutations(psi.particles) {
        let w = if sign == 1 { 1.0 } else { parity };
        for (a, v) in acc.iter_mut().zip(psi.permuted(&perm)) {
            *a += v * w;
        }
    }
    let n = unnormalized_norm(&acc, psi.grid.spacing(), psi.particles);
    if n < DEGENERATE_NORM {
        return Err(domain(format!("symmetrized function vanishes (norm² {n:e}); identical antisymmetrized factors")));
    }
    let scale = 1.0 / n.sqrt();
    acc.iter_mut().for_each(|z| *z *= scale);
    ManyBodyWavefunction::new(psi.particles, psi.grid, acc, target)
}

/// ρ(x) = N·∫|Ψ(x, x₂, …)|² dx₂…; integrates to N.
pub fn one_particle_density(psi: &ManyBodyWavefunction) -> Result<Vec<f64>> {
    if psi.symmetry == Symmetry::None {
        return Err(precondition("one-particle density needs a symmetric or antisymmetric function"));
    }
    let p = psi.grid.points();
    let rest = p.pow(psi.particles as u32 - 1);
    let w = psi.particles as f64 * psi.grid.spacing().powi(psi.particles as i32 - 1);
    Ok((0..p).map(|i| w * psi.amplitudes[i * rest..(i + 1) * rest].iter().map(|z| z.norm_sqr()).sum::<f64>()).collect())
}

fn require_two(psi: &ManyBodyWavefunction) -> Result<()> {
    if psi.particles != 2 {
        return Err(precondition(format!("operation needs two particles, got {}", psi.particles)));
    }
    Ok(())
}

/// P(x₁ | x₂) = |Ψ(x₁, x₂)|² / ∫|Ψ(x, x₂)|² dx, with x₂ given as a grid index.
pub fn conditional_probability(psi: &ManyBodyWavefunction, x2: usize) -> Result<Vec<f64>> {
    require_two(psi)?;
    let p = psi.grid.points();
    if x2 >= p {
        return Err(domain(format!("conditioning index {x2} outside grid of {p} points")));
    }
    let col: Vec<f64> = (0..p).map(|i| psi.amplitudes[i * p + x2].norm_sqr()).collect();
    let denom = col.iter().sum::<f64>() * psi.grid.spacing();
    if denom <= 1e-12 {
        return Err(domain(format!("no density at conditioning point (∫|Ψ|²dx₁ = {denom:e})")));
    }
    Ok(col.into_iter().map(|v| v / denom).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProductFormTest {
    pub is_product: bool,
    pub schmidt_residual: f64,
    /// Singular values of Ψ·dx in descending order; their squares sum to 1.
    pub singular_values: Vec<f64>,
}

/// Detects entanglement from the singular values of the amplitude matrix.
pub fn product_form_test(psi: &ManyBodyWavefunction) -> Result<ProductFormTest> {
    require_two(psi)?;
    let p = psi.grid.points();
    let dx = psi.grid.spacing();
    let m = DMatrix::from_row_slice(p, p, &psi.amplitudes) * Complex64::new(dx, 0.0);
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    let residual = s.iter().skip(1).map(|v| v * v).sum();
    Ok(ProductFormTest {
        is_product: s.get(1).copied().unwrap_or(0.0) < PRODUCT_THRESHOLD,
        schmidt_residual: residual,
        singular_values: s,
    })
}

/// ∫|ψ₁||ψ₂| dx; how strongly two packets overlap. No coalescence threshold is implied.
pub fn overlap_measure(a: &SampledFunction1D, b: &SampledFunction1D) -> Result<f64> {
    if !a.same_grid(b) {
        return Err(precondition("overlap needs functions on the same grid"));
    }
    Ok(a.values().iter().zip(b.values()).map(|(x, y)| x.norm() * y.norm()).sum::<f64>() * a.grid().spacing())
}

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{domain, precondition, Result};
use crate::numkit::RandomStream;

const MAX_DIM: usize = 64;
const NORM_TOL: f64 = 1e-10;
const UNITARY_TOL: f64 = 1e-12;

/// Coefficients a_{lk} of a two-particle expansion over A's basis w_l and B's basis u_k,
/// with real overall constant C normalized so that C²·Σ|a_{lk}|² = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteCoefficients {
    a: DMatrix<Complex64>,
    c: f64,
}

impl BipartiteCoefficients {
    pub fn new(a: DMatrix<Complex64>, c: f64) -> Result<Self> {
        let (l, k) = a.shape();
        if l == 0 || k == 0 || l > MAX_DIM || k > MAX_DIM {
            return Err(precondition(format!("coefficient matrix {l}×{k} outside 1..={MAX_DIM}")));
        }
        if !(c > 0.0) || !c.is_finite() {
            return Err(precondition(format!("normalization constant must be positive, got {c}")));
        }
        let total = c * c * a.iter().map(|z| z.norm_sqr()).sum::<f64>();
        if (total - 1.0).abs() > NORM_TOL {
            return Err(precondition(format!("C²·Σ|a|² = {total}, expected 1")));
        }
        Ok(Self { a, c })
    }

    /// Rescales C so the invariant holds for the given matrix.
    pub fn normalized(a: DMatrix<Complex64>) -> Result<Self> {
        let s: f64 = a.iter().map(|z| z.norm_sqr()).sum();
        if !(s > 0.0) {
            return Err(precondition("coefficient matrix is zero"));
        }
        Self::new(a, 1.0 / s.sqrt())
    }

    /// Singlet pair expanded in a shared spin basis: a = [[0, 1/√2], [−1/√2, 0]], C = 1.
    pub fn singlet() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let a = DMatrix::from_row_slice(
            2,
            2,
            &[Complex64::new(0.0, 0.0), Complex64::new(h, 0.0), Complex64::new(-h, 0.0), Complex64::new(0.0, 0.0)],
        );
        Self { a, c: 1.0 }
    }

    /// Random complex Gaussian coefficients of the given shape, normalized.
    pub fn random(rows: usize, cols: usize, rng: &mut RandomStream) -> Result<Self> {
        Self::normalized(gaussian_matrix(rows, cols, rng))
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.a
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn shape(&self) -> (usize, usize) {
        self.a.shape()
    }

    /// Σ_m |a_{mn}|² for every column n.
    pub fn column_norms(&self) -> Vec<f64> {
        self.a.column_iter().map(|col| col.iter().map(|z| z.norm_sqr()).sum()).collect()
    }
}

fn gaussian_matrix(rows: usize, cols: usize, rng: &mut RandomStream) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re, im)
    })
}

/// Random unitary from Gram-Schmidt on a complex Gaussian matrix (two passes per column).
pub fn random_unitary(dim: usize, rng: &mut RandomStream) -> Result<DMatrix<Complex64>> {
    if dim == 0 || dim > MAX_DIM {
        return Err(precondition(format!("unitary dimension {dim} outside 1..={MAX_DIM}")));
    }
    let mut m = gaussian_matrix(dim, dim, rng);
    for j in 0..dim {
        for _ in 0..2 {
            for i in 0..j {
                let proj = m.column(i).dotc(&m.column(j));
                let ci = m.column(i).clone_owned();
                m.column_mut(j).axpy(-proj, &ci, Complex64::new(1.0, 0.0));
            }
        }
        let n = m.column(j).norm();
        m.column_mut(j).unscale_mut(n);
    }
    Ok(m)
}

fn check_unitary(u: &DMatrix<Complex64>, dim: usize) -> Result<()> {
    if u.shape() != (dim, dim) {
        return Err(precondition(format!("unitary must be {dim}×{dim}, got {:?}", u.shape())));
    }
    let g = u.adjoint() * u;
    let dev = g
        .iter()
        .enumerate()
        .map(|(idx, z)| {
            let (i, j) = (idx % dim, idx / dim);
            let target = if i == j { 1.0 } else { 0.0 };
            (z - Complex64::new(target, 0.0)).norm()
        })
        .fold(0.0, f64::max);
    if dev > UNITARY_TOL {
        return Err(precondition(format!("matrix is not unitary: max |U†U − I| = {dev:e}")));
    }
    Ok(())
}

/// Re-expresses the coefficients after A changes apparatus: w_m = Σ_k U_{mk} w′_k gives
/// b_{lk} = Σ_j a_{jk} U_{jl}, i.e. b = Uᵀa.
pub fn basis_change(coeffs: &BipartiteCoefficients, u: &DMatrix<Complex64>) -> Result<BipartiteCoefficients> {
    let (l, _) = coeffs.shape();
    check_unitary(u, l)?;
    let b = u.transpose() * &coeffs.a;
    BipartiteCoefficients::new(b, coeffs.c)
}

/// Probability C²|a_{mn}|² that A finds w_m and B finds u_n.
pub fn bipartite_joint(coeffs: &BipartiteCoefficients, m: usize, n: usize) -> Result<f64> {
    let (l, k) = coeffs.shape();
    if m >= l || n >= k {
        return Err(domain(format!("index ({m}, {n}) outside {l}×{k} coefficient matrix")));
    }
    Ok(coeffs.c * coeffs.c * coeffs.a[(m, n)].norm_sqr())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoSignalingReport {
    /// B's marginal for u_n with A's original apparatus.
    pub p_with_apparatus: f64,
    /// Same marginal after A switches to the apparatus related by U.
    pub p_changed_apparatus: f64,
    /// Marginal when A does nothing, via projection onto the correlated states.
    pub p_no_apparatus: f64,
    pub max_deviation: f64,
}

/// B's marginal probability for outcome u_n computed three ways.
pub fn no_signaling_audit(
    coeffs: &BipartiteCoefficients,
    u: &DMatrix<Complex64>,
    n: usize,
) -> Result<NoSignalingReport> {
    let (l, k) = coeffs.shape();
    if n >= k {
        return Err(domain(format!("B index {n} outside {k} basis states")));
    }
    let c2 = coeffs.c * coeffs.c;
    let p_with = c2 * (0..l).map(|m| coeffs.a[(m, n)].norm_sqr()).sum::<f64>();
    let changed = basis_change(coeffs, u)?;
    let p_changed = c2 * (0..l).map(|m| changed.a[(m, n)].norm_sqr()).sum::<f64>();
    let p_none = projection_marginal(coeffs, n);
    let vals = [p_with, p_changed, p_none];
    let mut dev: f64 = 0.0;
    for i in 0..3 {
        for j in i + 1..3 {
            dev = dev.max((vals[i] - vals[j]).abs());
        }
    }
    Ok(NoSignalingReport {
        p_with_apparatus: p_with,
        p_changed_apparatus: p_changed,
        p_no_apparatus: p_none,
        max_deviation: dev,
    })
}

// The symmetrized state lives in span{w_l(1)u_k(2)} ⊕ span{w_l(2)u_k(1)}. A and B's
// single-particle functions do not overlap, so these 2LK product states are orthonormal.
// Index (block, l, k) ↦ block·LK + l·K + k.
fn projection_marginal(coeffs: &BipartiteCoefficients, n: usize) -> f64 {
    let (l, k) = coeffs.shape();
    let lk = l * k;
    let idx = |block: usize, li: usize, ki: usize| block * lk + li * k + ki;
    let mut psi = DVector::<Complex64>::zeros(2 * lk);
    for li in 0..l {
        for ki in 0..k {
            let v = coeffs.a[(li, ki)] * coeffs.c;
            psi[idx(0, li, ki)] += v;
            psi[idx(1, li, ki)] += v;
        }
    }
    let mut total = 0.0;
    for block in 0..2 {
        // ζ_n on the A side paired with u_n on the B side, in this block's particle labels.
        let mut z = DVector::<Complex64>::zeros(2 * lk);
        for m in 0..l {
            z[idx(block, m, n)] = coeffs.a[(m, n)];
        }
        let zz = z.norm_squared();
        if zz == 0.0 {
            continue;
        }
        let overlap = psi.dotc(&z);
        total += 0.5 * overlap.norm_sqr() / zz;
    }
    total
}

//! Shared numerical substrate.

mod combinatorics;
mod fourier;
mod quad;
mod rng;
mod vector;

pub use combinatorics::{binomial_pmf, ln_factorial, ln_gamma, log_binomial, poisson_pmf};
pub use fourier::{dft, fourier_widths, inverse_dft, wavenumbers, Grid1D, SampledFunction1D};
pub use quad::{integrate_1d, QuadValue};
pub use rng::{sample_isotropic_direction, RandomStream};
pub use vector::UnitVector3;

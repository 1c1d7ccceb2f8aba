//! Discretized many-particle wavefunctions on a shared 1-D grid.

mod reduction;
mod region;
mod wavefunction;

pub use reduction::{reduce_expansion, ExpansionCoefficients, ReductionMode};
pub use region::{region_action_probabilities, region_weight, RegionProbabilities};
pub use wavefunction::{
    conditional_probability, one_particle_density, overlap_measure, product_form_test, symmetrize,
    ManyBodyWavefunction, ProductFormTest, Symmetry,
};

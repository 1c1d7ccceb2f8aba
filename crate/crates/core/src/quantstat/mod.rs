//! Quantum statistics of wavepackets in a cavity: mode counting, occupancy
//! distributions, balance relations, entropy, von Laue bundle factorization
//! and photon-count fluctuations.

mod balance;
mod counts;
mod entropy;
mod modes;
mod occupancy;
mod vonlaue;

pub use balance::{balance_residual, einstein_balance, BalanceParams, EinsteinBalance};
pub use counts::{
    binomial_fold_check, count_distribution, count_moments, count_variance, packet_quanta_dist, sample_count_variance,
    thin, total_variation, unequal_fold_residual, CountDistribution, CountSample,
};
pub use entropy::{entropy, entropy_and_derivatives, EntropyReport};
pub use modes::{mode_count, photon_mode_count, planck_energy_density, spectral_distribution, CavitySpec, ModeBin};
pub use occupancy::{occupancy, OccupancyDistribution};
pub use vonlaue::{vonlaue_dof, LaueConvention, VonLaue};

/// Packet statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Statistics {
    Bose,
    Fermi,
    Boltzmann,
}

impl Statistics {
    pub fn name(self) -> &'static str {
        match self {
            Statistics::Bose => "bose",
            Statistics::Fermi => "fermi",
            Statistics::Boltzmann => "boltzmann",
        }
    }
}

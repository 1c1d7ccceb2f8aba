//! Deterministic numerical laboratory for the quantitative side of a
//! realist reading of quantum mechanics.
//!
//! The crate is organised by subject:
//!
//! * [`numkit`]: unit vectors, counter-based random streams, adaptive
//!   quadrature, log-space combinatorics and discrete Fourier moments.
//! * [`spincorr`]: EPR pair models, CHSH evaluation, local hidden-variable
//!   audits and no-signaling checks on bipartite expansions.
//! * [`configspace`]: discretised two- and three-particle wavefunctions,
//!   symmetrisation, densities, entanglement detection and reduction.
//! * [`actionprob`]: first-order transition probabilities of a large packet
//!   meeting a small localized scatterer.
//! * [`wavepacket`]: closed-form spreading kinematics, coherence length,
//!   accumulation time and Stern-Gerlach deflection.
//! * [`quantstat`]: mode counting, Bose/Fermi occupancies, balance
//!   relations, entropy and photon-count statistics.
//!
//! All functions are pure given their inputs. Anything random takes an
//! explicit [`numkit::RandomStream`].

pub mod actionprob;
pub mod configspace;
pub mod constants;
mod error;
pub mod numkit;
pub mod quantstat;
pub mod spincorr;
pub mod wavepacket;

pub use error::{Error, Result};

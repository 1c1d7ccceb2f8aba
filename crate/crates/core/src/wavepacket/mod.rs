//! Free wavepacket kinematics: group velocity, width evolution, spreading
//! velocities and their photon limits, coherence length, accumulation time
//! and Stern-Gerlach deflection.

mod coherence;
mod kinematics;

pub use coherence::{coherence_profile, free_evolve, schrodinger_evolve, visibility, CoherenceProfile};
pub use kinematics::{
    accumulation_time, bohr_magneton, flight_spread, group_velocity, min_width_spreading_bound, spreading_velocities,
    stern_gerlach_deflection, Direction, Dispersion, FlightSpread, PacketEvolution, SpectralPacket,
    SpreadingVelocities, NARROWNESS_LIMIT,
};

//! Correlated spin pairs: closed-form and sampled joint statistics, CHSH,
//! local hidden-variable audits and no-signaling checks on bipartite expansions.

mod bipartite;
mod lhv;
mod models;
mod sampling;

pub use bipartite::{
    basis_change, bipartite_joint, no_signaling_audit, random_unitary, BipartiteCoefficients, NoSignalingReport,
};
pub use lhv::{lhv_chsh_audit, semiclassical_lhv, LhvAudit, LhvModel};
pub use models::{
    chsh, chsh_from_expectations, expectation, joint_probability, joint_table, marginal, spin_up_probability,
    ChshSettings, JointProbability, Outcome, PairModel, TripletM,
};
pub use sampling::{coincidence_expectation, sample_counts, sample_pair, PairCounts};

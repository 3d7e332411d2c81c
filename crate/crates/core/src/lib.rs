//! Spatial evolutionary games on the torus: payoffs, lattices, the
//! replicator equation, exact stochastic simulation, one-dimensional
//! interface tracking and phase-diagram analysis.

pub mod analysis;
pub mod boundary;
pub mod dynamics;
pub mod io;
pub mod lattice;
pub mod meanfield;
pub mod payoff;
pub mod rng;

pub use dynamics::{
    run_biased_voter, run_direct, run_ensemble, run_graphical, run_graphical_negative,
    InitialCondition, Method, SimError, SimParams, SnapshotPolicy, Trajectory,
};
pub use lattice::{Configuration, LatticeError, LatticeSpec, Strategy};
pub use meanfield::{integrate_replicator, replicator_regime, ReplicatorRegime};
pub use payoff::{PayoffError, PayoffMatrix};

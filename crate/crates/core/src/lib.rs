//! Moment-based minimum empirical divergence policies for stochastic bandits
//! with rewards in `[0, 1]`.
//!
//! The crate is organised bottom-up:
//!
//! - [`distribution`]: finitely supported distributions on `[0, 1]`.
//! - [`divergence`]: `D_min(F, mu)` through its concave one-dimensional dual.
//! - [`moments`]: truncated moment sequences, their upper and lower principal
//!   representations, and the moment-constrained divergence `D^(d)_min`.
//! - [`policies`]: the DMED family (exact, moment-based, mixed) and a UCB1
//!   baseline as incremental state machines.
//! - [`simulator`]: seeded arms, replication runner and regret accounting.
//! - [`table`]: the beta-arm divergence table and the five-arm regret preset.

pub mod distribution;
pub mod divergence;
mod error;
pub mod moments;
pub mod policies;
pub mod simulator;
pub mod table;

pub use distribution::DiscreteDistribution;
pub use divergence::{dmin_discrete, dmin_empirical_plugin, DivergenceResult};
pub use error::{Error, Result};
pub use moments::{dminm, lower_principal, upper_principal, Feasibility, FeasibilityStatus, MomentVector};
pub use policies::{ArmStats, PolicyKind, PolicyState};
pub use simulator::{ArmSpec, RegretSummary, RegretTrace};

/// Support points within this distance of 1 are treated as exactly 1.
pub const TAU_ONE: f64 = 1e-12;

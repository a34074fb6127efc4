//! Geometry engine for linear point billiards.
//!
//! The crate builds binary collision subspaces of an `N`-body configuration
//! space under the mass metric, measures principal angles between them,
//! simulates specular billiard trajectories against subspace arrangements,
//! and evaluates the collision bounds that follow from those angles.
//!
//! Monte-Carlo loops run on rayon when the `parallel` feature is enabled
//! (the default) and fall back to a plain sequential loop otherwise. Every
//! stochastic routine takes an explicit seed and derives one stream per
//! trial, so results do not depend on the number of worker threads.

pub mod bounds;
pub mod collision;
pub mod error;
pub mod exec;
pub mod jacobi;
pub mod linalg;
pub mod policy;
pub mod rng;
pub mod sim;
pub mod spherical;
pub mod suite;

pub use error::{Error, Result};
pub use exec::Execution;
pub use linalg::{AngleVector, MassVector, Metric, Subspace};
pub use policy::NumericPolicy;

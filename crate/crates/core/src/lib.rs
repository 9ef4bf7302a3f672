//! Exact simulation and schedule optimization for quantum partial search:
//! locating the block that holds a single marked item with the
//! schedule `G1 G2^j2 G1^j1` of global and blockwise Grover iterations.
//!
//! * [`model`]: three-amplitude invariant-subspace engine, valid for any `N`.
//! * [`statevector`]: dense `N`-amplitude engine used to certify the reduced one.
//! * [`optimizer`]: optimal coefficients, rounded and brute-force integer schedules.
//! * [`analysis`]: random-pick and interrupted-search baselines, lower bounds.
//!
//! Everything is generic over [`Real`]; the aliases below fix `f64`.

pub mod analysis;
pub mod error;
pub mod model;
pub mod optimizer;
pub mod scalar;
pub mod statevector;

pub use error::{Error, Result};
pub use model::{Iteration, Schedule};
pub use optimizer::BlockCount;
pub use scalar::Real;

pub type Geometry = model::Geometry<f64>;
pub type ReducedState = model::ReducedState<f64>;
pub type EigenPair = model::EigenPair<f64>;
pub type FullState = statevector::FullState<f64>;
pub type OptimalParameters = optimizer::OptimalParameters<f64>;
pub type ExactSchedule = optimizer::ExactSchedule<f64>;
pub type ComparisonRow = analysis::ComparisonRow<f64>;

pub type Geometry32 = model::Geometry<f32>;
pub type ReducedState32 = model::ReducedState<f32>;

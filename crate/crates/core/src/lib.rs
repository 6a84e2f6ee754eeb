//! Mixed fractional Poisson processes, the risk processes built on them, and
//! their ruin probabilities.
//!
//! Every closed form here has a Monte Carlo counterpart so the two can be
//! checked against each other; see the `acceptance` test target of the CLI
//! crate for the full cross-check suite.

pub mod compound;
pub mod ensemble;
pub mod error;
pub mod mfpp;
pub mod mittag_leffler;
pub mod numerics;
pub mod risk;
pub mod ruin;
pub mod stats;
pub mod subordinators;

pub use error::{Error, Result};
pub use mittag_leffler::{ml2, ml3, ml3_asymptotic, MLParams};
pub use numerics::{Grid, GridFunction};
pub use stats::Estimate;
pub use subordinators::{InversePath, MixedParams, SubordinatorPath};

/// Library version, stamped into every emitted artifact.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

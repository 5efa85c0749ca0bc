//! Simulation of one-dimensional discrete-time quantum walks driven by the
//! general three-parameter coin.
//!
//! The walk advances by the amplitude recurrence in [`evolution`]; a dense
//! step-unitary engine in the same module serves as an independent oracle.
//! [`analysis`] measures asymmetry and runs parameter sweeps, and
//! [`entanglement`] decides coin–position separability.

// `!(x <= tol)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod coin;
pub mod dense;
pub mod entanglement;
pub mod error;
pub mod evolution;
pub mod state;

pub use coin::{check_unitary, make_coin, named_coin, AngleMode, CoinMatrix, CoinParams, NamedCoin};
pub use error::{Error, Result};
pub use evolution::{evolve, evolve_dense, run_walk, step_recurrence, Walk};
pub use state::{initial_state, LatticeSpec, ProbabilityDistribution, WalkerState};

pub use num_complex::Complex64;

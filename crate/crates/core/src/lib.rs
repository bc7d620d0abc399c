//! Simulator of an Ising machine built from spin-Hall-driven magnetic
//! tunnel junctions.
//!
//! * [`magnetics`]: stochastic macrospin LLG integrator for the free layer.
//! * [`device`]: device parameters, read-out, switching curves, energy.
//! * [`ising`]: couplings, majority-vote currents, annealed update sweeps.
//! * [`problems`]: Max-cut, digit images and graph coloring encoders, plus
//!   the brute-force ground-state oracle.
//! * [`commands`]: file-based front end used by the `mtj-ising` binary.

pub mod commands;
pub mod device;
pub mod error;
pub mod exec;
pub mod ising;
pub mod magnetics;
pub mod problems;
pub mod rng;

pub use error::{Error, Result};
pub use exec::Execution;
pub use rng::RngStream;


//! Synthesis, metrics, simulation and rank bounds for distributed Dicke-state
//! preparation circuits.
//!
//! Everything here runs without `std`; file formats and the command-line
//! front end live in the `dqc` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod binom;
pub mod blocks;
pub mod bounds;
pub mod builder;
pub mod circuit;
pub mod error;
pub mod partition;
pub mod sim;

#[cfg(test)]
mod testutil;

pub use builder::{build, build_2qpu, build_pqpu, verify, Build, DickeSpec};
pub use circuit::{Circuit, Gate, GateKind, Qubit, QubitRole};
pub use error::{Error, Result};
pub use partition::{communication_complexity, validate_locality, Partition};
pub use sim::{dicke_state, run, StateVector};

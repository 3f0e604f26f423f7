//! Digital simulation of the time-dependent BCS pairing model on a
//! star-connectivity (central-spin) qubit register.
//!
//! The crate is organised bottom-up:
//!
//! * [`hamiltonian`] builds Pauli strings, pseudo-spin operators, the Gaudin
//!   family and the restricted BCS Hamiltonian as dense matrices.
//! * [`circuit`] is the gate-level IR together with the Heisenberg / Ising
//!   two-qubit fragments and their controlled versions.
//! * [`compiler`] routes one Trotter step onto the star register.
//! * [`trotter`] plans time grids and evaluates splitting error bounds.
//! * [`simulator`] executes circuits on statevectors or density matrices with
//!   amplitude-phase damping.
//! * [`meanfield`] solves the uniform gap equation and prepares `|BCS>`.
//! * [`oracle`] propagates states by exact diagonalization.
//! * [`experiment`] wires everything into the quench experiment.
//!
//! Qubit 0 is the least significant bit of every basis index.

pub mod circuit;
pub mod compiler;
mod error;
pub mod experiment;
pub mod hamiltonian;
pub mod linalg;
pub mod meanfield;
pub mod oracle;
pub mod simulator;
pub mod trotter;

pub use error::{Error, Result};

//! Statevector simulation of the variational Hamiltonian ansatz for the
//! two-dimensional Fermi-Hubbard model under quasi-static gate
//! over-rotations, with a Trotterized adiabatic baseline.

pub mod adiabatic;
pub mod basis;
pub mod circuit;
pub mod eigen;
pub mod engine;
mod error;
pub mod experiments;
pub mod hamiltonian;
pub mod lattice;
pub mod noise;
pub mod optimizer;
pub mod sparse;
pub mod statevector;
pub mod vha;

pub use error::{Error, Result};
pub use lattice::{LatticeSpec, Spin};
pub use statevector::StateVector;

//! Global quantum-transport efficiency on tree-like networks.
//!
//! The central quantity is the long-time average of the node-averaged return
//! amplitude, `chi = sum_E rho(E)^2`, where `rho(E)` is the degeneracy of
//! eigenvalue `E` of a tight-binding Hamiltonian divided by the network size.
//! Small `chi` means efficient transport, `chi` of order one means the
//! excitation stays put.
//!
//! The crate is organised bottom-up:
//!
//! - [`graph`]: tree construction (chains, stars, dendrimers, Vicsek fractals,
//!   scale-free trees), validation, leaf/parent statistics and the edge-list
//!   file format.
//! - [`spectral`]: Hamiltonians with functionality-dependent on-site
//!   potentials, dense diagonalization, degeneracy binning, an exact rational
//!   nullity oracle and the leaf-pair eigenstates at `E* = H(1)`.
//! - [`efficiency`]: `chi`, its spectral and structural lower bounds,
//!   infinite-size closed forms, the Riemann zeta function, critical-exponent
//!   fits and time-domain return quantities.
//! - [`ensemble`]: deterministic parallel Monte Carlo over scale-free trees.
//! - [`format`]: CSV/JSON helpers shared by the command-line front end.

pub mod efficiency;
pub mod ensemble;
mod error;
pub mod format;
pub mod graph;
pub mod spectral;

pub use error::{Error, Result};

/// Largest network handed to the dense eigensolver (and dense Hamiltonian
/// construction).
pub const DEFAULT_DENSE_LIMIT: usize = 4096;

/// Largest network the deterministic generators will build.
pub const DEFAULT_MAX_NODES: usize = 1 << 24;

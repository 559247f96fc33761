//! One-excitation dynamics of open XX spin chains with bond impurities at
//! the chain ends.
//!
//! The crate diagonalizes the N×N single-magnon Hamiltonian, measures
//! localization (inverse participation ratio) and pairwise entanglement
//! (Wootters concurrence) of its eigenstates, evolves a localized
//! excitation in time, and runs the end-to-end transfer experiments:
//! fidelity landscapes, refocus-time detection and the search for the
//! impurity strength that maximizes transfer fidelity at t ≈ N/2.
//!
//! Units: |J| = 1, ħ = 1, times in 1/|J|. Site and state indices are
//! 0-based throughout the API.
//!
//! ```
//! use xxchain::{chain::ChainSpec, dynamics::fidelity, spectral::decompose_spec};
//!
//! let dec = decompose_spec(&ChainSpec::mirror_impurities(31, 0.6)).unwrap();
//! assert!(fidelity(&dec, 18.5) > 0.9);
//! ```

pub mod chain;
pub mod dynamics;
pub mod error;
pub mod measures;
pub mod oracle;
mod par;
pub mod protocols;
pub mod spectral;
mod tridiag;

pub use chain::{build_hamiltonian, ChainSpec, Impurity, TridiagonalHamiltonian};
pub use error::{Error, Result};
pub use spectral::{decompose_spec, eigendecompose, SpectralDecomposition};

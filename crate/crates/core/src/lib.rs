//! Arrow-indexed Fredkin spin chain.
//!
//! Exact counting of arrow-indexed Dyck walks, the frustration-free
//! Hamiltonian on the `6^n` chain space and its spectrum, entanglement
//! entropy by Schmidt counting and by reduced density matrices, and
//! correlators of disconnection excitations.

pub mod count;
pub mod entanglement;
pub mod error;
pub mod hamiltonian;
pub mod spectra;
pub mod verify;
pub mod walk;

pub use error::{Error, Result};

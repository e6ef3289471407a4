//! Spectra, eigenstates and time evolution of the chain Hamiltonian.
//!
//! Every term of the Hamiltonian either is diagonal or rewrites a connected
//! segment into another with the same end indices, so the off-diagonal
//! sparsity graph splits the space into many small invariant blocks. The
//! solvers work block by block: dense diagonalization for small blocks and
//! restarted Lanczos with deflation for large ones.

mod blocks;
mod evolve;
mod lanczos;
mod predict;
mod solver;
mod state;

pub use blocks::BlockDecomposition;
pub use evolve::{time_evolve, Propagator};
pub use lanczos::{krylov_expm, lowest_eigenpairs, LanczosConfig, RitzPair};
pub use predict::{predicted_ground_classes, GroundClass};
pub use solver::{ground_space, ground_space_with, low_spectrum, GroundSpace, SolverConfig, SpectrumSlice};
pub use state::{
    build_excitation, build_highly_excited, build_path_state, highly_excited_segments, random_excitation_segments,
    ComplexState, ExcitationSegment, StateVector,
};

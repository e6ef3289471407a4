//! Entanglement of the ground states and localization of the disconnection
//! excitations.
//!
//! The entropy of a uniform ground state is computed two ways: from walk
//! counts through the Schmidt weights at the cut, and from the singular values
//! of a numeric state vector. Correlators are evaluated by Schrödinger
//! evolution of the state and of `B|psi>`.

mod correlator;
mod entropy;
mod operators;
mod schmidt;

pub use correlator::{
    connected_correlator, connected_correlator_with, localization_report, ComponentPartition, CorrelatorRow,
    LocalizationGrid, LocalizationReport, SupportRelation, CORRELATOR_DENSE_CAP,
};
pub use entropy::{
    area_law_entropy, entropy_asymptotic_phase1, entropy_from_distribution, entropy_from_state, phase1_entropy_offset,
    schmidt_spectrum, shannon_entropy, EntropyMethod, EntropyReport, EULER_GAMMA, SCHMIDT_CUTOFF,
};
pub use operators::{LocalOperatorSpec, SiteOperator, SiteOperatorKind};
pub use schmidt::{
    schmidt_distribution, schmidt_distribution_with, supported_classes, ClassLabel, CountRoute, SchmidtDistribution,
    SchmidtEntry, EXACT_LENGTH_CAP,
};

//! Ground-state count predicted from move orbits, without diagonalization.

use crate::error::Result;
use crate::hamiltonian::{hf_terms, BoundaryVariant, PhaseParams, TermKind};
use crate::walk::{all_connected, partition_into_classes, MoveSet, Path};

/// One zero-energy orbit: its representative endpoints and size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundClass {
    pub start_index: u8,
    pub end_index: u8,
    pub size: usize,
    pub representative: Path,
}

/// Orbits of connected walks under the active moves that contain no path
/// penalized by a diagonal term. Each one carries exactly one kernel vector
/// (its uniform superposition).
pub fn predicted_ground_classes(n: usize, params: PhaseParams, variant: BoundaryVariant) -> Result<Vec<GroundClass>> {
    let diagonal_terms: Vec<_> = hf_terms(n, params, variant)?
        .into_iter()
        .filter(|t| {
            matches!(
                t.kind,
                TermKind::LeftBoundary | TermKind::RightBoundary | TermKind::Balancing | TermKind::Disconnection
            )
        })
        .collect();
    let penalized = |p: &Path| {
        let idx = p.encode();
        diagonal_terms.iter().any(|t| t.diagonal_on(n, idx) > 0.0)
    };
    let moves = MoveSet::for_lambda1(params.lambda1);
    let classes = partition_into_classes(&all_connected(n), moves)?;
    Ok(classes
        .into_iter()
        .filter(|c| !c.iter().any(penalized))
        .map(|c| GroundClass {
            start_index: c[0].first_index().unwrap_or(0),
            end_index: c[0].last_index().unwrap_or(0),
            size: c.len(),
            representative: c[0].clone(),
        })
        .collect())
}

//! The chain Hamiltonian as a sum of local projectors.
//!
//! `H = H_left + H_bulk + H_right + lambda2 * sum_j B_{j,j+1} + H_disc`, where
//! the bulk projects out the antisymmetric combinations of the local moves
//! (the `x31 x13 <-> x32 x23` one weighted by `lambda1`), `B` penalizes
//! `x13 x32` and `x23 x31`, and `H_disc` counts disconnections.

mod local;
mod sparse;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use local::{assemble, projector_onto, LocalOperator, LocalState, LocalTerm, TermKind, MAX_CHAIN_SITES};
pub use sparse::{SparseOperator, DENSE_DIM_CAP};

use crate::count::Phase;
use crate::error::{Error, Result};
use crate::walk::Step;

/// Couplings `lambda1` (mixing move) and `lambda2` (balancing term).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseParams {
    pub lambda1: f64,
    pub lambda2: f64,
}

impl PhaseParams {
    pub fn new(lambda1: f64, lambda2: f64) -> Result<PhaseParams> {
        if !(lambda1 >= 0.0 && lambda2 >= 0.0) || !lambda1.is_finite() || !lambda2.is_finite() {
            return Err(Error::InvalidInput(format!(
                "couplings must be finite and nonnegative, got ({lambda1}, {lambda2})"
            )));
        }
        Ok(PhaseParams { lambda1, lambda2 })
    }

    pub fn for_phase(phase: Phase) -> PhaseParams {
        let (lambda1, lambda2) = phase.couplings();
        PhaseParams { lambda1, lambda2 }
    }

    pub fn is_frustration_free(&self) -> bool {
        self.lambda1 == 0.0 || self.lambda2 == 0.0
    }

    pub fn phase(&self) -> Option<Phase> {
        Phase::from_couplings(self.lambda1, self.lambda2)
    }
}

/// Choice of chain-end terms.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundaryVariant {
    /// Single-site floor terms plus the three-site `x13 x32 x21` / `x12 x23 x31` terms.
    #[default]
    Standard,
    /// Floor terms plus single-site terms that pin both ends to arrow index 2.
    IndexTwoEnds,
}

const U_PLUS: [Step; 3] = [Step::X12, Step::X23, Step::X32];
const U_MINUS: [Step; 3] = [Step::X12, Step::X21, Step::X12];
const D_PLUS: [Step; 3] = [Step::X23, Step::X32, Step::X21];
const D_MINUS: [Step; 3] = [Step::X21, Step::X12, Step::X21];

fn projector(state: LocalState) -> Arc<LocalOperator> {
    Arc::new(LocalOperator::projector(&state).expect("fixed local states are normalizable"))
}

fn single(steps: &[Step]) -> Arc<LocalOperator> {
    projector(LocalState::product(1, steps))
}

fn require_sites(n: usize, min: usize, what: &str) -> Result<()> {
    if n < min {
        return Err(Error::InvalidInput(format!(
            "{what} needs at least {min} sites, got {n}"
        )));
    }
    Ok(())
}

/// Local terms of the connected bulk: `U`, `D` on triples, `W` on pairs.
pub fn bulk_connected_terms(n: usize, params: PhaseParams) -> Result<Vec<LocalTerm>> {
    require_sites(n, 2, "bulk term")?;
    let u = projector(LocalState::antisymmetric(1, &U_PLUS, &U_MINUS));
    let d = projector(LocalState::antisymmetric(1, &D_PLUS, &D_MINUS));
    let w = projector(LocalState::antisymmetric(
        1,
        &[Step::X12, Step::X21],
        &[Step::X13, Step::X31],
    ));
    let w_mix = projector(LocalState::antisymmetric(
        1,
        &[Step::X31, Step::X13],
        &[Step::X32, Step::X23],
    ));
    let mut terms = Vec::new();
    for j in 1..=n.saturating_sub(2) {
        terms.push(LocalTerm::new(TermKind::UpMove, j, 1.0, u.clone()));
        terms.push(LocalTerm::new(TermKind::DownMove, j, 1.0, d.clone()));
    }
    for j in 1..n {
        terms.push(LocalTerm::new(TermKind::PairMove, j, 1.0, w.clone()));
        if params.lambda1 != 0.0 {
            terms.push(LocalTerm::new(TermKind::MixingMove, j, params.lambda1, w_mix.clone()));
        }
    }
    Ok(terms)
}

/// Local terms at the two chain ends.
pub fn boundary_terms(n: usize, variant: BoundaryVariant) -> Result<Vec<LocalTerm>> {
    let left = TermKind::LeftBoundary;
    let right = TermKind::RightBoundary;
    let mut terms: Vec<LocalTerm> = [Step::X21, Step::X31, Step::X32]
        .into_iter()
        .map(|s| LocalTerm::new(left, 1, 1.0, single(&[s])))
        .chain(
            [Step::X12, Step::X13, Step::X23]
                .into_iter()
                .map(|s| LocalTerm::new(right, n, 1.0, single(&[s]))),
        )
        .collect();
    match variant {
        BoundaryVariant::Standard => {
            require_sites(n, 3, "standard boundary")?;
            terms.push(LocalTerm::new(left, 1, 1.0, single(&[Step::X13, Step::X32, Step::X21])));
            terms.push(LocalTerm::new(
                right,
                n - 2,
                1.0,
                single(&[Step::X12, Step::X23, Step::X31]),
            ));
        }
        BoundaryVariant::IndexTwoEnds => {
            require_sites(n, 1, "boundary")?;
            for s in [Step::X12, Step::X13] {
                terms.push(LocalTerm::new(left, 1, 1.0, single(&[s])));
            }
            for s in [Step::X21, Step::X31] {
                terms.push(LocalTerm::new(right, n, 1.0, single(&[s])));
            }
        }
    }
    Ok(terms)
}

/// `coefficient * sum_j B_{j,j+1}`.
pub fn balancing_terms(n: usize, coefficient: f64) -> Result<Vec<LocalTerm>> {
    require_sites(n, 2, "balancing term")?;
    let a = single(&[Step::X13, Step::X32]);
    let b = single(&[Step::X23, Step::X31]);
    Ok((1..n)
        .flat_map(|j| {
            [
                LocalTerm::new(TermKind::Balancing, j, coefficient, a.clone()),
                LocalTerm::new(TermKind::Balancing, j, coefficient, b.clone()),
            ]
        })
        .collect())
}

/// Every adjacent step pair that does not connect; 24 of them.
pub fn disconnected_pairs() -> Vec<[Step; 2]> {
    Step::ALL
        .into_iter()
        .flat_map(|l| {
            Step::ALL
                .into_iter()
                .filter(move |r| !l.connects_to(*r))
                .map(move |r| [l, r])
        })
        .collect()
}

/// One diagonal term per junction equal to the sum of the 24 mismatched-pair
/// projectors there.
pub fn disconnected_terms(n: usize) -> Result<Vec<LocalTerm>> {
    require_sites(n, 2, "disconnection term")?;
    let pairs = disconnected_pairs();
    let op = Arc::new(LocalOperator::diagonal_indicator(2, pairs.iter().map(|p| &p[..])));
    Ok((1..n)
        .map(|j| LocalTerm::new(TermKind::Disconnection, j, 1.0, op.clone()))
        .collect())
}

/// All local terms of the full Hamiltonian.
pub fn hf_terms(n: usize, params: PhaseParams, variant: BoundaryVariant) -> Result<Vec<LocalTerm>> {
    require_sites(n, 3, "the full Hamiltonian")?;
    if !params.is_frustration_free() {
        log::warn!(
            "lambda1 = {} and lambda2 = {} are both positive; the Hamiltonian is not frustration-free",
            params.lambda1,
            params.lambda2
        );
    }
    let mut terms = boundary_terms(n, variant)?;
    terms.extend(bulk_connected_terms(n, params)?);
    if params.lambda2 != 0.0 {
        terms.extend(balancing_terms(n, params.lambda2)?);
    }
    terms.extend(disconnected_terms(n)?);
    Ok(terms)
}

pub fn build_bulk_connected(n: usize, params: PhaseParams) -> Result<SparseOperator> {
    assemble(n, &bulk_connected_terms(n, params)?)
}

pub fn build_boundary(n: usize, variant: BoundaryVariant) -> Result<SparseOperator> {
    assemble(n, &boundary_terms(n, variant)?)
}

pub fn build_balancing(n: usize) -> Result<SparseOperator> {
    assemble(n, &balancing_terms(n, 1.0)?)
}

pub fn build_disconnected(n: usize) -> Result<SparseOperator> {
    assemble(n, &disconnected_terms(n)?)
}

/// The full Hamiltonian on `n >= 3` sites.
pub fn build_hf(n: usize, params: PhaseParams, variant: BoundaryVariant) -> Result<SparseOperator> {
    assemble(n, &hf_terms(n, params, variant)?)
}

/// Diagonal projector onto a mismatched pair at junction `(j, j+1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConservedOperator {
    /// 1-based left site of the junction.
    pub junction: usize,
    pub left: Step,
    pub right: Step,
}

impl ConservedOperator {
    pub fn to_sparse(&self, n: usize) -> Result<SparseOperator> {
        projector_onto(n, &LocalState::product(self.junction, &[self.left, self.right]))
    }

    /// Eigenvalue (0 or 1) on a basis state.
    pub fn value_on(&self, n: usize, index: usize) -> f64 {
        let stride = 6usize.pow((n - self.junction - 1) as u32);
        let pair = (index / stride) % 36;
        let want = self.left.code() as usize * 6 + self.right.code() as usize;
        if pair == want {
            1.0
        } else {
            0.0
        }
    }
}

/// The `24 (n-1)` conserved diagonal projectors.
pub fn conserved_operators(n: usize) -> Result<Vec<ConservedOperator>> {
    require_sites(n, 2, "conserved operators")?;
    let pairs = disconnected_pairs();
    Ok((1..n)
        .flat_map(|junction| {
            pairs.iter().map(move |[left, right]| ConservedOperator {
                junction,
                left: *left,
                right: *right,
            })
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk::Path;

    fn basis(text: &str) -> usize {
        Path::parse(text).unwrap().encode()
    }

    #[test]
    fn disconnection_diagonal_counts_mismatches() {
        let n = 4;
        let h = build_disconnected(n).unwrap();
        assert!(h.is_diagonal());
        let diag = h.diagonal();
        for (i, &v) in diag.iter().enumerate() {
            assert_eq!(v, Path::decode(n, i).disconnections().len() as f64);
        }
        let h5 = build_disconnected(5).unwrap();
        assert_eq!(h5.get(basis("1,2 2,1 2,3 3,2 2,1"), basis("1,2 2,1 2,3 3,2 2,1")), 1.0);
        let h3 = build_disconnected(3).unwrap();
        assert_eq!(h3.get(basis("1,2 1,2 1,2"), basis("1,2 1,2 1,2")), 2.0);
    }

    #[test]
    fn up_projector_kernel() {
        let terms: Vec<LocalTerm> = bulk_connected_terms(3, PhaseParams::new(0.0, 0.0).unwrap())
            .unwrap()
            .into_iter()
            .filter(|t| t.kind == TermKind::UpMove)
            .collect();
        let h = assemble(3, &terms).unwrap();
        let mut v = vec![0.0; h.dim()];
        v[basis("1,2 2,3 3,2")] = 1.0;
        v[basis("1,2 2,1 1,2")] = 1.0;
        let hv = h.apply_vec(&v);
        assert!(hv.iter().all(|x| x.abs() < 1e-14));
    }

    #[test]
    fn two_sites_only_pair_moves() {
        let terms = bulk_connected_terms(2, PhaseParams::new(1.0, 0.0).unwrap()).unwrap();
        assert!(terms
            .iter()
            .all(|t| matches!(t.kind, TermKind::PairMove | TermKind::MixingMove)));
        let terms = bulk_connected_terms(4, PhaseParams::new(0.0, 0.0).unwrap()).unwrap();
        assert!(terms.iter().all(|t| t.kind != TermKind::MixingMove));
    }

    #[test]
    fn balancing_values() {
        let b = build_balancing(2).unwrap();
        assert_eq!(b.get(basis("1,3 3,2"), basis("1,3 3,2")), 1.0);
        assert_eq!(b.get(basis("1,3 3,1"), basis("1,3 3,1")), 0.0);
        let b4 = build_balancing(4).unwrap();
        let v = basis("2,3 3,2 2,3 3,2");
        assert_eq!(b4.row(v).count(), 0);
    }

    #[test]
    fn boundary_requirements() {
        assert!(build_boundary(2, BoundaryVariant::Standard).is_err());
        assert!(build_boundary(2, BoundaryVariant::IndexTwoEnds).is_ok());
        assert!(build_hf(2, PhaseParams::new(1.0, 0.0).unwrap(), BoundaryVariant::Standard).is_err());
        assert_eq!(boundary_terms(4, BoundaryVariant::Standard).unwrap().len(), 8);
        assert_eq!(boundary_terms(4, BoundaryVariant::IndexTwoEnds).unwrap().len(), 10);
    }

    #[test]
    fn conserved_count_and_commutation() {
        for n in 2..=4 {
            assert_eq!(conserved_operators(n).unwrap().len(), 24 * (n - 1));
        }
        let h = build_hf(3, PhaseParams::new(1.0, 0.0).unwrap(), BoundaryVariant::Standard).unwrap();
        for j in 1..=2 {
            let mut d = SparseOperator::zero(h.dim());
            for o in conserved_operators(3).unwrap().iter().filter(|o| o.junction == j) {
                d = d.add_scaled(&o.to_sparse(3).unwrap(), 1.0).unwrap();
            }
            assert!(h.commutator(&d).unwrap().max_abs() < 1e-12);
        }
        // a pair move on sites 1,2 trades x31 for x21 next to a mismatch at junction 2
        let o = ConservedOperator {
            junction: 2,
            left: Step::X31,
            right: Step::X23,
        };
        let c = h.commutator(&o.to_sparse(3).unwrap()).unwrap();
        assert!((c.max_abs() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn negative_coupling_rejected() {
        assert!(PhaseParams::new(-1.0, 0.0).is_err());
        assert!(!PhaseParams::new(1.0, 1.0).unwrap().is_frustration_free());
    }
}

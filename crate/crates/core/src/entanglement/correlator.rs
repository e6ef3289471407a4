//! Connected time correlators `<A(t) B(0)> - <A(t)><B(0)>` on disconnection
//! eigenstates, and the scan that sorts operator pairs by the connected
//! components their windows touch.
//!
//! `A(t) = e^{iHt} A e^{-iHt}` is never formed: with `phi = e^{-iHt} psi` and
//! `chi = e^{-iHt} B psi` the correlator is `<A^dag phi | chi - <B> phi>`.

use std::ops::RangeInclusive;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::operators::{LocalOperatorSpec, SiteOperator};
use crate::error::{Error, Result};
use crate::hamiltonian::SparseOperator;
use crate::spectra::{ComplexState, Propagator, StateVector};

/// Dense-block cap used by the correlator propagators.
pub const CORRELATOR_DENSE_CAP: usize = 10_000;

pub fn connected_correlator(
    hamiltonian: &SparseOperator,
    state: &StateVector,
    a: &LocalOperatorSpec,
    b: &LocalOperatorSpec,
    t: f64,
) -> Result<Complex64> {
    let prop = Propagator::new(hamiltonian, CORRELATOR_DENSE_CAP)?;
    connected_correlator_with(&prop, &state.to_complex(), a, b, t)
}

pub fn connected_correlator_with(
    prop: &Propagator,
    psi: &ComplexState,
    a: &LocalOperatorSpec,
    b: &LocalOperatorSpec,
    t: f64,
) -> Result<Complex64> {
    let phi = prop.evolve(psi, t)?;
    let b_psi = b.apply(psi)?;
    let chi = prop.evolve(&b_psi, t)?;
    let a_adj_phi = a.adjoint().apply(&phi)?;
    let joint = a_adj_phi.inner(&chi);
    let a_t = a_adj_phi.inner(&phi);
    let b_0 = psi.inner(&b_psi);
    Ok(joint - a_t * b_0)
}

/// How two operator windows sit relative to the connected components.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SupportRelation {
    /// The minimal component covers share a component (or the windows meet).
    Overlap,
    /// Disjoint covers, and some disconnection between them is touched by
    /// at most one of the windows.
    Separated,
    /// Disjoint covers whose windows end on the two sides of the same
    /// disconnection; both operators can rewrite its indices.
    Straddling,
}

/// Connected components shared by every basis state in a state's support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentPartition {
    sites: usize,
    // junction k sits between sites k and k + 1
    disconnections: Vec<usize>,
}

impl ComponentPartition {
    pub fn new(sites: usize, mut disconnections: Vec<usize>) -> Result<ComponentPartition> {
        disconnections.sort_unstable();
        disconnections.dedup();
        if disconnections.iter().any(|&k| k == 0 || k >= sites) {
            return Err(Error::InvalidInput(format!("junctions must lie in 1..{sites}")));
        }
        Ok(ComponentPartition { sites, disconnections })
    }

    /// Fails unless all support paths disconnect at the same junctions.
    pub fn of_state(state: &StateVector) -> Result<ComponentPartition> {
        let support = state.support(0.0);
        let Some((first, _)) = support.first() else {
            return Err(Error::ZeroNorm);
        };
        let junctions = first.disconnections();
        if support.iter().any(|(p, _)| p.disconnections() != junctions) {
            return Err(Error::InvalidInput(
                "state mixes paths with different disconnections".into(),
            ));
        }
        ComponentPartition::new(state.sites(), junctions)
    }

    pub fn disconnections(&self) -> &[usize] {
        &self.disconnections
    }

    /// Components as inclusive 1-based site ranges.
    pub fn components(&self) -> Vec<RangeInclusive<usize>> {
        let mut out = Vec::with_capacity(self.disconnections.len() + 1);
        let mut start = 1;
        for &k in &self.disconnections {
            out.push(start..=k);
            start = k + 1;
        }
        out.push(start..=self.sites);
        out
    }

    pub fn component_of(&self, site: usize) -> usize {
        self.disconnections.iter().filter(|&&k| k < site).count()
    }

    pub fn relation(&self, a: &LocalOperatorSpec, b: &LocalOperatorSpec) -> SupportRelation {
        let (left, right) = if a.first_site() <= b.first_site() {
            (a, b)
        } else {
            (b, a)
        };
        if right.first_site() <= left.last_site() {
            return SupportRelation::Overlap;
        }
        if self.component_of(left.last_site()) == self.component_of(right.first_site()) {
            return SupportRelation::Overlap;
        }
        if right.first_site() == left.last_site() + 1 {
            SupportRelation::Straddling
        } else {
            SupportRelation::Separated
        }
    }
}

/// Operator families and times scanned by [`localization_report`].
#[derive(Clone, Debug)]
pub struct LocalizationGrid {
    pub times: Vec<f64>,
    /// Single-site operators placed on every site.
    pub site_operators: Vec<SiteOperator>,
    /// Window radii (> 0) that get random mixed products.
    pub product_radii: Vec<usize>,
    pub products_per_window: usize,
    pub seed: u64,
}

impl Default for LocalizationGrid {
    /// Times `0.5, 1, 5`; all flips and diagonal projectors plus two random
    /// mixed operators per site; two random mixed products per radius-1
    /// window.
    fn default() -> Self {
        let seed = 0x5eed;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut site_operators = SiteOperator::all_flips();
        site_operators.extend(SiteOperator::all_diagonals());
        site_operators.push(SiteOperator::random_mixed(&mut rng));
        site_operators.push(SiteOperator::random_mixed(&mut rng));
        LocalizationGrid {
            times: vec![0.5, 1.0, 5.0],
            site_operators,
            product_radii: vec![1],
            products_per_window: 2,
            seed,
        }
    }
}

impl LocalizationGrid {
    pub fn operators(&self, n: usize) -> Result<Vec<LocalOperatorSpec>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed.wrapping_add(1));
        let mut out = Vec::new();
        for site in 1..=n {
            for op in &self.site_operators {
                out.push(LocalOperatorSpec::single(site, op.clone())?);
            }
        }
        for &radius in &self.product_radii {
            if radius == 0 {
                continue;
            }
            for site in radius + 1..=n.saturating_sub(radius) {
                for _ in 0..self.products_per_window {
                    let factors = (0..2 * radius + 1)
                        .map(|_| SiteOperator::random_mixed(&mut rng))
                        .collect();
                    out.push(LocalOperatorSpec::product(site, radius, factors)?);
                }
            }
        }
        Ok(out)
    }
}

/// One correlator evaluation, laid out for CSV.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrelatorRow {
    pub n: usize,
    pub state_id: String,
    pub i: usize,
    pub delta: usize,
    pub j: usize,
    pub delta_prime: usize,
    pub t: f64,
    pub re: f64,
    pub im: f64,
    pub abs: f64,
    /// Minimal component covers share a component.
    pub overlap_flag: bool,
    pub relation: SupportRelation,
    pub op_i: String,
    pub op_j: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalizationReport {
    pub n: usize,
    pub state_id: String,
    pub disconnections: Vec<usize>,
    pub rows: Vec<CorrelatorRow>,
}

impl LocalizationReport {
    /// Largest `|C|` among rows with the given relation (0 if none).
    pub fn max_abs(&self, relation: SupportRelation) -> f64 {
        self.rows
            .iter()
            .filter(|r| r.relation == relation)
            .fold(0.0, |m, r| m.max(r.abs))
    }

    pub fn count(&self, relation: SupportRelation) -> usize {
        self.rows.iter().filter(|r| r.relation == relation).count()
    }

    /// Every pair with disjoint minimal covers stays below `tol`.
    pub fn no_overlap_vanishes(&self, tol: f64) -> bool {
        self.rows.iter().filter(|r| !r.overlap_flag).all(|r| r.abs < tol)
    }

    /// Every separated pair stays below `tol`.
    pub fn separated_vanishes(&self, tol: f64) -> bool {
        self.rows
            .iter()
            .filter(|r| r.relation == SupportRelation::Separated)
            .all(|r| r.abs < tol)
    }

    /// Some overlapping pair exceeds `tol`.
    pub fn overlap_control(&self, tol: f64) -> bool {
        self.rows.iter().any(|r| r.overlap_flag && r.abs > tol)
    }
}

/// Scans all ordered pairs of grid operators with disjoint windows.
/// `hamiltonian` must have `state` as an eigenvector sharing the
/// disconnections of its support.
pub fn localization_report(
    hamiltonian: &SparseOperator,
    state: &StateVector,
    state_id: &str,
    grid: &LocalizationGrid,
) -> Result<LocalizationReport> {
    let n = state.sites();
    let partition = ComponentPartition::of_state(state)?;
    let prop = Propagator::new(hamiltonian, CORRELATOR_DENSE_CAP)?;
    let psi = state.to_complex();
    let ops = grid.operators(n)?;
    let adjoints: Vec<LocalOperatorSpec> = ops.iter().map(LocalOperatorSpec::adjoint).collect();
    let b_applied: Vec<ComplexState> = ops.iter().map(|b| b.apply(&psi)).collect::<Result<_>>()?;
    let b_expect: Vec<Complex64> = b_applied.iter().map(|bp| psi.inner(bp)).collect();
    let zero = Complex64::new(0.0, 0.0);

    let mut rows = Vec::new();
    for &t in &grid.times {
        let phi = prop.evolve(&psi, t)?;
        // A^dag phi, kept sparse: phi lives on the few blocks psi touches
        let left: Vec<Vec<(usize, Complex64)>> = adjoints
            .iter()
            .map(|ad| {
                Ok(ad
                    .apply(&phi)?
                    .amplitudes()
                    .iter()
                    .enumerate()
                    .filter(|(_, z)| **z != zero)
                    .map(|(k, z)| (k, *z))
                    .collect())
            })
            .collect::<Result<_>>()?;
        for (bi, b) in ops.iter().enumerate() {
            let chi = prop.evolve(&b_applied[bi], t)?;
            let v: Vec<Complex64> = chi
                .amplitudes()
                .iter()
                .zip(phi.amplitudes())
                .map(|(c, p)| c - b_expect[bi] * p)
                .collect();
            for (ai, a) in ops.iter().enumerate() {
                let disjoint = a.last_site() < b.first_site() || b.last_site() < a.first_site();
                if !disjoint {
                    continue;
                }
                let c: Complex64 = left[ai].iter().map(|&(k, u)| u.conj() * v[k]).sum();
                let relation = partition.relation(a, b);
                rows.push(CorrelatorRow {
                    n,
                    state_id: state_id.to_string(),
                    i: a.site,
                    delta: a.radius,
                    j: b.site,
                    delta_prime: b.radius,
                    t,
                    re: c.re,
                    im: c.im,
                    abs: c.norm(),
                    overlap_flag: relation == SupportRelation::Overlap,
                    relation,
                    op_i: a.label(),
                    op_j: b.label(),
                });
            }
        }
    }
    Ok(LocalizationReport {
        n,
        state_id: state_id.to_string(),
        disconnections: partition.disconnections().to_vec(),
        rows,
    })
}

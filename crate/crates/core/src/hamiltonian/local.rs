//! Operators on a few consecutive sites and their embedding in the chain.

use std::sync::Arc;

use super::sparse::SparseOperator;
use crate::error::{Error, Result};
use crate::walk::Step;

/// Largest chain handled by full-space operators (`6^9` basis states).
pub const MAX_CHAIN_SITES: usize = 9;

pub(crate) fn chain_dim(n: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::InvalidInput("chain needs at least one site".into()));
    }
    if n > MAX_CHAIN_SITES {
        return Err(Error::Capacity(format!(
            "{n} sites exceed the full-space cap of {MAX_CHAIN_SITES}"
        )));
    }
    Ok(6usize.pow(n as u32))
}

fn local_index(steps: &[Step]) -> usize {
    steps.iter().fold(0, |acc, s| acc * 6 + s.code() as usize)
}

/// Superposition of product states on consecutive sites starting at `site`
/// (1-based).
#[derive(Clone, Debug, PartialEq)]
pub struct LocalState {
    pub site: usize,
    pub components: Vec<(f64, Vec<Step>)>,
}

impl LocalState {
    pub fn product(site: usize, steps: &[Step]) -> LocalState {
        LocalState {
            site,
            components: vec![(1.0, steps.to_vec())],
        }
    }

    /// `(|first> - |second>) / sqrt(2)`.
    pub fn antisymmetric(site: usize, first: &[Step], second: &[Step]) -> LocalState {
        let a = std::f64::consts::FRAC_1_SQRT_2;
        LocalState {
            site,
            components: vec![(a, first.to_vec()), (-a, second.to_vec())],
        }
    }

    pub fn width(&self) -> usize {
        self.components.first().map_or(0, |(_, s)| s.len())
    }
}

/// Real matrix on `width` consecutive sites, stored by rows of the `6^width`
/// local space.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalOperator {
    width: usize,
    rows: Vec<Vec<(usize, f64)>>,
}

impl LocalOperator {
    /// Rank-one projector onto the normalized local state.
    pub fn projector(state: &LocalState) -> Result<LocalOperator> {
        let width = state.width();
        if width == 0 || state.components.iter().any(|(_, s)| s.len() != width) {
            return Err(Error::InvalidInput(
                "local state components must share a positive width".into(),
            ));
        }
        let mut amps: Vec<(usize, f64)> = Vec::new();
        for (a, steps) in &state.components {
            let k = local_index(steps);
            match amps.iter_mut().find(|(i, _)| *i == k) {
                Some((_, v)) => *v += a,
                None => amps.push((k, *a)),
            }
        }
        let norm2: f64 = amps.iter().map(|(_, a)| a * a).sum();
        if norm2 <= 0.0 || !norm2.is_finite() {
            return Err(Error::ZeroNorm);
        }
        let mut rows = vec![Vec::new(); 6usize.pow(width as u32)];
        for &(i, ai) in &amps {
            for &(j, aj) in &amps {
                let v = ai * aj / norm2;
                if v != 0.0 {
                    rows[i].push((j, v));
                }
            }
        }
        Ok(LocalOperator { width, rows })
    }

    /// Diagonal operator equal to `1` on the listed product states.
    pub fn diagonal_indicator<'a>(width: usize, states: impl IntoIterator<Item = &'a [Step]>) -> LocalOperator {
        let mut rows = vec![Vec::new(); 6usize.pow(width as u32)];
        for s in states {
            assert_eq!(s.len(), width);
            let k = local_index(s);
            if rows[k].is_empty() {
                rows[k].push((k, 1.0));
            }
        }
        LocalOperator { width, rows }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn row(&self, local: usize) -> &[(usize, f64)] {
        &self.rows[local]
    }
}

/// What a term stands for; used for selecting subsets of the Hamiltonian.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TermKind {
    UpMove,
    DownMove,
    /// `x12 x21 <-> x13 x31`
    PairMove,
    /// `x31 x13 <-> x32 x23`, weighted by `lambda1`
    MixingMove,
    LeftBoundary,
    RightBoundary,
    Balancing,
    Disconnection,
    Custom,
}

/// `coefficient * op` acting on sites `site..site + width` (1-based).
#[derive(Clone, Debug)]
pub struct LocalTerm {
    pub kind: TermKind,
    pub site: usize,
    pub coefficient: f64,
    pub op: Arc<LocalOperator>,
}

impl LocalTerm {
    pub fn new(kind: TermKind, site: usize, coefficient: f64, op: Arc<LocalOperator>) -> LocalTerm {
        LocalTerm {
            kind,
            site,
            coefficient,
            op,
        }
    }

    fn check_fits(&self, n: usize) -> Result<()> {
        if self.site == 0 || self.site + self.op.width() - 1 > n {
            return Err(Error::InvalidInput(format!(
                "term on sites {}..{} does not fit a chain of {n}",
                self.site,
                self.site + self.op.width() - 1
            )));
        }
        Ok(())
    }

    /// Adds this term's entries in row `r` of the full space.
    #[inline]
    pub(crate) fn push_row(&self, n: usize, r: usize, out: &mut Vec<(usize, f64)>) {
        let w = self.op.width();
        let stride = 6usize.pow((n + 1 - self.site - w) as u32);
        let block = 6usize.pow(w as u32);
        let local = (r / stride) % block;
        let base = r - local * stride;
        for &(lc, v) in self.op.row(local) {
            out.push((base + lc * stride, self.coefficient * v));
        }
    }

    /// Sum of diagonal contributions of this term on basis state `r`.
    pub fn diagonal_on(&self, n: usize, r: usize) -> f64 {
        let w = self.op.width();
        let stride = 6usize.pow((n + 1 - self.site - w) as u32);
        let local = (r / stride) % 6usize.pow(w as u32);
        self.op
            .row(local)
            .iter()
            .find(|(c, _)| *c == local)
            .map_or(0.0, |(_, v)| self.coefficient * v)
    }
}

/// Embeds a sum of local terms in the `6^n` chain space.
pub fn assemble(n: usize, terms: &[LocalTerm]) -> Result<SparseOperator> {
    let dim = chain_dim(n)?;
    for t in terms {
        t.check_fits(n)?;
    }
    Ok(SparseOperator::from_rows(dim, |r, out| {
        for t in terms {
            t.push_row(n, r, out);
        }
    }))
}

/// Projector onto a local state, tensored with the identity elsewhere.
pub fn projector_onto(n: usize, state: &LocalState) -> Result<SparseOperator> {
    let op = Arc::new(LocalOperator::projector(state)?);
    assemble(n, &[LocalTerm::new(TermKind::Custom, state.site, 1.0, op)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::SymmetricEigen;

    #[test]
    fn single_site_projector() {
        let p = projector_onto(2, &LocalState::product(1, &[Step::X21])).unwrap();
        assert!(p.is_diagonal());
        assert_eq!(p.diagonal().iter().sum::<f64>(), 6.0);
    }

    #[test]
    fn antisymmetric_projector_spectrum() {
        let s = LocalState::antisymmetric(1, &[Step::X12, Step::X21], &[Step::X13, Step::X31]);
        let p = projector_onto(2, &s).unwrap();
        let mut ev: Vec<f64> = SymmetricEigen::new(p.to_dense().unwrap())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        assert!((ev[35] - 1.0).abs() < 1e-14);
        assert!(ev[..35].iter().all(|v| v.abs() < 1e-14));
        let sq = p.matmul(&p).unwrap().add_scaled(&p, -1.0).unwrap();
        assert!(sq.max_abs() < 1e-14);
    }

    #[test]
    fn zero_norm_rejected() {
        let s = LocalState {
            site: 1,
            components: vec![(1.0, vec![Step::X12]), (-1.0, vec![Step::X12])],
        };
        assert!(matches!(projector_onto(1, &s), Err(Error::ZeroNorm)));
    }

    #[test]
    fn site_order_is_big_endian() {
        // x12 on site 1 of two sites: indices 0..6
        let p = projector_onto(2, &LocalState::product(1, &[Step::X12])).unwrap();
        let d = p.diagonal();
        assert!(d[..6].iter().all(|&v| v == 1.0));
        assert!(d[6..].iter().all(|&v| v == 0.0));
    }
}

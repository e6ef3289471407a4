//! Single-site operators on the six-state local space and their products
//! over a window of sites.

use std::fmt;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::spectra::ComplexState;
use crate::walk::Step;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SiteOperatorKind {
    /// `|ket><bra|` with `ket != bra`.
    Flip { ket: Step, bra: Step },
    /// `|step><step|`.
    Diagonal(Step),
    /// A linear combination of flips and diagonal projectors.
    Mixed,
}

/// A real `6 x 6` operator on one site, indexed by step code.
#[derive(Clone, Debug, PartialEq)]
pub struct SiteOperator {
    kind: SiteOperatorKind,
    // matrix[out][in]
    matrix: [[f64; 6]; 6],
}

impl SiteOperator {
    pub fn flip(ket: Step, bra: Step) -> Result<SiteOperator> {
        if ket == bra {
            return Err(Error::InvalidInput(format!(
                "flip needs two different states, got {ket} twice"
            )));
        }
        let mut matrix = [[0.0; 6]; 6];
        matrix[ket.code() as usize][bra.code() as usize] = 1.0;
        Ok(SiteOperator {
            kind: SiteOperatorKind::Flip { ket, bra },
            matrix,
        })
    }

    pub fn diagonal(step: Step) -> SiteOperator {
        let mut matrix = [[0.0; 6]; 6];
        matrix[step.code() as usize][step.code() as usize] = 1.0;
        SiteOperator {
            kind: SiteOperatorKind::Diagonal(step),
            matrix,
        }
    }

    /// `sum kappa_ab |x_ab><x_ab| + sum kappa_(ket;bra) |ket><bra|`.
    pub fn mixed(diagonal: &[(Step, f64)], flips: &[(Step, Step, f64)]) -> Result<SiteOperator> {
        let mut matrix = [[0.0; 6]; 6];
        for &(s, k) in diagonal {
            matrix[s.code() as usize][s.code() as usize] += k;
        }
        for &(ket, bra, k) in flips {
            if ket == bra {
                return Err(Error::InvalidInput(format!(
                    "flip coefficient on the diagonal entry {ket}"
                )));
            }
            matrix[ket.code() as usize][bra.code() as usize] += k;
        }
        Ok(SiteOperator {
            kind: SiteOperatorKind::Mixed,
            matrix,
        })
    }

    /// Diagonal operator with every coefficient equal to `kappa`.
    pub fn constant(kappa: f64) -> SiteOperator {
        let diag: Vec<(Step, f64)> = Step::ALL.iter().map(|&s| (s, kappa)).collect();
        SiteOperator::mixed(&diag, &[]).expect("no flips")
    }

    /// All 36 coefficients drawn uniformly from `[-1, 1]`.
    pub fn random_mixed<R: Rng>(rng: &mut R) -> SiteOperator {
        let mut matrix = [[0.0; 6]; 6];
        for row in matrix.iter_mut() {
            for v in row.iter_mut() {
                *v = rng.gen_range(-1.0..=1.0);
            }
        }
        SiteOperator {
            kind: SiteOperatorKind::Mixed,
            matrix,
        }
    }

    /// The 30 flips.
    pub fn all_flips() -> Vec<SiteOperator> {
        let mut out = Vec::with_capacity(30);
        for ket in Step::ALL {
            for bra in Step::ALL {
                if ket != bra {
                    out.push(SiteOperator::flip(ket, bra).expect("distinct"));
                }
            }
        }
        out
    }

    /// The 6 diagonal projectors.
    pub fn all_diagonals() -> Vec<SiteOperator> {
        Step::ALL.iter().map(|&s| SiteOperator::diagonal(s)).collect()
    }

    pub fn kind(&self) -> SiteOperatorKind {
        self.kind
    }

    /// `<out|op|in>` by step code.
    pub fn element(&self, out: usize, input: usize) -> f64 {
        self.matrix[out][input]
    }

    pub fn adjoint(&self) -> SiteOperator {
        let mut matrix = [[0.0; 6]; 6];
        for (o, row) in self.matrix.iter().enumerate() {
            for (i, &v) in row.iter().enumerate() {
                matrix[i][o] = v;
            }
        }
        let kind = match self.kind {
            SiteOperatorKind::Flip { ket, bra } => SiteOperatorKind::Flip { ket: bra, bra: ket },
            k => k,
        };
        SiteOperator { kind, matrix }
    }
}

impl fmt::Display for SiteOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SiteOperatorKind::Flip { ket, bra } => {
                write!(f, "flip({}{};{}{})", ket.start(), ket.end(), bra.start(), bra.end())
            }
            SiteOperatorKind::Diagonal(s) => write!(f, "diag({}{})", s.start(), s.end()),
            SiteOperatorKind::Mixed => write!(f, "mixed"),
        }
    }
}

/// Product of site operators over `[site - radius, site + radius]`
/// (sites are 1-based).
#[derive(Clone, Debug, PartialEq)]
pub struct LocalOperatorSpec {
    pub site: usize,
    pub radius: usize,
    factors: Vec<SiteOperator>,
}

impl LocalOperatorSpec {
    pub fn single(site: usize, op: SiteOperator) -> Result<LocalOperatorSpec> {
        LocalOperatorSpec::product(site, 0, vec![op])
    }

    /// `factors[k]` acts on site `site - radius + k`.
    pub fn product(site: usize, radius: usize, factors: Vec<SiteOperator>) -> Result<LocalOperatorSpec> {
        if site <= radius {
            return Err(Error::InvalidInput(format!(
                "window of radius {radius} around site {site} leaves the chain"
            )));
        }
        if factors.len() != 2 * radius + 1 {
            return Err(Error::InvalidInput(format!(
                "radius {radius} needs {} factors, got {}",
                2 * radius + 1,
                factors.len()
            )));
        }
        Ok(LocalOperatorSpec { site, radius, factors })
    }

    pub fn first_site(&self) -> usize {
        self.site - self.radius
    }

    pub fn last_site(&self) -> usize {
        self.site + self.radius
    }

    pub fn factors(&self) -> &[SiteOperator] {
        &self.factors
    }

    pub fn fits(&self, n: usize) -> bool {
        self.last_site() <= n
    }

    pub fn adjoint(&self) -> LocalOperatorSpec {
        LocalOperatorSpec {
            site: self.site,
            radius: self.radius,
            factors: self.factors.iter().map(SiteOperator::adjoint).collect(),
        }
    }

    pub fn label(&self) -> String {
        self.factors
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("*")
    }

    /// `op |state>`.
    pub fn apply(&self, state: &ComplexState) -> Result<ComplexState> {
        let n = state.sites();
        if !self.fits(n) {
            return Err(Error::InvalidInput(format!(
                "operator on sites {}..={} does not fit a chain of {n}",
                self.first_site(),
                self.last_site()
            )));
        }
        let mut current = state.amplitudes().to_vec();
        let mut next = vec![Complex64::new(0.0, 0.0); current.len()];
        for (k, factor) in self.factors.iter().enumerate() {
            let site = self.first_site() + k;
            let stride = 6usize.pow((n - site) as u32);
            next.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
            for (idx, &amp) in current.iter().enumerate() {
                if amp == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let digit = (idx / stride) % 6;
                let base = idx - digit * stride;
                for out in 0..6 {
                    let m = factor.matrix[out][digit];
                    if m != 0.0 {
                        next[base + out * stride] += amp * m;
                    }
                }
            }
            std::mem::swap(&mut current, &mut next);
        }
        Ok(ComplexState::from_amplitudes(n, current))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::build_path_state;
    use crate::walk::Path;

    fn state(text: &str) -> ComplexState {
        build_path_state(&[Path::parse(text).unwrap()]).unwrap().to_complex()
    }

    #[test]
    fn flip_rewrites_one_site() {
        let s = state("1,2 2,1 1,3");
        let op = LocalOperatorSpec::single(2, SiteOperator::flip(Step::X23, Step::X21).unwrap()).unwrap();
        let out = op.apply(&s).unwrap();
        let target = Path::parse("1,2 2,3 1,3").unwrap().encode();
        assert_eq!(out.amplitudes()[target], Complex64::new(1.0, 0.0));
        assert!((out.norm() - 1.0).abs() < 1e-15);
        // wrong input state is annihilated
        let op = LocalOperatorSpec::single(1, SiteOperator::flip(Step::X23, Step::X21).unwrap()).unwrap();
        assert_eq!(op.apply(&s).unwrap().norm(), 0.0);
    }

    #[test]
    fn windows() {
        assert!(SiteOperator::flip(Step::X12, Step::X12).is_err());
        assert!(LocalOperatorSpec::product(1, 1, vec![SiteOperator::constant(1.0); 3]).is_err());
        assert!(LocalOperatorSpec::product(2, 1, vec![SiteOperator::constant(1.0); 2]).is_err());
        let op = LocalOperatorSpec::product(2, 1, vec![SiteOperator::constant(2.0); 3]).unwrap();
        assert!(op.fits(3) && !op.fits(2));
        let s = state("1,2 2,1 1,3");
        let out = op.apply(&s).unwrap();
        assert!((out.norm() - 8.0).abs() < 1e-14);
    }

    #[test]
    fn adjoint_matches_inner_products() {
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(7);
        let ops: Vec<SiteOperator> = (0..3).map(|_| SiteOperator::random_mixed(&mut rng)).collect();
        let op = LocalOperatorSpec::product(2, 1, ops).unwrap();
        let a = build_path_state(&[Path::parse("1,2 2,1 1,3").unwrap(), Path::parse("2,3 3,1 1,2").unwrap()])
            .unwrap()
            .to_complex();
        let b = build_path_state(&[Path::parse("3,2 2,1 1,3").unwrap(), Path::parse("1,2 2,3 1,2").unwrap()])
            .unwrap()
            .to_complex();
        let lhs = a.inner(&op.apply(&b).unwrap());
        let rhs = op.adjoint().apply(&a).unwrap().inner(&b);
        assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn families() {
        assert_eq!(SiteOperator::all_flips().len(), 30);
        assert_eq!(SiteOperator::all_diagonals().len(), 6);
        assert_eq!(
            SiteOperator::flip(Step::X12, Step::X31).unwrap().to_string(),
            "flip(12;31)"
        );
        assert_eq!(SiteOperator::diagonal(Step::X32).to_string(), "diag(32)");
    }
}

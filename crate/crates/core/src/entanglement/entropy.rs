//! Entanglement entropy in nats: Shannon entropy of Schmidt weights, reduced
//! density matrices of numeric states, and the large-`n` formulas.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::Serialize;

use super::schmidt::{ClassLabel, SchmidtDistribution};
use crate::count::Phase;
use crate::error::{Error, Result};
use crate::spectra::StateVector;

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Squared singular values at or below this are dropped.
pub const SCHMIDT_CUTOFF: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EntropyMethod {
    SchmidtCounts,
    RdmNumeric,
    Asymptotic,
}

impl EntropyMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            EntropyMethod::SchmidtCounts => "schmidt_counts",
            EntropyMethod::RdmNumeric => "rdm_numeric",
            EntropyMethod::Asymptotic => "asymptotic",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyReport {
    #[serde(rename = "S")]
    pub entropy: f64,
    pub method: EntropyMethod,
    /// Chain length `2n`.
    pub sites: usize,
    /// Length `n + r` of the left block.
    pub cut: usize,
    pub phase: Option<Phase>,
    pub class: Option<ClassLabel>,
    /// Number of nonzero Schmidt weights; zero for the asymptotic formula.
    pub schmidt_rank: usize,
}

impl EntropyReport {
    /// `r` in the `(n + r | n - r)` split; negative when the cut is left of
    /// the middle.
    pub fn offset(&self) -> i64 {
        self.cut as i64 - (self.sites / 2) as i64
    }
}

/// `-sum p ln p` over the positive entries.
pub fn shannon_entropy(probabilities: impl IntoIterator<Item = f64>) -> f64 {
    let s: f64 = probabilities
        .into_iter()
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.ln())
        .sum();
    // a single atom gives -0.0
    s.max(0.0)
}

pub fn entropy_from_distribution(dist: &SchmidtDistribution) -> EntropyReport {
    EntropyReport {
        entropy: shannon_entropy(dist.entries.iter().map(|e| e.probability)),
        method: EntropyMethod::SchmidtCounts,
        sites: dist.total_len(),
        cut: dist.left_len,
        phase: Some(dist.phase),
        class: Some(dist.class),
        schmidt_rank: dist.entries.iter().filter(|e| e.probability > 0.0).count(),
    }
}

/// Squared Schmidt coefficients of `state` for the split after `cut` sites,
/// in descending order, cut off at [`SCHMIDT_CUTOFF`].
pub fn schmidt_spectrum(state: &StateVector, cut: usize) -> Result<Vec<f64>> {
    let n = state.sites();
    if cut == 0 || cut >= n {
        return Err(Error::InvalidInput(format!("cut {cut} outside 1..{n}")));
    }
    let right_dim = 6usize.pow((n - cut) as u32);
    // only rows and columns that carry amplitude enter the matrix
    let mut rows: BTreeMap<usize, usize> = BTreeMap::new();
    let mut cols: BTreeMap<usize, usize> = BTreeMap::new();
    let mut entries = Vec::new();
    for (idx, &amp) in state.amplitudes().iter().enumerate() {
        if amp != 0.0 {
            let (row, col) = (idx / right_dim, idx % right_dim);
            let nr = rows.len();
            let r = *rows.entry(row).or_insert(nr);
            let nc = cols.len();
            let c = *cols.entry(col).or_insert(nc);
            entries.push((r, c, amp));
        }
    }
    if entries.is_empty() {
        return Err(Error::ZeroNorm);
    }
    let mut m = DMatrix::<f64>::zeros(rows.len(), cols.len());
    for (r, c, amp) in entries {
        m[(r, c)] = amp;
    }
    let mut weights: Vec<f64> = m
        .singular_values()
        .iter()
        .map(|s| s * s)
        .filter(|&p| p > SCHMIDT_CUTOFF)
        .collect();
    weights.sort_by(|a, b| b.total_cmp(a));
    Ok(weights)
}

/// Entropy of the first `cut` sites of a normalized state.
pub fn entropy_from_state(state: &StateVector, cut: usize) -> Result<EntropyReport> {
    let weights = schmidt_spectrum(state, cut)?;
    Ok(EntropyReport {
        entropy: shannon_entropy(weights.iter().copied()),
        method: EntropyMethod::RdmNumeric,
        sites: state.sites(),
        cut,
        phase: None,
        class: None,
        schmidt_rank: weights.len(),
    })
}

/// `1/2 ln((n+r)(n-r)/n) + 1/2 ln(pi/4) + gamma - 1/2`, the large-`n` entropy
/// of the phase-I ground states.
pub fn entropy_asymptotic_phase1(n: usize, r: usize) -> Result<EntropyReport> {
    if n == 0 || r >= n {
        return Err(Error::InvalidInput(format!("need 0 <= r < n, got n = {n}, r = {r}")));
    }
    let (n, rf) = (n as f64, r as f64);
    let entropy = 0.5 * ((n + rf) * (n - rf) / n).ln() + phase1_entropy_offset();
    Ok(EntropyReport {
        entropy,
        method: EntropyMethod::Asymptotic,
        sites: 2 * n as usize,
        cut: n as usize + r,
        phase: Some(Phase::Mixing),
        class: None,
        schmidt_rank: 0,
    })
}

/// `1/2 ln(pi/4) + gamma - 1/2`.
pub fn phase1_entropy_offset() -> f64 {
    0.5 * (std::f64::consts::PI / 4.0).ln() + EULER_GAMMA - 0.5
}

/// `(1/sqrt 5) ln((sqrt 5 - 1)/2) + 1/2 ln 5`, the large-`n` entropy of the
/// phase-II and phase-III `{11}` states.
pub fn area_law_entropy() -> f64 {
    let s5 = 5f64.sqrt();
    ((s5 - 1.0) / 2.0).ln() / s5 + 0.5 * 5f64.ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::build_path_state;
    use crate::walk::Path;

    #[test]
    fn shannon_basics() {
        assert_eq!(shannon_entropy([1.0]), 0.0);
        for m in 1..8 {
            let p = vec![1.0 / m as f64; m];
            assert!((shannon_entropy(p) - (m as f64).ln()).abs() < 1e-14);
        }
    }

    #[test]
    fn product_state_has_no_entropy() {
        let s = build_path_state(&[Path::parse("1,2 2,3 3,2 2,1").unwrap()]).unwrap();
        for cut in 1..4 {
            let e = entropy_from_state(&s, cut).unwrap();
            assert_eq!(e.entropy, 0.0);
            assert_eq!(e.schmidt_rank, 1);
        }
    }

    #[test]
    fn bell_pair() {
        let s = build_path_state(&[Path::parse("1,2 2,1").unwrap(), Path::parse("1,3 3,1").unwrap()]).unwrap();
        let e = entropy_from_state(&s, 1).unwrap();
        assert!((e.entropy - 2f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn constants() {
        assert!((phase1_entropy_offset() + 0.043_566_572_733_712_4).abs() < 1e-15);
        let s5 = 5f64.sqrt();
        let (p, q) = ((s5 + 1.0) / (2.0 * s5), (s5 - 1.0) / (2.0 * s5));
        assert!((area_law_entropy() - shannon_entropy([p, q])).abs() < 1e-15);
        assert!((area_law_entropy() - 0.589_514_485_735_048).abs() < 1e-12);
    }

    #[test]
    fn asymptotic_report() {
        let e = entropy_asymptotic_phase1(100, 0).unwrap();
        assert!((e.entropy - (0.5 * 100f64.ln() + phase1_entropy_offset())).abs() < 1e-14);
        assert_eq!((e.sites, e.cut, e.offset()), (200, 100, 0));
        assert!(entropy_asymptotic_phase1(5, 5).is_err());
    }

    #[test]
    fn bad_cut() {
        let s = build_path_state(&[Path::parse("1,2 2,1").unwrap()]).unwrap();
        assert!(entropy_from_state(&s, 0).is_err());
        assert!(entropy_from_state(&s, 2).is_err());
    }
}

//! Chain states built from sets of walks.

use std::io::Write;

use num_complex::Complex64;
use rand::seq::index::sample;
use rand::Rng;

use crate::error::{Error, Result};
use crate::walk::{enumerate_walks, Floor, Path, WalkClass};

/// Real amplitudes over the `6^n` product basis (site 1 most significant).
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amplitudes: Vec<f64>,
}

impl StateVector {
    pub fn from_amplitudes(n: usize, amplitudes: Vec<f64>) -> StateVector {
        StateVector { n, amplitudes }
    }

    pub fn sites(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<f64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dot(&self, other: &StateVector) -> f64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a * b).sum()
    }

    pub fn normalized(mut self) -> Result<StateVector> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::ZeroNorm);
        }
        self.amplitudes.iter_mut().for_each(|a| *a /= n);
        Ok(self)
    }

    pub fn to_complex(&self) -> ComplexState {
        ComplexState {
            n: self.n,
            amplitudes: self.amplitudes.iter().map(|&a| Complex64::new(a, 0.0)).collect(),
        }
    }

    /// Basis paths with `|amplitude| > threshold`, in basis order.
    pub fn support(&self, threshold: f64) -> Vec<(Path, f64)> {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(_, a)| a.abs() > threshold)
            .map(|(i, &a)| (Path::decode(self.n, i), a))
            .collect()
    }

    /// `u64` dimension followed by little-endian `f64` amplitudes.
    pub fn write_binary<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        w.write_all(&(self.dim() as u64).to_le_bytes())?;
        for a in &self.amplitudes {
            w.write_all(&a.to_le_bytes())?;
        }
        w.flush()
    }
}

/// Complex amplitudes, used for time evolution.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexState {
    n: usize,
    amplitudes: Vec<Complex64>,
}

impl ComplexState {
    pub fn from_amplitudes(n: usize, amplitudes: Vec<Complex64>) -> ComplexState {
        ComplexState { n, amplitudes }
    }

    pub fn sites(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &ComplexState) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).re.sqrt()
    }

    /// `u64` dimension followed by `(re, im)` little-endian `f64` pairs.
    pub fn write_binary<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        w.write_all(&(self.amplitudes.len() as u64).to_le_bytes())?;
        for a in &self.amplitudes {
            w.write_all(&a.re.to_le_bytes())?;
            w.write_all(&a.im.to_le_bytes())?;
        }
        w.flush()
    }
}

/// Equal-amplitude normalized superposition of the given paths.
pub fn build_path_state(paths: &[Path]) -> Result<StateVector> {
    let Some(first) = paths.first() else {
        return Err(Error::InvalidInput("no paths to superpose".into()));
    };
    let n = first.len();
    if paths.iter().any(|p| p.len() != n) {
        return Err(Error::InvalidInput("paths differ in length".into()));
    }
    let dim = 6usize
        .checked_pow(n as u32)
        .ok_or_else(|| Error::Capacity(format!("6^{n} overflows")))?;
    let mut amplitudes = vec![0.0; dim];
    for p in paths {
        amplitudes[p.encode()] = 1.0;
    }
    StateVector::from_amplitudes(n, amplitudes).normalized()
}

/// One connected component of an excitation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExcitationSegment {
    pub length: usize,
    pub start_index: u8,
    pub end_index: u8,
    /// Height labels; only their difference matters for middle segments.
    pub start_height: i32,
    pub end_height: i32,
}

impl ExcitationSegment {
    pub fn new(length: usize, start_index: u8, end_index: u8, start_height: i32, end_height: i32) -> Self {
        ExcitationSegment {
            length,
            start_index,
            end_index,
            start_height,
            end_height,
        }
    }

    /// Walks of this segment. The first segment starts on the floor, the last
    /// ends on it, and middle ones are free.
    pub fn walks(&self, first: bool, last: bool) -> Result<Vec<Path>> {
        if first && self.start_height != 0 {
            return Err(Error::InvalidExcitation(
                "the first segment must start at height 0".into(),
            ));
        }
        if last && self.end_height != 0 {
            return Err(Error::InvalidExcitation("the last segment must end at height 0".into()));
        }
        if first {
            let class = WalkClass::new(self.start_index, self.end_index, self.end_height);
            enumerate_walks(self.length, class, Floor::Restricted)
        } else if last {
            // read backwards from the floor
            let class = WalkClass::new(self.end_index, self.start_index, self.start_height);
            let mut w: Vec<Path> = enumerate_walks(self.length, class, Floor::Restricted)?
                .iter()
                .map(Path::reversed)
                .collect();
            w.sort_by_key(Path::encode);
            Ok(w)
        } else {
            let class = WalkClass::new(self.start_index, self.end_index, self.end_height);
            enumerate_walks(
                self.length,
                class,
                Floor::Unrestricted {
                    start_height: self.start_height,
                },
            )
        }
    }
}

/// Tensor product of uniform segment states with a mismatch at every
/// junction; an eigenstate of the `lambda2 = 0` Hamiltonian with energy equal
/// to the number of junctions.
pub fn build_excitation(segments: &[ExcitationSegment]) -> Result<StateVector> {
    if segments.is_empty() {
        return Err(Error::InvalidExcitation("no segments".into()));
    }
    for (k, pair) in segments.windows(2).enumerate() {
        if pair[0].end_index == pair[1].start_index {
            return Err(Error::InvalidExcitation(format!(
                "segments {k} and {} connect through index {}",
                k + 1,
                pair[0].end_index
            )));
        }
    }
    let last = segments.len() - 1;
    let mut product: Vec<Path> = vec![Path::empty()];
    for (k, seg) in segments.iter().enumerate() {
        if seg.length == 0 {
            return Err(Error::InvalidExcitation(format!("segment {k} is empty")));
        }
        let walks = seg.walks(k == 0, k == last)?;
        if walks.is_empty() {
            return Err(Error::InvalidExcitation(format!("segment {k} ({seg:?}) has no walks")));
        }
        product = product
            .iter()
            .flat_map(|p| walks.iter().map(move |w| p.concat(w)))
            .collect();
    }
    build_path_state(&product)
}

/// `|x12>^{r} (x) |P_{n-r, 1->1}>`: `r` totally disconnected up steps followed
/// by the zero-height `1 -> 1` ground state; energy `r`.
pub fn highly_excited_segments(n: usize, r: usize) -> Result<Vec<ExcitationSegment>> {
    if r == 0 || r >= n || (n - r) % 2 == 1 {
        return Err(Error::InvalidExcitation(format!(
            "need 0 < r < n with n - r even, got n = {n}, r = {r}"
        )));
    }
    let mut segs: Vec<ExcitationSegment> = (0..r)
        .map(|k| ExcitationSegment::new(1, 1, 2, k as i32, k as i32 + 1))
        .collect();
    segs.push(ExcitationSegment::new(n - r, 1, 1, 0, 0));
    Ok(segs)
}

pub fn build_highly_excited(n: usize, r: usize) -> Result<StateVector> {
    build_excitation(&highly_excited_segments(n, r)?)
}

/// Random segments for an excitation with `k` disconnections on `n` sites:
/// random cut positions, indices and end heights, redrawn until every
/// segment has walks.
pub fn random_excitation_segments<R: Rng>(n: usize, k: usize, rng: &mut R) -> Result<Vec<ExcitationSegment>> {
    if k == 0 || k >= n {
        return Err(Error::InvalidExcitation(format!(
            "need 0 < k < n, got n = {n}, k = {k}"
        )));
    }
    const ATTEMPTS: usize = 10_000;
    for _ in 0..ATTEMPTS {
        let mut cuts: Vec<usize> = sample(rng, n - 1, k).into_iter().map(|c| c + 1).collect();
        cuts.sort_unstable();
        let mut bounds = vec![0];
        bounds.extend(&cuts);
        bounds.push(n);
        let mut segs = Vec::with_capacity(k + 1);
        let mut prev_end: Option<u8> = None;
        for (idx, w) in bounds.windows(2).enumerate() {
            let len = w[1] - w[0];
            let start_index = loop {
                let a = rng.gen_range(1..=3u8);
                if Some(a) != prev_end {
                    break a;
                }
            };
            let end_index = rng.gen_range(1..=3u8);
            // height change must have the parity of the length
            let delta = 2 * rng.gen_range(0..=len) as i32 - len as i32;
            let (start_height, end_height) = if idx == 0 {
                (0, delta.abs())
            } else if idx == k {
                (delta.abs(), 0)
            } else {
                let base = len as i32;
                (base, base + delta)
            };
            segs.push(ExcitationSegment::new(
                len,
                start_index,
                end_index,
                start_height,
                end_height,
            ));
            prev_end = Some(end_index);
        }
        let viable = segs
            .iter()
            .enumerate()
            .all(|(i, s)| s.walks(i == 0, i == k).is_ok_and(|w| !w.is_empty()));
        if viable {
            return Ok(segs);
        }
    }
    Err(Error::InvalidExcitation(format!(
        "no viable {k}-disconnection layout on {n} sites after {ATTEMPTS} draws"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_step_ground_state() {
        let paths = enumerate_walks(4, WalkClass::zero(1, 1), Floor::Restricted).unwrap();
        let s = build_path_state(&paths).unwrap();
        let support = s.support(1e-12);
        assert_eq!(support.len(), 6);
        assert!(support.iter().all(|(_, a)| (a - 1.0 / 6f64.sqrt()).abs() < 1e-15));
    }

    #[test]
    fn single_path_is_basis_state() {
        let p = Path::parse("1,2 2,1").unwrap();
        let s = build_path_state(std::slice::from_ref(&p)).unwrap();
        assert_eq!(s.amplitudes()[p.encode()], 1.0);
        assert!(build_path_state(&[]).is_err());
    }

    #[test]
    fn segment_classes() {
        let segs = [
            ExcitationSegment::new(2, 1, 1, 0, 0),
            ExcitationSegment::new(3, 2, 1, 1, 0),
        ];
        let last = segs[1].walks(false, true).unwrap();
        let texts: Vec<String> = last.iter().map(|p| p.to_string()).collect();
        assert_eq!(texts.len(), 3);
        for t in ["2,3 3,2 2,1", "2,1 1,2 2,1", "2,1 1,3 3,1"] {
            assert!(texts.contains(&t.to_string()), "{t} missing from {texts:?}");
        }
        assert_eq!(build_excitation(&segs).unwrap().support(0.0).len(), 6);
    }

    #[test]
    fn random_layouts_are_viable() {
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(3);
        for (n, k) in [(4, 1), (6, 2), (6, 5), (5, 4)] {
            for _ in 0..5 {
                let segs = random_excitation_segments(n, k, &mut rng).unwrap();
                assert_eq!(segs.len(), k + 1);
                assert_eq!(segs.iter().map(|s| s.length).sum::<usize>(), n);
                let state = build_excitation(&segs).unwrap();
                for (p, _) in state.support(0.0) {
                    assert_eq!(p.disconnections().len(), k);
                }
            }
        }
        assert!(random_excitation_segments(4, 4, &mut rng).is_err());
    }

    #[test]
    fn connected_junction_rejected() {
        let segs = [
            ExcitationSegment::new(2, 1, 1, 0, 0),
            ExcitationSegment::new(2, 1, 1, 0, 0),
        ];
        assert!(matches!(build_excitation(&segs), Err(Error::InvalidExcitation(_))));
    }
}

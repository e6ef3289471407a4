//! Forward transfer over (height, last step): exact end-point distributions
//! and a log-domain mirror for lengths where exact integers get expensive.

use std::ops::AddAssign;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::walk::Step;

/// Which adjacent step pairs a walk may contain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StepRule {
    /// Every connected, nonnegative walk.
    Connected,
    /// Connected and nonnegative, with no `x13 x32` or `x23 x31` factor.
    Balanced,
}

impl StepRule {
    pub fn allows(self, prev: Step, next: Step) -> bool {
        if !prev.connects_to(next) {
            return false;
        }
        match self {
            StepRule::Connected => true,
            StepRule::Balanced => {
                !((prev == Step::X13 && next == Step::X32) || (prev == Step::X23 && next == Step::X31))
            }
        }
    }
}

/// Number (or log-number) of walks of a fixed length from `(0, start_index)`,
/// resolved by end height and end index.
#[derive(Clone, Debug, PartialEq)]
pub struct EndDistribution<T> {
    pub length: usize,
    pub start_index: u8,
    by_height: Vec<[T; 3]>,
}

impl<T: Clone> EndDistribution<T> {
    /// Entry for end height `h` and end index `b`, if `h` is within range.
    pub fn get(&self, h: usize, b: u8) -> Option<&T> {
        self.by_height.get(h).map(|row| &row[b as usize - 1])
    }

    pub fn max_height(&self) -> usize {
        self.by_height.len().saturating_sub(1)
    }
}

struct Layer<T> {
    // by_height[h][step code]
    by_height: Vec<[T; 6]>,
}

fn advance<T>(rule: StepRule, layer: &Layer<T>) -> Layer<T>
where
    T: Clone + Zero + for<'a> AddAssign<&'a T>,
{
    let mut next: Vec<[T; 6]> = vec![std::array::from_fn(|_| T::zero()); layer.by_height.len() + 1];
    for (h, row) in layer.by_height.iter().enumerate() {
        for prev in Step::ALL {
            let c = &row[prev.code() as usize];
            if c.is_zero() {
                continue;
            }
            for s in Step::starting_with(prev.end()) {
                if !rule.allows(prev, s) {
                    continue;
                }
                let nh = h as i64 + s.delta() as i64;
                if nh < 0 {
                    continue;
                }
                next[nh as usize][s.code() as usize] += c;
            }
        }
    }
    while next.len() > 1 && next.last().is_some_and(|r| r.iter().all(Zero::is_zero)) {
        next.pop();
    }
    Layer { by_height: next }
}

fn first_layer<T: Clone + Zero + One>(start_index: u8) -> Layer<T> {
    let mut by_height: Vec<[T; 6]> = vec![std::array::from_fn(|_| T::zero()); 2];
    for s in Step::starting_with(start_index) {
        if s.delta() > 0 {
            by_height[1][s.code() as usize] = T::one();
        }
    }
    Layer { by_height }
}

fn snapshot<T: Clone + Zero + for<'a> AddAssign<&'a T>>(
    layer: &Layer<T>,
    length: usize,
    start_index: u8,
) -> EndDistribution<T> {
    let by_height = layer
        .by_height
        .iter()
        .map(|row| {
            let mut out: [T; 3] = std::array::from_fn(|_| T::zero());
            for s in Step::ALL {
                out[s.end() as usize - 1] += &row[s.code() as usize];
            }
            out
        })
        .collect();
    EndDistribution {
        length,
        start_index,
        by_height,
    }
}

fn empty_walk<T: Clone + Zero + One>(start_index: u8) -> EndDistribution<T> {
    let mut row: [T; 3] = std::array::from_fn(|_| T::zero());
    row[start_index as usize - 1] = T::one();
    EndDistribution {
        length: 0,
        start_index,
        by_height: vec![row],
    }
}

fn check_args(start_index: u8, lengths: &[usize]) {
    assert!((1..=3).contains(&start_index), "arrow index must be 1..=3");
    assert!(
        lengths.windows(2).all(|w| w[0] <= w[1]),
        "snapshot lengths must be sorted"
    );
}

/// Exact end distributions at each requested length (sorted ascending).
pub fn exact_end_counts(rule: StepRule, start_index: u8, lengths: &[usize]) -> Vec<EndDistribution<BigUint>> {
    check_args(start_index, lengths);
    let mut out = Vec::with_capacity(lengths.len());
    let mut wanted = lengths.iter().copied().peekable();
    while wanted.peek() == Some(&0) {
        out.push(empty_walk(start_index));
        wanted.next();
    }
    let Some(&last) = lengths.last() else {
        return out;
    };
    if last == 0 {
        return out;
    }
    let mut layer = first_layer::<BigUint>(start_index);
    for len in 1..=last {
        if len > 1 {
            layer = advance(rule, &layer);
        }
        while wanted.peek() == Some(&len) {
            out.push(snapshot(&layer, len, start_index));
            wanted.next();
        }
    }
    out
}

/// Log-domain end distributions: entries are `ln(count)`, `-inf` for zero.
///
/// Each layer is rescaled by its largest entry, so entries smaller than the
/// largest by more than the `f64` range read as zero.
pub fn log_end_counts(rule: StepRule, start_index: u8, lengths: &[usize]) -> Vec<EndDistribution<f64>> {
    check_args(start_index, lengths);
    let to_log = |d: EndDistribution<f64>, shift: f64| EndDistribution {
        length: d.length,
        start_index: d.start_index,
        by_height: d
            .by_height
            .into_iter()
            .map(|row| row.map(|v| if v > 0.0 { v.ln() + shift } else { f64::NEG_INFINITY }))
            .collect(),
    };
    let mut out = Vec::with_capacity(lengths.len());
    let mut wanted = lengths.iter().copied().peekable();
    while wanted.peek() == Some(&0) {
        out.push(to_log(empty_walk(start_index), 0.0));
        wanted.next();
    }
    let Some(&last) = lengths.last() else {
        return out;
    };
    if last == 0 {
        return out;
    }
    let mut layer = first_layer::<f64>(start_index);
    let mut ln_scale = 0.0;
    for len in 1..=last {
        if len > 1 {
            layer = advance(rule, &layer);
            let peak = layer
                .by_height
                .iter()
                .flat_map(|r| r.iter())
                .fold(0.0f64, |m, &v| m.max(v));
            if peak > 0.0 {
                for row in &mut layer.by_height {
                    for v in row.iter_mut() {
                        *v /= peak;
                    }
                }
                ln_scale += peak.ln();
            }
        }
        while wanted.peek() == Some(&len) {
            out.push(to_log(snapshot(&layer, len, start_index), ln_scale));
            wanted.next();
        }
    }
    out
}

/// Natural logarithm of a big unsigned integer (`-inf` for zero).
pub fn ln_biguint(v: &BigUint) -> f64 {
    if v.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = v.bits();
    if bits <= 1000 {
        let f: f64 = num_traits::ToPrimitive::to_f64(v).unwrap_or(f64::INFINITY);
        if f.is_finite() {
            return f.ln();
        }
    }
    let shift = bits - 64;
    let top: u64 = (v >> shift).try_into().expect("64 leading bits fit");
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::phase1::Phase1Table;
    use crate::count::phase3::Phase3Class;

    #[test]
    fn exact_matches_recursion_table() {
        let lengths: Vec<usize> = (0..=16).collect();
        let t = Phase1Table::new(16, 16);
        for a in 1..=3u8 {
            let snaps = exact_end_counts(StepRule::Connected, a, &lengths);
            for snap in &snaps {
                for h in 0..=snap.length {
                    for b in 1..=3u8 {
                        let got = snap.get(h, b).cloned().unwrap_or_default();
                        assert_eq!(&got, t.get(snap.length, h, a, b), "n={} h={h} {a}->{b}", snap.length);
                    }
                }
            }
        }
    }

    #[test]
    fn balanced_rule_matches_rational_forms() {
        let lengths: Vec<usize> = (0..=20).collect();
        for class in Phase3Class::ALL {
            let (h, a, b) = class.endpoints();
            let want = class.counts(20);
            let snaps = exact_end_counts(StepRule::Balanced, a, &lengths);
            for (n, snap) in snaps.iter().enumerate() {
                assert_eq!(snap.get(h, b).cloned().unwrap_or_default(), want[n], "{class:?} n={n}");
            }
        }
    }

    #[test]
    fn log_domain_tracks_exact() {
        let lengths = [10, 60, 200];
        let exact = exact_end_counts(StepRule::Connected, 1, &lengths);
        let logs = log_end_counts(StepRule::Connected, 1, &lengths);
        for (e, l) in exact.iter().zip(&logs) {
            for h in 0..=e.max_height() {
                for b in 1..=3 {
                    let x = ln_biguint(e.get(h, b).unwrap());
                    let y = *l.get(h, b).unwrap();
                    if x.is_finite() {
                        assert!((x - y).abs() < 1e-9 * x.abs().max(1.0), "h={h} b={b}: {x} vs {y}");
                    } else {
                        assert_eq!(y, f64::NEG_INFINITY);
                    }
                }
            }
        }
    }

    #[test]
    fn ln_of_large_integers() {
        let v = BigUint::from(3u32).pow(2000);
        assert!((ln_biguint(&v) - 2000.0 * 3f64.ln()).abs() < 1e-9);
        assert!((ln_biguint(&BigUint::from(6u32)) - 6f64.ln()).abs() < 1e-15);
    }
}

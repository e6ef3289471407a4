//! Schmidt weights of the uniform ground states from walk counts.
//!
//! A ground state of class `{cd}` is the uniform superposition over its
//! walks. Cutting a walk of length `2n` after `n + r` steps leaves a prefix
//! from `(0, c)` to `(h, a)` and a suffix that, read backwards, runs from
//! `(0, d)` to `(h, a)`. The prefix and suffix sets depend only on `(h, a)`,
//! so `p(h, a) = N_L(h, a) N_R(h, a) / N_{2n, c -> d}`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::count::{exact_end_counts, log_end_counts, Phase, Phase2Class, Phase2Table, Phase3Class, StepRule};
use crate::error::{Error, Result};

/// Equivalence class `{ab}` of a ground state: first index of the first step
/// and last index of the last step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassLabel {
    pub start: u8,
    pub end: u8,
}

impl ClassLabel {
    pub fn new(start: u8, end: u8) -> Result<ClassLabel> {
        if !(1..=3).contains(&start) || !(1..=3).contains(&end) {
            return Err(Error::InvalidInput(format!(
                "class indices must be 1..=3, got {{{start}{end}}}"
            )));
        }
        Ok(ClassLabel { start, end })
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.start, self.end)
    }
}

impl FromStr for ClassLabel {
    type Err = Error;

    /// Accepts `11`, `{11}` and `1,1`.
    fn from_str(s: &str) -> Result<ClassLabel> {
        let digits: Vec<u8> = s
            .chars()
            .filter(|c| !matches!(c, '{' | '}' | ',' | ' '))
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::Parse(format!("bad class `{s}`")))
            })
            .collect::<Result<_>>()?;
        match digits.as_slice() {
            [a, b] => ClassLabel::new(*a, *b),
            _ => Err(Error::Parse(format!("class `{s}` needs two indices"))),
        }
    }
}

impl Serialize for ClassLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// How the walk counts behind a distribution were obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CountRoute {
    /// Big-integer counts; normalization holds exactly before conversion.
    Exact,
    /// Rescaled floating-point transfer; normalization holds to `1e-9`.
    LogDomain,
}

/// Above this total length phase-I and phase-III distributions switch to
/// log-domain counts unless a route is forced.
pub const EXACT_LENGTH_CAP: usize = 2000;

const LOG_NORMALIZATION_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SchmidtEntry {
    pub height: usize,
    pub index: u8,
    pub probability: f64,
}

/// Squared Schmidt coefficients `p(h, a)` at the cut `(n + r | n - r)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SchmidtDistribution {
    pub phase: Phase,
    pub class: ClassLabel,
    pub left_len: usize,
    pub right_len: usize,
    pub route: CountRoute,
    /// Nonzero entries ordered by `(height, index)`.
    pub entries: Vec<SchmidtEntry>,
}

impl SchmidtDistribution {
    pub fn total_len(&self) -> usize {
        self.left_len + self.right_len
    }

    pub fn probability(&self, height: usize, index: u8) -> f64 {
        self.entries
            .iter()
            .find(|e| e.height == height && e.index == index)
            .map_or(0.0, |e| e.probability)
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|e| e.probability).sum()
    }
}

/// Classes whose uniform state the counting route describes.
pub fn supported_classes(phase: Phase) -> &'static [ClassLabel] {
    const MIXING: [ClassLabel; 4] = [
        ClassLabel { start: 1, end: 1 },
        ClassLabel { start: 1, end: 2 },
        ClassLabel { start: 2, end: 1 },
        ClassLabel { start: 2, end: 2 },
    ];
    const UNMIXED: [ClassLabel; 1] = [ClassLabel { start: 1, end: 1 }];
    const BALANCED: [ClassLabel; 2] = [ClassLabel { start: 1, end: 1 }, ClassLabel { start: 2, end: 2 }];
    match phase {
        Phase::Mixing => &MIXING,
        Phase::Unmixed => &UNMIXED,
        Phase::Balanced => &BALANCED,
    }
}

/// Schmidt distribution of the class-`{cd}` ground state of length `2n`, cut
/// after `n + r` sites. Phase II covers only the sector of `(x12 x21)^n`.
pub fn schmidt_distribution(n: usize, r: usize, phase: Phase, class: ClassLabel) -> Result<SchmidtDistribution> {
    let route = match phase {
        Phase::Unmixed => CountRoute::Exact,
        _ if 2 * n > EXACT_LENGTH_CAP => CountRoute::LogDomain,
        _ => CountRoute::Exact,
    };
    schmidt_distribution_with(n, r, phase, class, route)
}

/// As [`schmidt_distribution`] with the count route forced. Phase II has no
/// log-domain route.
pub fn schmidt_distribution_with(
    n: usize,
    r: usize,
    phase: Phase,
    class: ClassLabel,
    route: CountRoute,
) -> Result<SchmidtDistribution> {
    if n == 0 || r >= n {
        return Err(Error::InvalidInput(format!("need 0 <= r < n, got n = {n}, r = {r}")));
    }
    if !supported_classes(phase).contains(&class) {
        return Err(Error::InvalidInput(format!(
            "class {{{class}}} has no counting route in phase {}",
            phase.roman()
        )));
    }
    let (left_len, right_len) = (n + r, n - r);
    let entries = match (phase, route) {
        (Phase::Mixing, CountRoute::Exact) => exact_transfer(StepRule::Connected, class, left_len, right_len)?,
        (Phase::Balanced, CountRoute::Exact) => exact_balanced(class, left_len, right_len)?,
        (Phase::Unmixed, CountRoute::Exact) => exact_unmixed(left_len, right_len)?,
        (Phase::Mixing, CountRoute::LogDomain) => log_transfer(StepRule::Connected, class, left_len, right_len)?,
        (Phase::Balanced, CountRoute::LogDomain) => log_transfer(StepRule::Balanced, class, left_len, right_len)?,
        (Phase::Unmixed, CountRoute::LogDomain) => {
            return Err(Error::InvalidInput(
                "phase II distributions use exact counts only".into(),
            ))
        }
    };
    Ok(SchmidtDistribution {
        phase,
        class,
        left_len,
        right_len,
        route,
        entries,
    })
}

// products N_L N_R keyed by (h, a), checked to sum to the independent total
fn from_exact(weights: Vec<(usize, u8, BigUint)>, total: &BigUint) -> Result<Vec<SchmidtEntry>> {
    if total.is_zero() {
        return Err(Error::InvalidInput("the class has no walks at this length".into()));
    }
    let sum = weights.iter().fold(BigUint::zero(), |acc, (_, _, w)| acc + w);
    if &sum != total {
        return Err(Error::IdentityViolation(format!(
            "Schmidt weights sum to {sum}, expected {total}"
        )));
    }
    Ok(weights
        .into_iter()
        .map(|(height, index, w)| SchmidtEntry {
            height,
            index,
            probability: ratio(&w, total),
        })
        .collect())
}

/// `num / den` rounded to `f64` with full relative precision.
pub(crate) fn ratio(num: &BigUint, den: &BigUint) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let shift = (64 + den.bits()).saturating_sub(num.bits());
    let q = (num << shift) / den;
    let mantissa = q.to_f64().unwrap_or(f64::INFINITY);
    // split the scaling so huge shifts do not overflow to inf * 0
    let mut p = mantissa;
    let mut left = shift as i64;
    while left > 0 {
        let step = left.min(1000);
        p *= 2f64.powi(-(step as i32));
        left -= step;
    }
    p
}

fn exact_transfer(rule: StepRule, class: ClassLabel, left: usize, right: usize) -> Result<Vec<SchmidtEntry>> {
    let total_len = left + right;
    let from_start = exact_end_counts(rule, class.start, &[right, left, total_len]);
    let total = from_start[2].get(0, class.end).cloned().unwrap_or_default();
    let (left_dist, right_dist) = if class.start == class.end {
        (&from_start[1], from_start[0].clone())
    } else {
        let mut d = exact_end_counts(rule, class.end, &[right]);
        (&from_start[1], d.pop().expect("one snapshot"))
    };
    let mut weights = Vec::new();
    for h in 0..=left_dist.max_height().min(right_dist.max_height()) {
        for a in 1..=3u8 {
            let l = left_dist.get(h, a).expect("height in range");
            let r = right_dist.get(h, a).expect("height in range");
            if !l.is_zero() && !r.is_zero() {
                weights.push((h, a, l * r));
            }
        }
    }
    from_exact(weights, &total)
}

fn exact_balanced(class: ClassLabel, left: usize, right: usize) -> Result<Vec<SchmidtEntry>> {
    let total_class = Phase3Class::from_endpoints(0, class.start, class.end)
        .ok_or_else(|| Error::InvalidInput(format!("no phase-III walks in class {{{class}}}")))?;
    let total = total_class.counts(left + right).pop().unwrap_or_default();
    let mut weights = Vec::new();
    for cls in Phase3Class::ALL {
        let (h, start, a) = cls.endpoints();
        if start != class.start {
            continue;
        }
        let Some(partner) = Phase3Class::from_endpoints(h, class.end, a) else {
            continue;
        };
        let l = cls.counts(left).pop().unwrap_or_default();
        let r = partner.counts(right).pop().unwrap_or_default();
        if !l.is_zero() && !r.is_zero() {
            weights.push((h, a, l * r));
        }
    }
    weights.sort_by_key(|(h, a, _)| (*h, *a));
    from_exact(weights, &total)
}

fn exact_unmixed(left: usize, right: usize) -> Result<Vec<SchmidtEntry>> {
    let table = Phase2Table::new(left + right);
    let total = table.get(Phase2Class::Returning, left + right);
    let families = [
        (0, 1, Phase2Class::Returning),
        (1, 2, Phase2Class::RaisedTwo),
        (1, 3, Phase2Class::RaisedThree),
        (2, 3, Phase2Class::DoubleRaisedThree),
    ];
    let mut weights = Vec::new();
    for (h, a, family) in families {
        let l = table.get(family, left);
        let r = table.get(family, right);
        if !l.is_zero() && !r.is_zero() {
            weights.push((h, a, l * r));
        }
    }
    from_exact(weights, &total)
}

fn log_transfer(rule: StepRule, class: ClassLabel, left: usize, right: usize) -> Result<Vec<SchmidtEntry>> {
    let total_len = left + right;
    let from_start = log_end_counts(rule, class.start, &[right, left, total_len]);
    let ln_total = from_start[2].get(0, class.end).copied().unwrap_or(f64::NEG_INFINITY);
    if !ln_total.is_finite() {
        return Err(Error::InvalidInput("the class has no walks at this length".into()));
    }
    let right_dist = if class.start == class.end {
        from_start[0].clone()
    } else {
        log_end_counts(rule, class.end, &[right]).pop().expect("one snapshot")
    };
    let left_dist = &from_start[1];
    let mut entries = Vec::new();
    for h in 0..=left_dist.max_height().min(right_dist.max_height()) {
        for a in 1..=3u8 {
            let l = *left_dist.get(h, a).expect("height in range");
            let r = *right_dist.get(h, a).expect("height in range");
            if l.is_finite() && r.is_finite() {
                let probability = (l + r - ln_total).exp();
                if probability > 0.0 {
                    entries.push(SchmidtEntry {
                        height: h,
                        index: a,
                        probability,
                    });
                }
            }
        }
    }
    let sum: f64 = entries.iter().map(|e| e.probability).sum();
    if (sum - 1.0).abs() > LOG_NORMALIZATION_TOL {
        return Err(Error::IdentityViolation(format!(
            "log-domain Schmidt weights sum to {sum}"
        )));
    }
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk::{enumerate_walks, Floor, Path, WalkClass};
    use std::collections::{BTreeMap, BTreeSet};

    fn label(s: &str) -> ClassLabel {
        s.parse().unwrap()
    }

    #[test]
    fn label_parsing() {
        assert_eq!(label("12"), ClassLabel { start: 1, end: 2 });
        assert_eq!(label("{21}"), ClassLabel { start: 2, end: 1 });
        assert_eq!(label("2,2").to_string(), "22");
        assert!("1".parse::<ClassLabel>().is_err());
        assert!("14".parse::<ClassLabel>().is_err());
    }

    #[test]
    fn ratio_keeps_precision() {
        let den = BigUint::from(3u32).pow(2000);
        let num = &den / BigUint::from(7u32);
        assert!((ratio(&num, &den) - 1.0 / 7.0).abs() < 1e-15);
        assert_eq!(ratio(&BigUint::zero(), &den), 0.0);
        assert_eq!(ratio(&den, &den), 1.0);
    }

    #[test]
    fn four_site_mixing_weights() {
        let d = schmidt_distribution(2, 0, Phase::Mixing, label("11")).unwrap();
        assert!((d.total() - 1.0).abs() < 1e-15);
        assert_eq!(d.left_len, 2);
        for e in &d.entries {
            assert!(e.probability > 0.0);
        }
    }

    #[test]
    fn distributions_match_enumerated_splits() {
        // group the enumerated walks by the data at the cut
        for (phase, class, n, r) in [
            (Phase::Mixing, "11", 3, 0),
            (Phase::Mixing, "12", 3, 1),
            (Phase::Mixing, "21", 4, 1),
            (Phase::Mixing, "22", 4, 0),
            (Phase::Balanced, "11", 4, 1),
            (Phase::Balanced, "22", 3, 0),
        ] {
            let class = label(class);
            let total = 2 * n;
            let mut walks = enumerate_walks(total, WalkClass::zero(class.start, class.end), Floor::Restricted).unwrap();
            if phase == Phase::Balanced {
                walks.retain(|p| p.steps().windows(2).all(|w| StepRule::Balanced.allows(w[0], w[1])));
            }
            let mut groups: BTreeMap<(usize, u8), usize> = BTreeMap::new();
            for w in &walks {
                let h = w.heights()[n + r] as usize;
                let a = w.steps()[n + r - 1].end();
                *groups.entry((h, a)).or_default() += 1;
            }
            let d = schmidt_distribution(n, r, phase, class).unwrap();
            assert_eq!(d.entries.len(), groups.len(), "{phase:?} {class}");
            for ((h, a), c) in groups {
                let expect = c as f64 / walks.len() as f64;
                assert!(
                    (d.probability(h, a) - expect).abs() < 1e-14,
                    "{phase:?} {class} ({h},{a})"
                );
            }
        }
    }

    #[test]
    fn unmixed_matches_closure_splits() {
        use crate::walk::{equivalence_closure, MoveSet};
        for (n, r) in [(2usize, 0usize), (3, 0), (3, 1), (4, 1), (4, 2)] {
            let seed = Path::from_pairs(&[(1, 2), (2, 1)].repeat(n)).unwrap();
            let closure = equivalence_closure(&seed, MoveSet::WITHOUT_W2).unwrap();
            let mut groups: BTreeMap<(usize, u8), usize> = BTreeMap::new();
            for w in &closure {
                let h = w.heights()[n + r] as usize;
                *groups.entry((h, w.steps()[n + r - 1].end())).or_default() += 1;
            }
            let d = schmidt_distribution(n, r, Phase::Unmixed, label("11")).unwrap();
            assert_eq!(d.entries.len(), groups.len());
            for ((h, a), c) in groups {
                let expect = c as f64 / closure.len() as f64;
                assert!((d.probability(h, a) - expect).abs() < 1e-14, "n={n} r={r} ({h},{a})");
            }
        }
    }

    #[test]
    fn blocks_at_the_cut_factorize() {
        // walks sharing (h, a) at the cut are exactly prefix-set x suffix-set
        for total in [4usize, 6, 8] {
            let walks = enumerate_walks(total, WalkClass::zero(1, 1), Floor::Restricted).unwrap();
            for cut in 1..total {
                let mut blocks: BTreeMap<(i32, u8), (BTreeSet<Path>, BTreeSet<Path>, usize)> = BTreeMap::new();
                for w in &walks {
                    let key = (w.heights()[cut], w.steps()[cut - 1].end());
                    let e = blocks.entry(key).or_default();
                    e.0.insert(Path::new(w.steps()[..cut].to_vec()));
                    e.1.insert(Path::new(w.steps()[cut..].to_vec()));
                    e.2 += 1;
                }
                let mut prefixes = BTreeSet::new();
                for (_, (l, r, c)) in blocks {
                    assert_eq!(l.len() * r.len(), c);
                    for p in l {
                        assert!(prefixes.insert(p), "prefix shared between blocks");
                    }
                }
            }
        }
    }

    #[test]
    fn balanced_two_two_is_a_product() {
        for (n, r) in [(3, 0), (3, 1), (10, 3), (50, 7)] {
            let d = schmidt_distribution(n, r, Phase::Balanced, label("22")).unwrap();
            assert_eq!(d.entries.len(), 1);
            assert_eq!(d.entries[0].probability, 1.0);
        }
    }

    #[test]
    fn unmixed_parity_structure() {
        let even = schmidt_distribution(30, 2, Phase::Unmixed, label("11")).unwrap();
        let keys: Vec<_> = even.entries.iter().map(|e| (e.height, e.index)).collect();
        assert_eq!(keys, vec![(0, 1), (2, 3)]);
        let odd = schmidt_distribution(30, 1, Phase::Unmixed, label("11")).unwrap();
        let keys: Vec<_> = odd.entries.iter().map(|e| (e.height, e.index)).collect();
        assert_eq!(keys, vec![(1, 2), (1, 3)]);
        let golden = (5f64.sqrt() + 1.0) / (2.0 * 5f64.sqrt());
        assert!((even.probability(0, 1) - golden).abs() < 1e-6);
        assert!((odd.probability(1, 2) - golden).abs() < 1e-6);
    }

    #[test]
    fn log_route_agrees_with_exact() {
        for (phase, class, n, r) in [
            (Phase::Mixing, "11", 60, 0),
            (Phase::Mixing, "12", 40, 5),
            (Phase::Balanced, "11", 50, 3),
        ] {
            let class = label(class);
            let e = schmidt_distribution_with(n, r, phase, class, CountRoute::Exact).unwrap();
            let l = schmidt_distribution_with(n, r, phase, class, CountRoute::LogDomain).unwrap();
            assert_eq!(e.entries.len(), l.entries.len());
            for (x, y) in e.entries.iter().zip(&l.entries) {
                assert_eq!((x.height, x.index), (y.height, y.index));
                assert!((x.probability - y.probability).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_unsupported() {
        assert!(schmidt_distribution(4, 0, Phase::Unmixed, label("12")).is_err());
        assert!(schmidt_distribution(4, 0, Phase::Balanced, label("12")).is_err());
        assert!(schmidt_distribution(4, 0, Phase::Mixing, label("33")).is_err());
        assert!(schmidt_distribution(4, 4, Phase::Mixing, label("11")).is_err());
        assert!(schmidt_distribution_with(4, 0, Phase::Unmixed, label("11"), CountRoute::LogDomain).is_err());
    }
}

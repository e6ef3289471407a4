use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::path::Path;
use super::step::Step;
use crate::error::{Error, Result};

/// Start index, end index and end height of a family of walks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WalkClass {
    pub start_index: u8,
    pub end_index: u8,
    pub end_height: i32,
}

impl WalkClass {
    pub fn new(start_index: u8, end_index: u8, end_height: i32) -> WalkClass {
        WalkClass {
            start_index,
            end_index,
            end_height,
        }
    }

    /// The zero-height class `{ab}`.
    pub fn zero(start_index: u8, end_index: u8) -> WalkClass {
        WalkClass::new(start_index, end_index, 0)
    }
}

/// Whether walks are kept at or above height zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Floor {
    /// Start at height 0 and never dip below 0.
    Restricted,
    /// Start at the declared height, no floor.
    Unrestricted { start_height: i32 },
}

impl Floor {
    fn start_height(self) -> i32 {
        match self {
            Floor::Restricted => 0,
            Floor::Unrestricted { start_height } => start_height,
        }
    }
}

/// Guards for the exhaustive enumerators.
#[derive(Clone, Copy, Debug)]
pub struct EnumerationLimits {
    pub max_len: usize,
    pub max_paths: usize,
    pub deadline: Option<Duration>,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits {
            max_len: 14,
            max_paths: 5_000_000,
            deadline: Some(Duration::from_secs(300)),
        }
    }
}

impl EnumerationLimits {
    pub fn with_max_len(max_len: usize) -> Self {
        EnumerationLimits {
            max_len,
            ..Default::default()
        }
    }
}

/// Largest height reachable by a connected nonnegative walk of `n` steps.
pub fn max_height(n: usize) -> Result<usize> {
    match n {
        0 => Err(Error::InvalidInput("max_height needs at least one step".into())),
        1 => Ok(1),
        _ => Ok((n - 2) / 3 + 2),
    }
}

/// Every connected walk of length `n` in `class`, sorted by encoding.
///
/// This is a plain depth-first enumeration over step sequences, pruned only
/// by connectivity, the floor, and reachability of the target height. It is
/// the reference that all counting code is checked against.
pub fn enumerate_walks(n: usize, class: WalkClass, floor: Floor) -> Result<Vec<Path>> {
    enumerate_walks_with(n, class, floor, &EnumerationLimits::default())
}

pub fn enumerate_walks_with(n: usize, class: WalkClass, floor: Floor, limits: &EnumerationLimits) -> Result<Vec<Path>> {
    if n > limits.max_len {
        return Err(Error::Capacity(format!(
            "enumeration of length {n} exceeds cap {}",
            limits.max_len
        )));
    }
    if !(1..=3).contains(&class.start_index) || !(1..=3).contains(&class.end_index) {
        return Err(Error::InvalidInput(format!("bad arrow indices in {class:?}")));
    }
    let start_h = floor.start_height();
    let restricted = matches!(floor, Floor::Restricted);
    if restricted && class.end_height < 0 {
        return Err(Error::InvalidInput("restricted walks end at height >= 0".into()));
    }
    if n == 0 {
        let hit = class.start_index == class.end_index && class.end_height == start_h;
        return Ok(if hit { vec![Path::empty()] } else { Vec::new() });
    }
    let mut search = Search {
        n,
        target: class.end_height,
        end_index: class.end_index,
        restricted,
        limits,
        started: Instant::now(),
        buf: Vec::with_capacity(n),
        out: Vec::new(),
        visits: 0,
    };
    for s in Step::starting_with(class.start_index) {
        search.descend(s, start_h)?;
    }
    let mut out = search.out;
    out.sort();
    Ok(out)
}

struct Search<'a> {
    n: usize,
    target: i32,
    end_index: u8,
    restricted: bool,
    limits: &'a EnumerationLimits,
    started: Instant,
    buf: Vec<Step>,
    out: Vec<Path>,
    visits: u64,
}

impl Search<'_> {
    fn descend(&mut self, step: Step, height: i32) -> Result<()> {
        let h = height + step.delta();
        if self.restricted && h < 0 {
            return Ok(());
        }
        let remaining = (self.n - self.buf.len() - 1) as i32;
        if (h - self.target).abs() > remaining {
            return Ok(());
        }
        self.visits += 1;
        if self.visits.is_multiple_of(1 << 20) {
            if let Some(limit) = self.limits.deadline {
                if self.started.elapsed() > limit {
                    return Err(Error::Capacity("enumeration wall-clock guard hit".into()));
                }
            }
        }
        self.buf.push(step);
        if remaining == 0 {
            if h == self.target && step.end() == self.end_index {
                if self.out.len() >= self.limits.max_paths {
                    return Err(Error::Capacity("enumeration result cap hit".into()));
                }
                self.out.push(Path::new(self.buf.clone()));
            }
        } else {
            for next in Step::starting_with(step.end()) {
                self.descend(next, h)?;
            }
        }
        self.buf.pop();
        Ok(())
    }
}

/// Every connected step sequence of length `n`, in encoding order.
pub fn all_connected(n: usize) -> Vec<Path> {
    if n == 0 {
        return vec![Path::empty()];
    }
    let mut out = Vec::with_capacity(6 << (n - 1));
    let mut buf = Vec::with_capacity(n);
    fn go(n: usize, buf: &mut Vec<Step>, out: &mut Vec<Path>) {
        if buf.len() == n {
            out.push(Path::new(buf.clone()));
            return;
        }
        let candidates: Vec<Step> = match buf.last() {
            None => Step::ALL.to_vec(),
            Some(s) => Step::starting_with(s.end()).collect(),
        };
        for s in candidates {
            buf.push(s);
            go(n, buf, out);
            buf.pop();
        }
    }
    go(n, &mut buf, &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn max_height_values() {
        assert!(max_height(0).is_err());
        assert_eq!(max_height(1).unwrap(), 1);
        assert_eq!(max_height(2).unwrap(), 2);
        assert_eq!(max_height(5).unwrap(), 3);
        assert_eq!(max_height(11).unwrap(), 5);
    }

    #[test]
    fn four_step_zero_height() {
        let walks = enumerate_walks(4, WalkClass::zero(1, 1), Floor::Restricted).unwrap();
        assert_eq!(walks.len(), 6);
        let expected = [
            "1,2 2,1 1,2 2,1",
            "1,3 3,1 1,2 2,1",
            "1,2 2,1 1,3 3,1",
            "1,3 3,1 1,3 3,1",
            "1,3 3,2 2,3 3,1",
            "1,2 2,3 3,2 2,1",
        ];
        for e in expected {
            assert!(walks.contains(&Path::parse(e).unwrap()), "{e}");
        }
    }

    #[test]
    fn two_step_zero_height() {
        let walks = enumerate_walks(2, WalkClass::zero(1, 1), Floor::Restricted).unwrap();
        let expected: Vec<Path> = vec![Path::parse("1,2 2,1").unwrap(), Path::parse("1,3 3,1").unwrap()];
        assert_eq!(walks, expected);
    }

    #[test]
    fn no_walk_starts_with_three_above_zero() {
        for n in 1..=8 {
            for b in 1..=3 {
                for h in 0..=4 {
                    let w = enumerate_walks(n, WalkClass::new(3, b, h), Floor::Restricted).unwrap();
                    assert!(w.is_empty());
                }
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let err = enumerate_walks(15, WalkClass::zero(1, 1), Floor::Restricted).unwrap_err();
        assert!(matches!(err, Error::Capacity(_)));
    }

    #[test]
    fn unrestricted_may_dip() {
        let w = enumerate_walks(2, WalkClass::new(3, 3, 0), Floor::Unrestricted { start_height: 0 }).unwrap();
        let texts: Vec<String> = w.iter().map(|p| p.to_string()).collect();
        assert_eq!(texts, vec!["3,1 1,3", "3,2 2,3"]);
    }

    #[test]
    fn connected_count() {
        for n in 1..=6 {
            assert_eq!(all_connected(n).len(), 6 << (n - 1));
        }
    }
}

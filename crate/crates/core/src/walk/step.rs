use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Whether a step moves the walk up or down.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    Up,
    Down,
}

/// One arrow-indexed link `x_{a,b}` with `a != b`.
///
/// The six steps are encoded as `x12, x13, x23, x21, x31, x32 -> 0..=5`
/// (ups in lexicographic order, then downs). Every module shares this code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Step(u8);

const TABLE: [(u8, u8); 6] = [(1, 2), (1, 3), (2, 3), (2, 1), (3, 1), (3, 2)];

impl Step {
    pub const X12: Step = Step(0);
    pub const X13: Step = Step(1);
    pub const X23: Step = Step(2);
    pub const X21: Step = Step(3);
    pub const X31: Step = Step(4);
    pub const X32: Step = Step(5);

    /// All six steps in canonical order.
    pub const ALL: [Step; 6] = [Step::X12, Step::X13, Step::X23, Step::X21, Step::X31, Step::X32];

    pub fn new(a: u8, b: u8) -> Result<Step> {
        TABLE
            .iter()
            .position(|&(x, y)| x == a && y == b)
            .map(|i| Step(i as u8))
            .ok_or_else(|| Error::InvalidInput(format!("no step x_{{{a},{b}}}")))
    }

    pub fn from_code(code: u8) -> Result<Step> {
        if code < 6 {
            Ok(Step(code))
        } else {
            Err(Error::InvalidInput(format!("step code {code} out of range")))
        }
    }

    #[inline]
    pub fn code(self) -> u8 {
        self.0
    }

    /// First arrow index `a`.
    #[inline]
    pub fn start(self) -> u8 {
        TABLE[self.0 as usize].0
    }

    /// Second arrow index `b`.
    #[inline]
    pub fn end(self) -> u8 {
        TABLE[self.0 as usize].1
    }

    #[inline]
    pub fn direction(self) -> Direction {
        if self.0 < 3 {
            Direction::Up
        } else {
            Direction::Down
        }
    }

    /// Height change, `+1` or `-1`.
    #[inline]
    pub fn delta(self) -> i32 {
        if self.0 < 3 {
            1
        } else {
            -1
        }
    }

    /// `x_{b,a}`: the same link traversed backwards.
    pub fn reversed(self) -> Step {
        Step((self.0 + 3) % 6)
    }

    /// Steps whose first index is `a`.
    pub fn starting_with(a: u8) -> impl Iterator<Item = Step> {
        Step::ALL.into_iter().filter(move |s| s.start() == a)
    }

    /// `self` followed by `next` shares the arrow index at the junction.
    #[inline]
    pub fn connects_to(self, next: Step) -> bool {
        self.end() == next.start()
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.start(), self.end())
    }
}

impl std::str::FromStr for Step {
    type Err = Error;

    fn from_str(s: &str) -> Result<Step> {
        let (a, b) = s
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("expected `a,b`, got `{s}`")))?;
        let a: u8 = a
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad index in `{s}`")))?;
        let b: u8 = b
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad index in `{s}`")))?;
        Step::new(a, b).map_err(|_| Error::Parse(format!("`{s}` is not a valid step")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order() {
        let pairs: Vec<_> = Step::ALL.iter().map(|s| (s.start(), s.end())).collect();
        assert_eq!(pairs, vec![(1, 2), (1, 3), (2, 3), (2, 1), (3, 1), (3, 2)]);
    }

    #[test]
    fn direction_matches_index_order() {
        for s in Step::ALL {
            assert_ne!(s.start(), s.end());
            let up = s.start() < s.end();
            assert_eq!(s.direction() == Direction::Up, up);
            assert_eq!(s.delta(), if up { 1 } else { -1 });
            assert_eq!(s.reversed().start(), s.end());
            assert_eq!(s.reversed().reversed(), s);
        }
    }

    #[test]
    fn flat_steps_rejected() {
        assert!(Step::new(2, 2).is_err());
        assert!(Step::new(0, 1).is_err());
        assert!("3,3".parse::<Step>().is_err());
        assert_eq!("2,3".parse::<Step>().unwrap(), Step::X23);
    }
}

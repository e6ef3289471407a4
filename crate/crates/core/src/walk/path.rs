use std::fmt;

use serde::{Deserialize, Serialize};

use super::step::Step;
use crate::error::{Error, Result};

/// Connectivity class of a path together with its disconnection sites.
///
/// A site `k` (1-based, `0 < k < n`) is a disconnection when the second
/// index of step `k` differs from the first index of step `k + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Connectivity {
    Connected,
    Partial(Vec<usize>),
    TotallyDisconnected,
}

/// An ordered sequence of steps.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Path {
    steps: Vec<Step>,
}

impl Path {
    pub fn new(steps: Vec<Step>) -> Path {
        Path { steps }
    }

    pub fn empty() -> Path {
        Path { steps: Vec::new() }
    }

    /// Build from `(a, b)` pairs.
    pub fn from_pairs(pairs: &[(u8, u8)]) -> Result<Path> {
        pairs
            .iter()
            .map(|&(a, b)| Step::new(a, b))
            .collect::<Result<Vec<_>>>()
            .map(Path::new)
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn into_steps(self) -> Vec<Step> {
        self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn first_index(&self) -> Option<u8> {
        self.steps.first().map(|s| s.start())
    }

    pub fn last_index(&self) -> Option<u8> {
        self.steps.last().map(|s| s.end())
    }

    /// Height profile `h_0 = start, ..., h_n`.
    pub fn heights_from(&self, start: i32) -> Vec<i32> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        let mut h = start;
        out.push(h);
        for s in &self.steps {
            h += s.delta();
            out.push(h);
        }
        out
    }

    pub fn heights(&self) -> Vec<i32> {
        self.heights_from(0)
    }

    /// Net height change.
    pub fn displacement(&self) -> i32 {
        self.steps.iter().map(|s| s.delta()).sum()
    }

    pub fn min_height(&self) -> i32 {
        self.heights().into_iter().min().unwrap_or(0)
    }

    pub fn max_height(&self) -> i32 {
        self.heights().into_iter().max().unwrap_or(0)
    }

    /// Disconnection sites, 1-based, ascending.
    pub fn disconnections(&self) -> Vec<usize> {
        self.steps
            .windows(2)
            .enumerate()
            .filter(|(_, w)| !w[0].connects_to(w[1]))
            .map(|(k, _)| k + 1)
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.steps.windows(2).all(|w| w[0].connects_to(w[1]))
    }

    /// Maximal connected runs as half-open step ranges.
    pub fn components(&self) -> Vec<std::ops::Range<usize>> {
        let mut out = Vec::new();
        let mut start = 0;
        for k in self.disconnections() {
            out.push(start..k);
            start = k;
        }
        if !self.steps.is_empty() {
            out.push(start..self.steps.len());
        }
        out
    }

    pub fn classify(&self) -> Connectivity {
        let d = self.disconnections();
        if d.is_empty() {
            Connectivity::Connected
        } else if d.len() + 1 == self.steps.len() {
            Connectivity::TotallyDisconnected
        } else {
            Connectivity::Partial(d)
        }
    }

    /// Big-endian base-6 index into the `6^n` product basis (site 1 most significant).
    pub fn encode(&self) -> usize {
        encode_steps(&self.steps)
    }

    pub fn decode(n: usize, index: usize) -> Path {
        Path::new(decode_steps(n, index))
    }

    pub fn reversed(&self) -> Path {
        Path::new(self.steps.iter().rev().map(|s| s.reversed()).collect())
    }

    pub fn concat(&self, other: &Path) -> Path {
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&other.steps);
        Path::new(steps)
    }

    /// Parse the whitespace-separated `a,b` token format. `|` tokens mark
    /// disconnections and must agree exactly with the actual ones.
    pub fn parse(text: &str) -> Result<Path> {
        let mut steps = Vec::new();
        let mut marked = Vec::new();
        for tok in text.split_whitespace() {
            // allow `1,2|2,3` without surrounding spaces
            let mut parts = tok.split('|').peekable();
            while let Some(p) = parts.next() {
                if !p.is_empty() {
                    steps.push(p.parse::<Step>()?);
                }
                if parts.peek().is_some() {
                    marked.push(steps.len());
                }
            }
        }
        let path = Path::new(steps);
        if !marked.is_empty() {
            let actual = path.disconnections();
            if marked != actual {
                return Err(Error::Parse(format!(
                    "disconnection markers at {marked:?} disagree with actual sites {actual:?}"
                )));
            }
        }
        Ok(path)
    }

    /// Text form with `|` at every disconnection.
    pub fn to_marked_string(&self) -> String {
        let d = self.disconnections();
        let mut out = String::new();
        for (k, s) in self.steps.iter().enumerate() {
            if k > 0 {
                out.push(' ');
                if d.binary_search(&k).is_ok() {
                    out.push_str("| ");
                }
            }
            out.push_str(&s.to_string());
        }
        out
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for s in &self.steps {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Path {
    type Err = Error;
    fn from_str(s: &str) -> Result<Path> {
        Path::parse(s)
    }
}

pub(crate) fn encode_steps(steps: &[Step]) -> usize {
    steps.iter().fold(0usize, |acc, s| acc * 6 + s.code() as usize)
}

pub(crate) fn decode_steps(n: usize, mut index: usize) -> Vec<Step> {
    let mut steps = vec![Step::X12; n];
    for k in (0..n).rev() {
        steps[k] = Step::ALL[index % 6];
        index /= 6;
    }
    steps
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Path {
        Path::parse(s).unwrap()
    }

    #[test]
    fn classify_examples() {
        assert_eq!(p("1,2 2,1 1,2 2,1").classify(), Connectivity::Connected);
        assert_eq!(p("1,2 2,1 | 2,3 3,2 2,1").classify(), Connectivity::Partial(vec![2]));
        assert_eq!(p("1,2 1,2 1,2").classify(), Connectivity::TotallyDisconnected);
    }

    #[test]
    fn marker_must_agree() {
        assert!(Path::parse("1,2 | 2,1").is_err());
        assert!(Path::parse("1,2 2,1 2,3").is_ok());
        assert!(Path::parse("1,2 2,1 | 2,3 3,2 | 2,1").is_err());
        assert!(Path::parse("1,2 1,2 | 1,2").is_err());
        assert!(Path::parse("1,2 2,1|2,3 3,2").is_ok());
    }

    #[test]
    fn marked_roundtrip() {
        let path = p("1,2 2,1 | 3,1 1,3 | 1,3 3,1");
        assert_eq!(path.to_marked_string(), "1,2 2,1 | 3,1 1,3 | 1,3 3,1");
        assert_eq!(Path::parse(&path.to_marked_string()).unwrap(), path);
        assert_eq!(path.components(), vec![0..2, 2..4, 4..6]);
    }

    #[test]
    fn encoding_is_big_endian() {
        let path = p("1,3 1,2");
        assert_eq!(path.encode(), 6);
        assert_eq!(Path::decode(2, 6), path);
        let path = p("3,2 3,2 3,2");
        assert_eq!(path.encode(), 215);
    }

    #[test]
    fn heights() {
        let path = p("1,2 2,3 3,2 2,1");
        assert_eq!(path.heights(), vec![0, 1, 2, 1, 0]);
        assert_eq!(path.max_height(), 2);
        assert_eq!(path.reversed(), path);
    }
}

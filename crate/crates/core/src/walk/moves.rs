use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::path::Path;
use super::step::Step;
use crate::error::{Error, Result};

/// A local rewrite `left <-> right` on a contiguous window of steps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalMove {
    pub left: &'static [Step],
    pub right: &'static [Step],
}

/// `x12 x23 x32 <-> x12 x21 x12`
pub const MOVE_U: LocalMove = LocalMove {
    left: &[Step::X12, Step::X23, Step::X32],
    right: &[Step::X12, Step::X21, Step::X12],
};

/// `x23 x32 x21 <-> x21 x12 x21`
pub const MOVE_D: LocalMove = LocalMove {
    left: &[Step::X23, Step::X32, Step::X21],
    right: &[Step::X21, Step::X12, Step::X21],
};

/// `x12 x21 <-> x13 x31`
pub const MOVE_W1: LocalMove = LocalMove {
    left: &[Step::X12, Step::X21],
    right: &[Step::X13, Step::X31],
};

/// `x31 x13 <-> x32 x23`
pub const MOVE_W2: LocalMove = LocalMove {
    left: &[Step::X31, Step::X13],
    right: &[Step::X32, Step::X23],
};

/// Which local equivalence moves are active.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveSet {
    pub enable_ud: bool,
    pub enable_w1: bool,
    pub enable_w2: bool,
}

impl MoveSet {
    /// U, D and both W moves (`lambda1 > 0`).
    pub const FULL: MoveSet = MoveSet {
        enable_ud: true,
        enable_w1: true,
        enable_w2: true,
    };

    /// U, D and the first W move only (`lambda1 = 0`).
    pub const WITHOUT_W2: MoveSet = MoveSet {
        enable_ud: true,
        enable_w1: true,
        enable_w2: false,
    };

    /// Moves generated by a Hamiltonian with second-W weight `lambda1`.
    pub fn for_lambda1(lambda1: f64) -> MoveSet {
        if lambda1 > 0.0 {
            MoveSet::FULL
        } else {
            MoveSet::WITHOUT_W2
        }
    }

    pub fn moves(&self) -> Vec<LocalMove> {
        let mut out = Vec::with_capacity(4);
        if self.enable_ud {
            out.push(MOVE_U);
            out.push(MOVE_D);
        }
        if self.enable_w1 {
            out.push(MOVE_W1);
        }
        if self.enable_w2 {
            out.push(MOVE_W2);
        }
        out
    }
}

/// All paths reachable from `path` by a single move, in either direction.
pub fn neighbours(path: &[Step], moves: &[LocalMove]) -> Vec<Vec<Step>> {
    let mut out = Vec::new();
    for m in moves {
        for (from, to) in [(m.left, m.right), (m.right, m.left)] {
            let w = from.len();
            if path.len() < w {
                continue;
            }
            for j in 0..=path.len() - w {
                if &path[j..j + w] == from {
                    let mut next = path.to_vec();
                    next[j..j + w].copy_from_slice(to);
                    out.push(next);
                }
            }
        }
    }
    out
}

/// Breadth-first closure of `seed` under `moves`, sorted.
pub fn equivalence_closure(seed: &Path, moves: MoveSet) -> Result<Vec<Path>> {
    equivalence_closure_with_cap(seed, moves, 1_000_000)
}

pub fn equivalence_closure_with_cap(seed: &Path, moves: MoveSet, cap: usize) -> Result<Vec<Path>> {
    if !seed.is_connected() {
        return Err(Error::InvalidInput(format!(
            "closure seed `{}` is not connected",
            seed.to_marked_string()
        )));
    }
    let moves = moves.moves();
    let mut seen: BTreeSet<Vec<Step>> = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(seed.steps().to_vec());
    queue.push_back(seed.steps().to_vec());
    while let Some(cur) = queue.pop_front() {
        for next in neighbours(&cur, &moves) {
            if seen.insert(next.clone()) {
                if seen.len() > cap {
                    return Err(Error::Capacity(format!("closure exceeds {cap} paths")));
                }
                queue.push_back(next);
            }
        }
    }
    Ok(seen.into_iter().map(Path::new).collect())
}

/// Partition `paths` into orbits of `moves`. Every orbit must lie inside the
/// given set; a move leaving the set is an error. Orbits are sorted
/// internally and ordered by their smallest member.
pub fn partition_into_classes(paths: &[Path], moves: MoveSet) -> Result<Vec<Vec<Path>>> {
    let index: HashMap<&[Step], usize> = paths.iter().enumerate().map(|(i, p)| (p.steps(), i)).collect();
    let moves = moves.moves();
    let mut label = vec![usize::MAX; paths.len()];
    let mut classes = Vec::new();
    for i in 0..paths.len() {
        if label[i] != usize::MAX {
            continue;
        }
        let id = classes.len();
        let mut members = vec![i];
        label[i] = id;
        let mut head = 0;
        while head < members.len() {
            let cur = members[head];
            head += 1;
            for next in neighbours(paths[cur].steps(), &moves) {
                let j = *index
                    .get(next.as_slice())
                    .ok_or_else(|| Error::InvalidInput("path set is not closed under the moves".into()))?;
                if label[j] == usize::MAX {
                    label[j] = id;
                    members.push(j);
                }
            }
        }
        let mut class: Vec<Path> = members.into_iter().map(|k| paths[k].clone()).collect();
        class.sort();
        classes.push(class);
    }
    classes.sort_by(|a, b| a[0].cmp(&b[0]));
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Path {
        Path::parse(s).unwrap()
    }

    #[test]
    fn four_step_closure_without_w2() {
        let c = equivalence_closure(&p("1,2 2,1 1,2 2,1"), MoveSet::WITHOUT_W2).unwrap();
        assert_eq!(c.len(), 5);
        assert!(!c.contains(&p("1,3 3,2 2,3 3,1")));
        assert!(c.contains(&p("1,2 2,3 3,2 2,1")));
    }

    #[test]
    fn isolated_path_without_w2() {
        let seed = p("1,3 3,2 2,3 3,1");
        let c = equivalence_closure(&seed, MoveSet::WITHOUT_W2).unwrap();
        assert_eq!(c, vec![seed]);
    }

    #[test]
    fn height_three_reached_from_ten_step_seed() {
        let seed = p("1,2 2,3 3,1 1,2 2,1 1,2 2,1 1,3 3,2 2,1");
        let target = p("1,2 2,3 3,1 1,2 2,3 3,2 2,1 1,3 3,2 2,1");
        assert_eq!(target.max_height(), 3);
        let c = equivalence_closure(&seed, MoveSet::WITHOUT_W2).unwrap();
        assert!(c.contains(&target));
    }

    #[test]
    fn closure_rejects_disconnected_seed() {
        assert!(equivalence_closure(&p("1,2 1,2"), MoveSet::FULL).is_err());
    }

    #[test]
    fn closure_cap() {
        let seed = p("1,2 2,1 1,2 2,1 1,2 2,1");
        let err = equivalence_closure_with_cap(&seed, MoveSet::FULL, 3).unwrap_err();
        assert!(matches!(err, Error::Capacity(_)));
    }
}

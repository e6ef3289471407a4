//! Counts for `lambda1 = lambda2 = 0`, restricted to the sector generated by
//! `(x12 x21)^n`.

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// The four families of walks reachable from `(x12 x21)^n` and its
/// one- and two-step extensions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Phase2Class {
    /// height 0, `1 -> 1`, even length
    Returning,
    /// height 1, `1 -> 2`, odd length
    RaisedTwo,
    /// height 1, `1 -> 3`, odd length
    RaisedThree,
    /// height 2, `1 -> 3`, even length
    DoubleRaisedThree,
}

impl Phase2Class {
    pub fn from_endpoints(h: usize, a: u8, b: u8) -> Option<Phase2Class> {
        match (h, a, b) {
            (0, 1, 1) => Some(Phase2Class::Returning),
            (1, 1, 2) => Some(Phase2Class::RaisedTwo),
            (1, 1, 3) => Some(Phase2Class::RaisedThree),
            (2, 1, 3) => Some(Phase2Class::DoubleRaisedThree),
            _ => None,
        }
    }
}

/// `M_{2k}` for `k = 0..=k_max` from `M_{2n} = 2 M_{2n-2} + sum_{k=1}^{n-1} M_{2n-2k-2}`.
pub fn returning_counts(k_max: usize) -> Vec<BigUint> {
    let mut m = vec![BigUint::one()];
    // running sum of M_0 .. M_{2n-4}
    let mut tail = BigUint::zero();
    for n in 1..=k_max {
        if n >= 2 {
            tail += &m[n - 2];
        }
        let next = BigUint::from(2u32) * &m[n - 1] + &tail;
        m.push(next);
    }
    m
}

/// Table of all four families up to a given walk length.
#[derive(Clone, Debug)]
pub struct Phase2Table {
    returning: Vec<BigUint>,
    // prefix[k] = M_0 + ... + M_{2k}
    prefix: Vec<BigUint>,
}

impl Phase2Table {
    pub fn new(len_max: usize) -> Phase2Table {
        let returning = returning_counts(len_max / 2 + 1);
        let mut prefix = Vec::with_capacity(returning.len());
        let mut acc = BigUint::zero();
        for m in &returning {
            acc += m;
            prefix.push(acc.clone());
        }
        Phase2Table { returning, prefix }
    }

    /// Count of the family `class` at walk length `len`.
    pub fn get(&self, class: Phase2Class, len: usize) -> BigUint {
        let even = len.is_multiple_of(2);
        match class {
            Phase2Class::Returning if even => self.returning[len / 2].clone(),
            Phase2Class::RaisedTwo if !even => self.prefix[len / 2].clone(),
            Phase2Class::RaisedThree if !even => self.returning[len / 2].clone(),
            Phase2Class::DoubleRaisedThree if even && len >= 2 => self.prefix[len / 2 - 1].clone(),
            _ => BigUint::zero(),
        }
    }
}

/// Phase-II count for walk length `n`; unsupported classes give zero.
pub fn count_phase2(n: usize, h: usize, a: u8, b: u8) -> BigUint {
    match Phase2Class::from_endpoints(h, a, b) {
        Some(class) => Phase2Table::new(n).get(class, n),
        None => BigUint::zero(),
    }
}

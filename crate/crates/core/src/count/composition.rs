//! Splitting identities: a walk of length `2p` cut at `p + r` factors into a
//! left walk and a reversed right walk meeting at a common height and index.

use num_bigint::BigUint;
use num_traits::Zero;

use super::phase1::Phase1Table;
use super::phase2::{Phase2Class, Phase2Table};
use super::Phase;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositionReport {
    pub p: usize,
    pub r: usize,
    pub a: u8,
    pub c: u8,
    /// Sum over the cut's height and index.
    pub split_sum: BigUint,
    /// Direct count of the full walks.
    pub whole: BigUint,
}

impl CompositionReport {
    pub fn holds(&self) -> bool {
        self.split_sum == self.whole
    }

    fn into_result(self) -> Result<CompositionReport> {
        if self.holds() {
            Ok(self)
        } else {
            Err(Error::IdentityViolation(format!(
                "composition at p={}, r={}, {}->{}: split sum {} vs whole {}",
                self.p, self.r, self.a, self.c, self.split_sum, self.whole
            )))
        }
    }
}

/// `sum_h sum_b N^{(h)}_{p+r,a->b} N^{(h)}_{p-r,c->b} = N_{2p,a->c}` on a
/// prebuilt table (needs `n_max >= 2p`).
pub fn composition_phase1(table: &Phase1Table, p: usize, r: usize, a: u8, c: u8) -> Result<CompositionReport> {
    if r > p {
        return Err(Error::InvalidInput(format!("cut offset r={r} exceeds p={p}")));
    }
    if table.n_max() < 2 * p || table.h_max() < p + r {
        return Err(Error::Capacity(format!("table too small for p={p}, r={r}")));
    }
    let mut split_sum = BigUint::zero();
    for h in 0..=(p - r) {
        for b in 1..=3u8 {
            let left = table.get(p + r, h, a, b);
            let right = table.get(p - r, h, c, b);
            if !left.is_zero() && !right.is_zero() {
                split_sum += left * right;
            }
        }
    }
    CompositionReport {
        p,
        r,
        a,
        c,
        split_sum,
        whole: table.get(2 * p, 0, a, c).clone(),
    }
    .into_result()
}

/// Two-family splitting identity for the `(x12 x21)^n` sector.
pub fn composition_phase2(table: &Phase2Table, p: usize, r: usize) -> Result<CompositionReport> {
    if r > p {
        return Err(Error::InvalidInput(format!("cut offset r={r} exceeds p={p}")));
    }
    let (left, right) = (p + r, p - r);
    let pairs: &[Phase2Class] = if left % 2 == 0 {
        &[Phase2Class::Returning, Phase2Class::DoubleRaisedThree]
    } else {
        &[Phase2Class::RaisedTwo, Phase2Class::RaisedThree]
    };
    let split_sum = pairs.iter().map(|&k| table.get(k, left) * table.get(k, right)).sum();
    CompositionReport {
        p,
        r,
        a: 1,
        c: 1,
        split_sum,
        whole: table.get(Phase2Class::Returning, 2 * p),
    }
    .into_result()
}

/// Dispatching form; phase II only knows the `1 -> 1` sector.
pub fn composition_check(p: usize, r: usize, a: u8, c: u8, phase: Phase) -> Result<CompositionReport> {
    match phase {
        Phase::Mixing => composition_phase1(&Phase1Table::new(2 * p, 2 * p), p, r, a, c),
        Phase::Unmixed if a == 1 && c == 1 => composition_phase2(&Phase2Table::new(2 * p), p, r),
        _ => Err(Error::InvalidInput(format!(
            "no composition law for {a}->{c} in {phase:?}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let r = composition_check(2, 0, 1, 1, Phase::Mixing).unwrap();
        assert_eq!(r.whole, BigUint::from(6u32));
        let r = composition_check(1, 1, 1, 1, Phase::Mixing).unwrap();
        assert_eq!(r.whole, BigUint::from(2u32));
        let r = composition_check(4, 0, 1, 1, Phase::Unmixed).unwrap();
        assert_eq!(r.whole, BigUint::from(34u32));
    }

    #[test]
    fn exact_for_moderate_lengths() {
        let t = Phase1Table::new(24, 24);
        for p in 1..=12 {
            for r in 0..p {
                for a in 1..=2 {
                    for c in 1..=2 {
                        composition_phase1(&t, p, r, a, c).unwrap();
                    }
                }
            }
        }
    }
}

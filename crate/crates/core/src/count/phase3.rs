//! Counts for `lambda1 = 0, lambda2 > 0` from the rational generating
//! functions of the height-capped walks.

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};

/// Nonvanishing end classes when the balancing term is active.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Phase3Class {
    /// height 0, `1 -> 1`
    Returning,
    /// height 0, `2 -> 2`
    ReturningTwo,
    /// height 1, `1 -> 2`
    RaisedTwo,
    /// height 1, `1 -> 3`
    RaisedThree,
    /// height 2, `1 -> 3`
    DoubleRaisedThree,
    /// height 1, `2 -> 3`
    RaisedFromTwo,
}

impl Phase3Class {
    pub const ALL: [Phase3Class; 6] = [
        Phase3Class::Returning,
        Phase3Class::ReturningTwo,
        Phase3Class::RaisedTwo,
        Phase3Class::RaisedThree,
        Phase3Class::DoubleRaisedThree,
        Phase3Class::RaisedFromTwo,
    ];

    pub fn from_endpoints(h: usize, a: u8, b: u8) -> Option<Phase3Class> {
        match (h, a, b) {
            (0, 1, 1) => Some(Phase3Class::Returning),
            (0, 2, 2) => Some(Phase3Class::ReturningTwo),
            (1, 1, 2) => Some(Phase3Class::RaisedTwo),
            (1, 1, 3) => Some(Phase3Class::RaisedThree),
            (2, 1, 3) => Some(Phase3Class::DoubleRaisedThree),
            (1, 2, 3) => Some(Phase3Class::RaisedFromTwo),
            _ => None,
        }
    }

    pub fn endpoints(self) -> (usize, u8, u8) {
        match self {
            Phase3Class::Returning => (0, 1, 1),
            Phase3Class::ReturningTwo => (0, 2, 2),
            Phase3Class::RaisedTwo => (1, 1, 2),
            Phase3Class::RaisedThree => (1, 1, 3),
            Phase3Class::DoubleRaisedThree => (2, 1, 3),
            Phase3Class::RaisedFromTwo => (1, 2, 3),
        }
    }

    // (numerator, denominator) coefficient lists
    fn rational(self) -> (&'static [i64], &'static [i64]) {
        const GOLDEN: &[i64] = &[1, 0, -3, 0, 1];
        const PLAIN: &[i64] = &[1, 0, -1];
        match self {
            Phase3Class::Returning => (&[1, 0, -1], GOLDEN),
            Phase3Class::ReturningTwo => (&[1], PLAIN),
            Phase3Class::RaisedTwo => (&[0, 1], GOLDEN),
            Phase3Class::RaisedThree => (&[0, 1, 0, -1], GOLDEN),
            Phase3Class::DoubleRaisedThree => (&[0, 0, 1], GOLDEN),
            Phase3Class::RaisedFromTwo => (&[0, 1], PLAIN),
        }
    }

    /// Coefficients for lengths `0..=n_max`.
    pub fn counts(self, n_max: usize) -> Vec<BigUint> {
        let (num, den) = self.rational();
        let mut c: Vec<BigInt> = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            let mut v = BigInt::from(num.get(n).copied().unwrap_or(0));
            for (k, &d) in den.iter().enumerate().skip(1) {
                if k <= n && d != 0 {
                    v -= &c[n - k] * d;
                }
            }
            c.push(v);
        }
        c.into_iter()
            .map(|v| {
                assert!(!v.is_negative(), "negative walk count");
                v.magnitude().clone()
            })
            .collect()
    }
}

/// Phase-III count for walk length `n`; classes outside [`Phase3Class`] vanish.
pub fn count_phase3(n: usize, h: usize, a: u8, b: u8) -> BigUint {
    match Phase3Class::from_endpoints(h, a, b) {
        Some(class) => class.counts(n).pop().unwrap_or_else(BigUint::zero),
        None => BigUint::zero(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn closed_form_values() {
        let r: Vec<u64> = Phase3Class::Returning
            .counts(6)
            .iter()
            .map(|v| v.try_into().unwrap())
            .collect();
        assert_eq!(r, vec![1, 0, 2, 0, 5, 0, 13]);
        for n in 0..20 {
            let expect = if n % 2 == 0 { BigUint::one() } else { BigUint::zero() };
            assert_eq!(count_phase3(n, 0, 2, 2), expect);
        }
        assert_eq!(count_phase3(1, 1, 2, 3), BigUint::one());
        assert!(count_phase3(4, 0, 1, 2).is_zero());
    }
}

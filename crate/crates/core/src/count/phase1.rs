//! Walk counts for `lambda1 > 0, lambda2 = 0` from the first-step recursions.

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Exact counts `N^{(h)}_{n, a -> b}` for `n <= n_max`, `h <= h_max`.
///
/// Height-zero entries follow the first-step decomposition
/// `N_{1->1} = sum_i N_{i,2->2} N_{n-2-i,1->1} + N_{n-2,1->1} + N_{n-2,2->1}`,
/// `N_{2->2} = N_{n-2,2->2} + N_{n-2,2->1}`, `N_{2->1} = N_{n-2,2->1} + N_{n-2,1->1}`,
/// with `N_{1->2}` filled from its own first-step decomposition (so reversal
/// symmetry stays a checkable fact). Positive heights use
/// `N^{(h)}_{1->b} = N^{(h-1)}_{n-1,2->b} + [b=3,h=1,n=1] + sum_i N_{i,2->2} N^{(h)}_{n-2-i,1->b}
///  + N^{(h)}_{n-2,1->b} + N^{(h)}_{n-2,2->b}` and
/// `N^{(h)}_{2->b} = [b=3,h=1,n=1] + N^{(h)}_{n-2,1->b} + N^{(h)}_{n-2,2->b}`.
#[derive(Clone, Debug)]
pub struct Phase1Table {
    n_max: usize,
    h_max: usize,
    data: Vec<BigUint>,
}

impl Phase1Table {
    pub fn new(n_max: usize, h_max: usize) -> Phase1Table {
        let mut t = Phase1Table {
            n_max,
            h_max,
            data: vec![BigUint::zero(); (n_max + 1) * (h_max + 1) * 9],
        };
        t.fill();
        t
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn h_max(&self) -> usize {
        self.h_max
    }

    #[inline]
    fn slot(&self, n: usize, h: usize, a: u8, b: u8) -> usize {
        ((n * (self.h_max + 1) + h) * 3 + (a as usize - 1)) * 3 + (b as usize - 1)
    }

    /// `N^{(h)}_{n,a->b}`; zero outside the table's height range.
    pub fn get(&self, n: usize, h: usize, a: u8, b: u8) -> &BigUint {
        assert!(n <= self.n_max, "n = {n} beyond table size {}", self.n_max);
        assert!((1..=3).contains(&a) && (1..=3).contains(&b));
        static ZERO: std::sync::OnceLock<BigUint> = std::sync::OnceLock::new();
        if h > self.h_max {
            return ZERO.get_or_init(BigUint::zero);
        }
        &self.data[self.slot(n, h, a, b)]
    }

    fn set(&mut self, n: usize, h: usize, a: u8, b: u8, v: BigUint) {
        let k = self.slot(n, h, a, b);
        self.data[k] = v;
    }

    fn fill(&mut self) {
        for a in 1..=3u8 {
            self.set(0, 0, a, a, BigUint::one());
        }
        for n in 1..=self.n_max {
            self.fill_zero_height(n);
            for h in 1..=self.h_max.min(n) {
                self.fill_height(n, h);
            }
        }
    }

    // sum_{i=0}^{n-2} N_{i,2->2} N^{(h)}_{n-2-i,1->b}, empty for n = 1
    fn returning_sum(&self, n: usize, h: usize, b: u8) -> BigUint {
        let mut acc = BigUint::zero();
        if n < 2 {
            return acc;
        }
        for i in 0..=n - 2 {
            let left = self.get(i, 0, 2, 2);
            if left.is_zero() {
                continue;
            }
            let right = self.get(n - 2 - i, h, 1, b);
            if !right.is_zero() {
                acc += left * right;
            }
        }
        acc
    }

    fn back2(&self, n: usize, h: usize, a: u8, b: u8) -> BigUint {
        if n >= 2 {
            self.get(n - 2, h, a, b).clone()
        } else {
            BigUint::zero()
        }
    }

    fn fill_zero_height(&mut self, n: usize) {
        let n11 = self.returning_sum(n, 0, 1) + self.back2(n, 0, 1, 1) + self.back2(n, 0, 2, 1);
        let n22 = self.back2(n, 0, 2, 2) + self.back2(n, 0, 2, 1);
        let n21 = self.back2(n, 0, 2, 1) + self.back2(n, 0, 1, 1);
        let n12 = self.returning_sum(n, 0, 2) + self.back2(n, 0, 1, 2) + self.back2(n, 0, 2, 2);
        self.set(n, 0, 1, 1, n11);
        self.set(n, 0, 2, 2, n22);
        self.set(n, 0, 2, 1, n21);
        self.set(n, 0, 1, 2, n12);
    }

    fn fill_height(&mut self, n: usize, h: usize) {
        for b in 1..=3u8 {
            let lone = if b == 3 && h == 1 && n == 1 {
                BigUint::one()
            } else {
                BigUint::zero()
            };
            let climb = self.get(n - 1, h - 1, 2, b).clone();
            let v1 = climb + &lone + self.returning_sum(n, h, b) + self.back2(n, h, 1, b) + self.back2(n, h, 2, b);
            let v2 = lone + self.back2(n, h, 1, b) + self.back2(n, h, 2, b);
            self.set(n, h, 1, b, v1);
            self.set(n, h, 2, b, v2);
        }
    }
}

/// `N^{(h)}_{n,a->b}` for the `lambda1 > 0` phase.
pub fn count_phase1(n: usize, h: usize, a: u8, b: u8) -> BigUint {
    Phase1Table::new(n, h).get(n, h, a, b).clone()
}

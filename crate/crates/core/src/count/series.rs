//! Taylor coefficients of the closed-form generating functions for the
//! `lambda1 > 0` counts, by exact truncated power-series arithmetic.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::Zero;

use super::dyck::catalan_numbers;
use crate::error::{Error, Result};

/// Largest order accepted by [`series_phase1_genfunc`].
pub const SERIES_ORDER_CAP: usize = 4000;

/// Dense truncated power series `sum_k c_k x^k`, `k < len`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Series(Vec<BigInt>);

impl Series {
    fn zero(len: usize) -> Series {
        Series(vec![BigInt::zero(); len])
    }

    fn monomial(len: usize, k: usize, c: i64) -> Series {
        let mut s = Series::zero(len);
        if k < len {
            s.0[k] = BigInt::from(c);
        }
        s
    }

    fn len(&self) -> usize {
        self.0.len()
    }

    fn add(&self, other: &Series) -> Series {
        Series(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn mul(&self, other: &Series) -> Series {
        let len = self.len();
        let mut out = Series::zero(len);
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    out.0[i + j] += a * b;
                }
            }
        }
        out
    }

    fn pow(&self, e: usize) -> Series {
        let mut out = Series::monomial(self.len(), 0, 1);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Multiplication by `x^k`.
    fn shift_up(&self, k: usize) -> Series {
        let len = self.len();
        let mut out = Series::zero(len);
        for i in 0..len.saturating_sub(k) {
            out.0[i + k] = self.0[i].clone();
        }
        out
    }

    /// Division by `x^k`; the low coefficients must vanish.
    fn shift_down(&self, k: usize) -> Result<Series> {
        if let Some(i) = self.0.iter().take(k).position(|c| !c.is_zero()) {
            return Err(Error::IdentityViolation(format!(
                "division by x^{k} leaves a pole: coefficient of x^{i} is {}",
                self.0[i]
            )));
        }
        let mut out = Series::zero(self.len());
        for i in k..self.len() {
            out.0[i - k] = self.0[i].clone();
        }
        Ok(out)
    }

    /// Multiplication by `1 / (1 - c x^d)`.
    fn div_geometric(&self, c: i64, d: usize) -> Series {
        let mut out = self.clone();
        let c = BigInt::from(c);
        for i in d..out.len() {
            let prev = &out.0[i - d] * &c;
            out.0[i] += prev;
        }
        out
    }
}

/// Shared ingredients: `X = x^3/(1-3x^2)` and `F = X C(X^2)`, where `C` is the
/// Catalan series.
struct Ingredients {
    len: usize,
    catalan_of_x2: Series,
    f: Series,
}

impl Ingredients {
    fn new(len: usize) -> Ingredients {
        let x_var = Series::monomial(len, 3, 1).div_geometric(3, 2);
        let x_sq = x_var.mul(&x_var);
        let catalan = catalan_numbers(len / 6 + 1);
        let mut catalan_of_x2 = Series::zero(len);
        let mut power = Series::monomial(len, 0, 1);
        for c in &catalan {
            if power.0.iter().all(Zero::is_zero) {
                break;
            }
            let term = Series(power.0.iter().map(|p| p * BigInt::from(c.clone())).collect());
            catalan_of_x2 = catalan_of_x2.add(&term);
            power = power.mul(&x_sq);
        }
        let f = x_var.mul(&catalan_of_x2);
        Ingredients { len, catalan_of_x2, f }
    }

    fn one(&self) -> Series {
        Series::monomial(self.len, 0, 1)
    }

    // (1 - x^2) / (1 - 3x^2) * C(X^2)
    fn n11(&self) -> Series {
        self.catalan_of_x2
            .mul(&Series::monomial(self.len, 0, 1).add(&Series::monomial(self.len, 2, -1)))
            .div_geometric(3, 2)
    }

    // (1 + x F) / (1 - x^2)
    fn n22(&self) -> Series {
        self.one().add(&self.f.shift_up(1)).div_geometric(1, 2)
    }

    // F / x
    fn n21(&self) -> Result<Series> {
        self.f.shift_down(1)
    }

    fn height(&self, h: usize, a: u8, b: u8) -> Result<Series> {
        let f = &self.f;
        let xf_plus_one = f.shift_up(1).add(&self.one());
        let f_over_x_plus_one = || -> Result<Series> { Ok(f.shift_down(1)?.add(&self.one())) };
        match (a, b) {
            (3, _) => Ok(Series::zero(self.len)),
            (2, 1) => f.pow(h + 1).shift_down(1),
            (1, 1) => f
                .pow(h + 1)
                .mul(&self.one().add(&Series::monomial(self.len, 2, -1)))
                .shift_down(3),
            (2, 2) => Ok(f.pow(h).mul(&xf_plus_one).div_geometric(1, 2)),
            (1, 2) => f.pow(h).mul(&xf_plus_one).shift_down(2),
            (2, 3) => Ok(f.pow(h - 1).mul(&f_over_x_plus_one()?).shift_up(1).div_geometric(1, 2)),
            (1, 3) => {
                let mut s = f.pow(h - 1).mul(&f_over_x_plus_one()?);
                if h == 1 {
                    s = s.add(&Series::monomial(self.len, 0, -1));
                }
                s.shift_down(1)
            }
            _ => unreachable!("arrow indices validated by caller"),
        }
    }
}

/// Coefficients `N^{(h)}_{n,a->b}` for `n = 0..=n_max`, read off the closed
/// generating functions. The zero-height `1 -> 2` class uses reversal
/// symmetry with `2 -> 1`.
pub fn series_phase1_genfunc(h: usize, a: u8, b: u8, n_max: usize) -> Result<Vec<BigUint>> {
    if !(1..=3).contains(&a) || !(1..=3).contains(&b) {
        return Err(Error::InvalidInput(format!(
            "arrow indices must be 1..=3, got {a}->{b}"
        )));
    }
    if n_max > SERIES_ORDER_CAP {
        return Err(Error::Capacity(format!(
            "series order {n_max} exceeds cap {SERIES_ORDER_CAP}"
        )));
    }
    let len = n_max + 4;
    let ing = Ingredients::new(len);
    let series = if h == 0 {
        match (a, b) {
            (1, 1) => ing.n11(),
            (2, 2) => ing.n22(),
            (2, 1) | (1, 2) => ing.n21()?,
            (3, 3) => ing.one(),
            _ => Series::zero(len),
        }
    } else {
        ing.height(h, a, b)?
    };
    series
        .0
        .into_iter()
        .take(n_max + 1)
        .enumerate()
        .map(|(n, c)| match c.sign() {
            Sign::Minus => Err(Error::IdentityViolation(format!(
                "negative coefficient {c} at x^{n} for h={h}, {a}->{b}"
            ))),
            _ => Ok(c.magnitude().clone()),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::phase1::Phase1Table;
    use num_traits::One;

    fn small(v: &[BigUint]) -> Vec<u64> {
        v.iter().map(|c| c.try_into().unwrap()).collect()
    }

    #[test]
    fn zero_height_prefixes() {
        assert_eq!(small(&series_phase1_genfunc(0, 1, 1, 4).unwrap()), vec![1, 0, 2, 0, 6]);
        assert_eq!(series_phase1_genfunc(0, 2, 1, 3).unwrap()[0], BigUint::zero());
        // a single step x21 read backwards from height 1 is the walk x12
        assert_eq!(series_phase1_genfunc(1, 1, 2, 3).unwrap()[1], BigUint::one());
        assert!(series_phase1_genfunc(1, 2, 1, 3).unwrap()[1].is_zero());
    }

    #[test]
    fn agrees_with_recursion_table() {
        let n_max = 24;
        let t = Phase1Table::new(n_max, 5);
        for h in 0..=5 {
            for a in 1..=3 {
                for b in 1..=3 {
                    let s = series_phase1_genfunc(h, a, b, n_max).unwrap();
                    for n in 0..=n_max {
                        assert_eq!(&s[n], t.get(n, h, a, b), "n={n} h={h} {a}->{b}");
                    }
                }
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            series_phase1_genfunc(0, 1, 1, SERIES_ORDER_CAP + 1),
            Err(Error::Capacity(_))
        ));
    }
}

//! Classical Dyck-walk counts and the Catalan series.

use num_bigint::BigUint;
use num_integer::{binomial, Integer};
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Number of `n`-step Dyck walks from height 0 to height `h`.
///
/// Closed form `(h+1)/((n+h)/2+1) * C(n, (n+h)/2)` when `n+h` is even; the
/// division is exact and checked.
pub fn dyck_catalan(n: usize, h: usize) -> BigUint {
    if (n + h) % 2 == 1 || h > n {
        return BigUint::zero();
    }
    let k = (n + h) / 2;
    let numer = binomial(BigUint::from(n), BigUint::from(k)) * BigUint::from(h + 1);
    let (q, r) = numer.div_rem(&BigUint::from(k + 1));
    assert!(r.is_zero(), "inexact division in dyck_catalan({n}, {h})");
    q
}

/// First `m_max + 1` Catalan numbers from `c_{m+1} = sum_i c_i c_{m-i}`.
pub fn catalan_numbers(m_max: usize) -> Vec<BigUint> {
    let mut c = vec![BigUint::one()];
    for m in 0..m_max {
        let next = (0..=m).fold(BigUint::zero(), |acc, i| acc + &c[i] * &c[m - i]);
        c.push(next);
    }
    c
}

/// Outcome of expanding `X^h C(X^2)^{h+1}` against [`dyck_catalan`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub n_max: usize,
    pub h_max: usize,
    pub coefficients_checked: usize,
}

/// Checks `X^h C(X^2)^{h+1} = sum_n N^{(h)}_n X^n` coefficient by coefficient
/// for `n <= n_max`, `h <= h_max`.
pub fn verify_catalan_identity(n_max: usize, h_max: usize) -> Result<IdentityReport> {
    let catalan = catalan_numbers(n_max / 2 + 1);
    // C(X^2) as a series in X
    let mut base = vec![BigUint::zero(); n_max + 1];
    for (m, c) in catalan.iter().enumerate() {
        if 2 * m <= n_max {
            base[2 * m] = c.clone();
        }
    }
    let mut power = base.clone();
    let mut checked = 0;
    for h in 0..=h_max {
        if h > 0 {
            power = truncated_product(&power, &base, n_max + 1);
        }
        for n in 0..=n_max {
            let lhs = if n >= h { power[n - h].clone() } else { BigUint::zero() };
            let rhs = dyck_catalan(n, h);
            if lhs != rhs {
                return Err(Error::IdentityViolation(format!(
                    "coefficient of X^{n} at h = {h}: series gives {lhs}, closed form gives {rhs}"
                )));
            }
            checked += 1;
        }
    }
    Ok(IdentityReport {
        n_max,
        h_max,
        coefficients_checked: checked,
    })
}

fn truncated_product(a: &[BigUint], b: &[BigUint], len: usize) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); len];
    for (i, ai) in a.iter().enumerate().take(len) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(len - i) {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_dyck(n: usize, h: usize) -> u64 {
        (0u32..1 << n)
            .filter(|mask| {
                let mut y = 0i32;
                for i in 0..n {
                    y += if mask >> i & 1 == 1 { 1 } else { -1 };
                    if y < 0 {
                        return false;
                    }
                }
                y == h as i32
            })
            .count() as u64
    }

    #[test]
    fn matches_exhaustive_dyck_enumeration() {
        for n in 0..=14 {
            for h in 0..=n {
                assert_eq!(dyck_catalan(n, h), BigUint::from(brute_dyck(n, h)), "n={n} h={h}");
            }
        }
        assert_eq!(dyck_catalan(4, 0), BigUint::from(2u32));
        assert_eq!(dyck_catalan(3, 1), BigUint::from(2u32));
        assert!(dyck_catalan(5, 0).is_zero());
    }

    #[test]
    fn catalan_prefix() {
        let c: Vec<u64> = catalan_numbers(7).iter().map(|v| v.try_into().unwrap()).collect();
        assert_eq!(c, vec![1, 1, 2, 5, 14, 42, 132, 429]);
    }

    #[test]
    fn identity_holds() {
        assert_eq!(verify_catalan_identity(0, 0).unwrap().coefficients_checked, 1);
        verify_catalan_identity(10, 3).unwrap();
        verify_catalan_identity(40, 8).unwrap();
    }
}

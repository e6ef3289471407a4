//! Large-length behaviour of the walk counts, evaluated in log domain.

use std::f64::consts::{LN_2, PI};

use super::phase2::Phase2Class;
use super::phase3::Phase3Class;
use crate::error::{Error, Result};

/// Closed asymptotic families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AsymptoticKind {
    /// Zero-height `lambda1 > 0` counts, `(a, b)` in `{1,2}^2`.
    ReturningWalks { a: u8, b: u8 },
    /// `lambda1 > 0` counts ending at height `h`, `a` in `{1,2}`.
    RaisedWalks { a: u8, b: u8 },
    /// Families generated from `(x12 x21)^n`.
    MoveClosure(Phase2Class),
    /// Height-capped walks with the balancing term.
    Balanced(Phase3Class),
    /// Classical Dyck walks to height `h`.
    Dyck,
}

fn golden() -> f64 {
    (5f64.sqrt() + 1.0) / 2.0
}

// ln of 2^n / n^{3/2}
fn ln_catalan_scale(n: usize) -> f64 {
    n as f64 * LN_2 - 1.5 * (n as f64).ln()
}

// ln of c * sqrt(2 / pi)
fn ln_prefactor(c: f64) -> f64 {
    (c * (2.0 / PI).sqrt()).ln()
}

fn gaussian(weight: f64, height: f64, p: f64, width: f64) -> f64 {
    weight * (-width * height * height / (2.0 * p)).exp()
}

/// `ln` of the asymptotic count at length `n`, end height `h`; `None` when
/// the family vanishes identically there (parity or empty class).
pub fn ln_asymptotic(kind: AsymptoticKind, n: usize, h: usize) -> Result<Option<f64>> {
    let even = |k: usize| k.is_multiple_of(2);
    let phi_ln = golden().ln();
    let sqrt5_ln = 5f64.ln() / 2.0;
    let out = match kind {
        AsymptoticKind::ReturningWalks { a, b } => {
            let c = match (a, b) {
                (1, 1) => 18.0,
                (2, 2) => 2.0,
                (1, 2) | (2, 1) => 6.0,
                _ => return Err(Error::InvalidInput(format!("no zero-height family for {a}->{b}"))),
            };
            if n == 0 || !even(n) {
                None
            } else {
                Some(ln_prefactor(c) + ln_catalan_scale(n))
            }
        }
        AsymptoticKind::RaisedWalks { a, b } => {
            if n == 0 || !even(n + h) {
                return Ok(None);
            }
            let p = n as f64;
            let hf = h as f64;
            let (c, bracket) = match (a, b) {
                (2, 1) => (6.0, gaussian(hf + 1.0, hf + 1.0, p, 9.0)),
                (1, 1) => (18.0, gaussian(hf + 1.0, hf + 1.0, p, 9.0)),
                (1, 2) | (2, 2) => (
                    if a == 1 { 6.0 } else { 2.0 },
                    gaussian(2.0 * hf, hf, p, 9.0) + gaussian(hf + 1.0, hf + 1.0, p, 9.0),
                ),
                (1, 3) | (2, 3) => {
                    if h == 0 {
                        return Err(Error::InvalidInput("index-3 endings need h >= 1".into()));
                    }
                    (
                        if a == 1 { 6.0 } else { 2.0 },
                        gaussian(2.0 * hf, hf, p, 9.0) - gaussian(hf - 1.0, hf - 1.0, p, 9.0),
                    )
                }
                _ => return Err(Error::InvalidInput(format!("no raised family for {a}->{b}"))),
            };
            if bracket <= 0.0 {
                None
            } else {
                Some(ln_prefactor(c) + ln_catalan_scale(n) + bracket.ln())
            }
        }
        AsymptoticKind::MoveClosure(class) => {
            let l = n as f64;
            match class {
                Phase2Class::Returning if even(n) => Some((l + 1.0) * phi_ln - sqrt5_ln),
                Phase2Class::RaisedTwo if !even(n) => Some((l + 1.0) * phi_ln - sqrt5_ln),
                Phase2Class::RaisedThree if !even(n) => Some(l * phi_ln - sqrt5_ln),
                Phase2Class::DoubleRaisedThree if even(n) && n >= 2 => Some(l * phi_ln - sqrt5_ln),
                _ => None,
            }
        }
        AsymptoticKind::Balanced(class) => {
            let l = n as f64;
            match class {
                Phase3Class::Returning if even(n) => Some((l + 1.0) * phi_ln - sqrt5_ln),
                Phase3Class::ReturningTwo if even(n) => Some(0.0),
                Phase3Class::RaisedTwo if !even(n) => Some((l + 1.0) * phi_ln - sqrt5_ln),
                Phase3Class::RaisedThree if !even(n) => Some(l * phi_ln - sqrt5_ln),
                Phase3Class::DoubleRaisedThree if even(n) => Some(l * phi_ln - sqrt5_ln),
                Phase3Class::RaisedFromTwo if !even(n) => Some(0.0),
                _ => None,
            }
        }
        AsymptoticKind::Dyck => {
            if n == 0 || !even(n + h) {
                None
            } else {
                let hp = h as f64 + 1.0;
                Some(hp.ln() + 1.5 * LN_2 - 0.5 * PI.ln() + ln_catalan_scale(n) - hp * hp / (2.0 * n as f64))
            }
        }
    };
    Ok(out)
}

/// The asymptotic count itself; may overflow to `inf` for long walks.
pub fn asymptotic(kind: AsymptoticKind, n: usize, h: usize) -> Result<f64> {
    Ok(ln_asymptotic(kind, n, h)?.map_or(0.0, f64::exp))
}

//! Integer money in minor units.

use std::fmt;
use std::iter::Sum;
use std::ops::Neg;

use serde::{Deserialize, Serialize};

/// A signed amount of money in cents.
///
/// Ledger arithmetic never touches floating point; the checked operations
/// return `None` on overflow so callers can abort the run.
#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
#[repr(transparent)]
pub struct Money(i64);

impl Money {
    pub const ZERO: Money = Money(0);

    pub const fn from_cents(cents: i64) -> Self {
        Money(cents)
    }

    /// Whole dollars; panics on overflow, intended for constants and tests.
    pub const fn from_dollars(dollars: i64) -> Self {
        Money(dollars * 100)
    }

    pub const fn cents(self) -> i64 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64
    }

    pub fn dollars(self) -> f64 {
        self.0 as f64 / 100.0
    }

    pub fn checked_add(self, rhs: Money) -> Option<Money> {
        self.0.checked_add(rhs.0).map(Money)
    }

    pub fn checked_sub(self, rhs: Money) -> Option<Money> {
        self.0.checked_sub(rhs.0).map(Money)
    }

    pub fn checked_mul(self, k: i64) -> Option<Money> {
        self.0.checked_mul(k).map(Money)
    }

    pub fn is_negative(self) -> bool {
        self.0 < 0
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    /// The debt carried by a balance: `|m|` when negative, zero otherwise.
    pub fn debt(self) -> Money {
        Money(if self.0 < 0 { -self.0 } else { 0 })
    }

    pub fn max(self, other: Money) -> Money {
        Money(self.0.max(other.0))
    }

    /// Rounds a real number of cents to the nearest cent, ties to even.
    ///
    /// Returns `None` for non-finite input or values outside the `i64` range.
    pub fn round_cents(value: f64) -> Option<Money> {
        if !value.is_finite() {
            return None;
        }
        let r = value.round_ties_even();
        if r < i64::MIN as f64 || r >= i64::MAX as f64 {
            return None;
        }
        Some(Money(r as i64))
    }
}

impl fmt::Display for Money {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let abs = self.0.unsigned_abs();
        write!(f, "{sign}${}.{:02}", abs / 100, abs % 100)
    }
}

impl Neg for Money {
    type Output = Money;

    fn neg(self) -> Money {
        Money(-self.0)
    }
}

impl Sum for Money {
    /// Panics on overflow. Use [`checked_total`] where overflow is possible.
    fn sum<I: Iterator<Item = Money>>(iter: I) -> Self {
        checked_total(iter).expect("money sum overflowed i64")
    }
}

pub fn checked_total<I: IntoIterator<Item = Money>>(iter: I) -> Option<Money> {
    iter.into_iter()
        .try_fold(Money::ZERO, |acc, m| acc.checked_add(m))
}

//! Contraction ratios: exact rationals or certified enclosures.

use crate::rational::{decimal_string, rat_str, Rational};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// A contraction ratio `q` in (0,1): either an exact rational or a certified
/// rational enclosure `[lo, hi]` of an algebraic number.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RatioValue {
    Exact(#[serde(with = "rat_str")] Rational),
    Enclosure {
        #[serde(with = "rat_str")]
        lo: Rational,
        #[serde(with = "rat_str")]
        hi: Rational,
    },
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RatioError {
    #[error("ratio must lie strictly inside (0,1), got {0}")]
    OutOfRange(String),
    #[error("enclosure endpoints out of order: lo={lo} hi={hi}")]
    EmptyEnclosure { lo: String, hi: String },
}

/// Outcome of a comparison against an enclosure: the inequality is provable,
/// provably false, or undecidable at the current width.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provable {
    True,
    False,
    Unknown,
}

impl RatioValue {
    /// Exact ratio; must be strictly inside (0,1).
    pub fn exact(q: Rational) -> Result<Self, RatioError> {
        if q <= Rational::zero() || q >= Rational::one() {
            return Err(RatioError::OutOfRange(q.to_string()));
        }
        Ok(RatioValue::Exact(q))
    }

    /// Enclosure `[lo, hi]`; requires `0 < lo <= hi < 1`.
    pub fn enclosure(lo: Rational, hi: Rational) -> Result<Self, RatioError> {
        if lo > hi {
            return Err(RatioError::EmptyEnclosure {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        if lo <= Rational::zero() || hi >= Rational::one() {
            return Err(RatioError::OutOfRange(format!("[{lo}, {hi}]")));
        }
        if lo == hi {
            Ok(RatioValue::Exact(lo))
        } else {
            Ok(RatioValue::Enclosure { lo, hi })
        }
    }

    pub fn lower(&self) -> &Rational {
        match self {
            RatioValue::Exact(q) => q,
            RatioValue::Enclosure { lo, .. } => lo,
        }
    }

    pub fn upper(&self) -> &Rational {
        match self {
            RatioValue::Exact(q) => q,
            RatioValue::Enclosure { hi, .. } => hi,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, RatioValue::Exact(_))
    }

    pub fn width(&self) -> Rational {
        self.upper() - self.lower()
    }

    /// Midpoint, useful for decimal renderings.
    pub fn midpoint(&self) -> Rational {
        (self.lower() + self.upper()) / Rational::from_integer(2.into())
    }

    /// Is `value >= t` provable from the enclosure?
    pub fn ge(&self, t: &Rational) -> Provable {
        if self.lower() >= t {
            Provable::True
        } else if self.upper() < t {
            Provable::False
        } else {
            Provable::Unknown
        }
    }

    /// Is `value < t` provable?
    pub fn lt(&self, t: &Rational) -> Provable {
        match self.ge(t) {
            Provable::True => Provable::False,
            Provable::False => Provable::True,
            Provable::Unknown => Provable::Unknown,
        }
    }

    /// Is `value > t` provable?
    pub fn gt(&self, t: &Rational) -> Provable {
        if self.lower() > t {
            Provable::True
        } else if self.upper() <= t {
            Provable::False
        } else {
            Provable::Unknown
        }
    }

    /// Advisory decimal form of the midpoint.
    pub fn decimal(&self, digits: u32) -> String {
        decimal_string(&self.midpoint(), digits)
    }
}

impl fmt::Display for RatioValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RatioValue::Exact(q) => write!(f, "{q}"),
            RatioValue::Enclosure { lo, hi } => write!(f, "[{lo}, {hi}]"),
        }
    }
}

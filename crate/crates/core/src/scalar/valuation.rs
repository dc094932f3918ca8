use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// An exact valuation in `ℚ ∪ {+∞}`.
///
/// A valuation `v` stands for the norm `|x| = c^{-v}` for some fixed base
/// `c > 1`. The norm itself is never materialized: larger valuations are
/// smaller norms, and `+∞` is the norm of zero. The derived `Ord` compares
/// valuations; use [`Valuation::norm_cmp`] to compare norms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Valuation {
    Finite(BigRational),
    #[default]
    Infinite,
}

impl Valuation {
    pub fn zero() -> Self {
        Valuation::Finite(BigRational::zero())
    }

    pub fn from_integer(n: i64) -> Self {
        Valuation::Finite(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Valuation::Finite(q)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            Valuation::Finite(q) => Some(q),
            Valuation::Infinite => None,
        }
    }

    /// Compares the norms represented by two valuations.
    pub fn norm_cmp(&self, other: &Self) -> Ordering {
        other.cmp(self)
    }

    /// `|self| ≤ |other|`.
    pub fn norm_le(&self, other: &Self) -> bool {
        self >= other
    }

    /// Valuation of `x^n` given the valuation of `x`.
    pub fn times(&self, n: &BigRational) -> Valuation {
        match self {
            Valuation::Infinite if n.is_zero() => Valuation::zero(),
            Valuation::Infinite => Valuation::Infinite,
            Valuation::Finite(q) => Valuation::Finite(q * n),
        }
    }

    /// Adds a finite rational shift.
    pub fn shift(&self, q: &BigRational) -> Valuation {
        match self {
            Valuation::Infinite => Valuation::Infinite,
            Valuation::Finite(v) => Valuation::Finite(v + q),
        }
    }

    /// `self - other` when `other` is finite; `None` otherwise.
    pub fn checked_sub(&self, other: &Valuation) -> Option<Valuation> {
        match (self, other) {
            (_, Valuation::Infinite) => None,
            (Valuation::Infinite, _) => Some(Valuation::Infinite),
            (Valuation::Finite(a), Valuation::Finite(b)) => Some(Valuation::Finite(a - b)),
        }
    }

    /// The norm of the maximum of two norms, i.e. the smaller valuation.
    pub fn min_of(a: Valuation, b: Valuation) -> Valuation {
        a.min(b)
    }
}

impl Add for Valuation {
    type Output = Valuation;

    fn add(self, rhs: Valuation) -> Valuation {
        &self + &rhs
    }
}

impl Add<&Valuation> for &Valuation {
    type Output = Valuation;

    fn add(self, rhs: &Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Infinite => f.write_str("+inf"),
            Valuation::Finite(q) => write!(f, "{}", format_rational(q)),
        }
    }
}

impl serde::Serialize for Valuation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `n` or `n/d` with `d > 1`.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub(crate) fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_is_largest_valuation_and_smallest_norm() {
        let two = Valuation::from_integer(2);
        assert!(Valuation::Infinite > two);
        assert_eq!(Valuation::Infinite.norm_cmp(&two), Ordering::Less);
        assert!(Valuation::Infinite.norm_le(&Valuation::zero()));
    }

    #[test]
    fn addition_absorbs_infinity() {
        let a = Valuation::from_integer(3);
        assert_eq!(&a + &Valuation::Infinite, Valuation::Infinite);
        assert_eq!(
            &a + &Valuation::from_integer(-1),
            Valuation::from_integer(2)
        );
    }

    #[test]
    fn zeroth_power_of_zero_has_valuation_zero() {
        assert_eq!(Valuation::Infinite.times(&rational(0)), Valuation::zero());
        assert_eq!(Valuation::Infinite.times(&rational(2)), Valuation::Infinite);
    }

    #[test]
    fn display() {
        assert_eq!(Valuation::Infinite.to_string(), "+inf");
        let half = BigRational::new(BigInt::from(-1), BigInt::from(2));
        assert_eq!(Valuation::Finite(half).to_string(), "-1/2");
    }
}

//! Exact scalars in a non-trivially valued field of characteristic zero.
//!
//! Two backends are provided: rational numbers with a p-adic valuation, and
//! finite-support Hahn series `ℚ((t^ℚ))` valued by their least exponent.

mod factorial;
mod hahn;
mod valuation;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use factorial::{
    binomial, factorial, factorial_valuation, falling_factorial, legendre,
    multi_factorial_valuation, varpi_exponent,
};
pub use hahn::HahnSeries;
pub(crate) use valuation::rational;
pub use valuation::{format_rational, Valuation};

use crate::error::{Error, Result};

/// Which valued field a scalar lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Backend {
    /// `ℚ` with the p-adic valuation.
    PAdic(u32),
    /// Finite-support Hahn series over `ℚ` in the variable `t`.
    Hahn,
}

impl Backend {
    pub fn padic(p: u32) -> Result<Self> {
        if is_prime(p as u64) {
            Ok(Backend::PAdic(p))
        } else {
            Err(Error::InvalidPrime(p as u64))
        }
    }

    pub fn prime(self) -> Option<u32> {
        match self {
            Backend::PAdic(p) => Some(p),
            Backend::Hahn => None,
        }
    }

    /// An element of valuation exactly `r`: `p^r` for integral `r` on the
    /// p-adic backend, `t^r` on the Hahn backend.
    pub fn element_of_valuation(self, r: &BigRational) -> Result<Scalar> {
        match self {
            Backend::PAdic(p) => {
                if !r.is_integer() {
                    return Err(Error::Precondition(format!(
                        "no element of {}-adic valuation {}",
                        p,
                        format_rational(r)
                    )));
                }
                let e = r.to_integer();
                let mag = num_traits::pow(BigInt::from(p), e.abs().to_usize().unwrap_or(0));
                let value = if e.is_negative() {
                    BigRational::new(BigInt::one(), mag)
                } else {
                    BigRational::from_integer(mag)
                };
                Ok(Scalar::PAdic { p, value })
            }
            Backend::Hahn => Ok(Scalar::Hahn(HahnSeries::monomial(
                r.clone(),
                BigRational::one(),
            ))),
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::PAdic(p) => write!(f, "p={}", p),
            Backend::Hahn => f.write_str("hahn"),
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact element of the chosen valued field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    PAdic { p: u32, value: BigRational },
    Hahn(HahnSeries),
}

/// The four field operations accepted by [`field_arith`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    /// Division; for Hahn series the quotient must terminate before
    /// exponent `cutoff`.
    Div {
        cutoff: BigRational,
    },
}

/// Exact field arithmetic with backend checking.
pub fn field_arith(a: &Scalar, b: &Scalar, op: &ArithOp) -> Result<Scalar> {
    a.check_backend(b)?;
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div { cutoff } => return a.checked_div(b, cutoff),
    })
}

impl Scalar {
    pub fn zero(backend: Backend) -> Self {
        Self::from_rational(backend, BigRational::zero())
    }

    pub fn one(backend: Backend) -> Self {
        Self::from_rational(backend, BigRational::one())
    }

    pub fn from_integer(backend: Backend, n: i64) -> Self {
        Self::from_rational(backend, rational(n))
    }

    pub fn from_bigint(backend: Backend, n: BigInt) -> Self {
        Self::from_rational(backend, BigRational::from_integer(n))
    }

    /// The image of a rational number (a constant series on the Hahn side).
    pub fn from_rational(backend: Backend, q: BigRational) -> Self {
        match backend {
            Backend::PAdic(p) => Scalar::PAdic { p, value: q },
            Backend::Hahn => Scalar::Hahn(HahnSeries::constant(q)),
        }
    }

    pub fn backend(&self) -> Backend {
        match self {
            Scalar::PAdic { p, .. } => Backend::PAdic(*p),
            Scalar::Hahn(_) => Backend::Hahn,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::PAdic { value, .. } => value.is_zero(),
            Scalar::Hahn(s) => s.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::PAdic { value, .. } => value.is_one(),
            Scalar::Hahn(s) => s.is_one(),
        }
    }

    pub fn valuation(&self) -> Valuation {
        match self {
            Scalar::PAdic { p, value } => padic_valuation(value, *p),
            Scalar::Hahn(s) => s.valuation(),
        }
    }

    /// The scalar as a rational number, if it is one.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            Scalar::PAdic { value, .. } => Some(value.clone()),
            Scalar::Hahn(s) => s.as_constant(),
        }
    }

    pub fn check_backend(&self, other: &Scalar) -> Result<()> {
        if self.backend() == other.backend() {
            Ok(())
        } else {
            Err(Error::BackendMismatch {
                left: self.backend().to_string(),
                right: other.backend().to_string(),
            })
        }
    }

    /// Multiplies by a rational number.
    pub fn scale(&self, q: &BigRational) -> Scalar {
        match self {
            Scalar::PAdic { p, value } => Scalar::PAdic {
                p: *p,
                value: value * q,
            },
            Scalar::Hahn(s) => Scalar::Hahn(s.scale(q)),
        }
    }

    pub fn scale_int(&self, n: &BigInt) -> Scalar {
        self.scale(&BigRational::from_integer(n.clone()))
    }

    /// `self / divisor`. Hahn quotients must terminate before exponent
    /// `cutoff`; p-adic division ignores the cutoff.
    pub fn checked_div(&self, divisor: &Scalar, cutoff: &BigRational) -> Result<Scalar> {
        self.check_backend(divisor)?;
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match (self, divisor) {
            (Scalar::PAdic { p, value }, Scalar::PAdic { value: d, .. }) => Ok(Scalar::PAdic {
                p: *p,
                value: value / d,
            }),
            (Scalar::Hahn(a), Scalar::Hahn(b)) => Ok(Scalar::Hahn(a.checked_div(b, cutoff)?)),
            _ => unreachable!(),
        }
    }

    pub fn pow(&self, n: u32) -> Scalar {
        match self {
            Scalar::PAdic { p, value } => Scalar::PAdic {
                p: *p,
                value: num_traits::pow(value.clone(), n as usize),
            },
            Scalar::Hahn(s) => Scalar::Hahn(s.pow(n)),
        }
    }

    /// The residue class representative in `ℚ` of a scalar with
    /// non-negative valuation, for the Hahn backend (its constant term).
    pub fn hahn_residue(&self) -> Option<BigRational> {
        match self {
            Scalar::Hahn(s) => Some(s.constant_term()),
            Scalar::PAdic { .. } => None,
        }
    }

    /// The residue in `{0, …, p−1}` of a p-adic scalar with non-negative
    /// valuation.
    pub fn padic_residue(&self) -> Option<u64> {
        match self {
            Scalar::PAdic { p, value } => {
                let p = BigInt::from(*p);
                let inv = mod_inverse(&value.denom().mod_floor(&p), &p)?;
                (value.numer() * inv).mod_floor(&p).to_u64()
            }
            Scalar::Hahn(_) => None,
        }
    }

    fn binary(
        &self,
        rhs: &Scalar,
        fr: impl Fn(&BigRational, &BigRational) -> BigRational,
        fh: impl Fn(&HahnSeries, &HahnSeries) -> HahnSeries,
    ) -> Scalar {
        match (self, rhs) {
            (Scalar::PAdic { p, value: a }, Scalar::PAdic { p: q, value: b }) if p == q => {
                Scalar::PAdic {
                    p: *p,
                    value: fr(a, b),
                }
            }
            (Scalar::Hahn(a), Scalar::Hahn(b)) => Scalar::Hahn(fh(a, b)),
            _ => panic!(
                "scalar backends differ: {} vs {}",
                self.backend(),
                rhs.backend()
            ),
        }
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// `v_p(n)` for a non-zero integer.
pub fn padic_valuation_int(n: &BigInt, p: u32) -> u64 {
    debug_assert!(!n.is_zero());
    if p == 2 {
        return n.trailing_zeros().unwrap_or(0);
    }
    strip_prime(n, p as u64, u64::MAX).1
}

/// Divides `n` by `p` as often as possible, up to `limit` times, and returns
/// the cofactor with the number of divisions performed. Works in chunks of
/// the largest power of `p` fitting in a machine word.
pub(crate) fn strip_prime(n: &BigInt, p: u64, limit: u64) -> (BigInt, u64) {
    if n.is_zero() || limit == 0 {
        return (n.clone(), 0);
    }
    if p == 2 {
        let k = n.trailing_zeros().unwrap_or(0).min(limit);
        return (n >> k as usize, k);
    }
    let mut chunk = p;
    let mut width = 1;
    while let Some(next) = chunk.checked_mul(p) {
        if next >= 1 << 63 {
            break;
        }
        chunk = next;
        width += 1;
    }
    let big_chunk = BigInt::from(chunk);
    let big_p = BigInt::from(p);
    let mut r = n.clone();
    let mut count = 0;
    while limit - count >= width {
        let (q, rem) = r.div_rem(&big_chunk);
        if !rem.is_zero() {
            break;
        }
        r = q;
        count += width;
    }
    while count < limit {
        let (q, rem) = r.div_rem(&big_p);
        if !rem.is_zero() {
            break;
        }
        r = q;
        count += 1;
    }
    (r, count)
}

fn padic_valuation(q: &BigRational, p: u32) -> Valuation {
    if q.is_zero() {
        return Valuation::Infinite;
    }
    let num = padic_valuation_int(q.numer(), p) as i64;
    let den = padic_valuation_int(q.denom(), p) as i64;
    Valuation::from_integer(num - den)
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.binary(rhs, |a, b| a + b, |a, b| a.add(b))
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.binary(rhs, |a, b| a - b, |a, b| a.sub(b))
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.binary(rhs, |a, b| a * b, |a, b| a.mul(b))
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::PAdic { p, value } => Scalar::PAdic {
                p: *p,
                value: -value,
            },
            Scalar::Hahn(s) => Scalar::Hahn(s.neg()),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

/// A fixed element `π` with `0 < v(π)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Uniformizer {
    value: Scalar,
    valuation: BigRational,
}

impl Uniformizer {
    pub fn new(value: Scalar) -> Result<Self> {
        match value.valuation() {
            Valuation::Finite(v) if v.is_positive() => Ok(Uniformizer {
                value,
                valuation: v,
            }),
            v => Err(Error::Precondition(format!(
                "uniformizer needs positive valuation, got {}",
                v
            ))),
        }
    }

    /// `p` on a p-adic backend, `t` on the Hahn backend.
    pub fn standard(backend: Backend) -> Self {
        let value = backend
            .element_of_valuation(&BigRational::one())
            .expect("valuation 1 is integral");
        Uniformizer {
            value,
            valuation: BigRational::one(),
        }
    }

    pub fn value(&self) -> &Scalar {
        &self.value
    }

    pub fn valuation(&self) -> &BigRational {
        &self.valuation
    }

    pub fn backend(&self) -> Backend {
        self.value.backend()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn padic_valuations() {
        let b = Backend::PAdic(2);
        assert_eq!(
            Scalar::from_integer(b, 12).valuation(),
            Valuation::from_integer(2)
        );
        assert_eq!(Scalar::zero(b).valuation(), Valuation::Infinite);
        let third = Scalar::from_rational(Backend::PAdic(3), q(1, 3));
        assert_eq!(third.valuation(), Valuation::from_integer(-1));
    }

    #[test]
    fn hahn_valuation_is_least_exponent() {
        let s = Scalar::Hahn(HahnSeries::from_terms([
            (q(1, 2), q(1, 1)),
            (q(2, 1), q(1, 1)),
        ]));
        assert_eq!(s.valuation(), Valuation::from_rational(q(1, 2)));
    }

    #[test]
    fn field_arith_examples() {
        let b = Backend::PAdic(3);
        let r = field_arith(
            &Scalar::from_rational(b, q(1, 3)),
            &Scalar::from_integer(b, 9),
            &ArithOp::Mul,
        )
        .unwrap();
        assert_eq!(r, Scalar::from_integer(b, 3));
        assert_eq!(r.valuation(), Valuation::from_integer(1));

        let two = Backend::PAdic(2);
        let s = field_arith(&Scalar::one(two), &Scalar::one(two), &ArithOp::Add).unwrap();
        assert_eq!(s.valuation(), Valuation::from_integer(1));

        let a = Scalar::Hahn(HahnSeries::from_terms([
            (q(1, 1), q(1, 1)),
            (q(2, 1), q(1, 1)),
        ]));
        let b = Scalar::Hahn(HahnSeries::monomial(q(1, 1), q(-1, 1)));
        let c = field_arith(&a, &b, &ArithOp::Add).unwrap();
        assert_eq!(c, Scalar::Hahn(HahnSeries::monomial(q(2, 1), q(1, 1))));
    }

    #[test]
    fn division_errors() {
        let b = Backend::PAdic(5);
        let err = field_arith(
            &Scalar::one(b),
            &Scalar::zero(b),
            &ArithOp::Div { cutoff: q(10, 1) },
        );
        assert_eq!(err, Err(Error::DivisionByZero));
        let mismatch = field_arith(&Scalar::one(b), &Scalar::one(Backend::Hahn), &ArithOp::Add);
        assert!(matches!(mismatch, Err(Error::BackendMismatch { .. })));
    }

    #[test]
    fn residues() {
        let b = Backend::PAdic(5);
        assert_eq!(Scalar::from_rational(b, q(1, 2)).padic_residue(), Some(3));
        assert_eq!(Scalar::from_integer(b, -1).padic_residue(), Some(4));
    }

    #[test]
    fn strip_prime_counts_and_respects_limit() {
        let n = BigInt::from(3).pow(50u32) * 7;
        assert_eq!(strip_prime(&n, 3, u64::MAX), (BigInt::from(7), 50));
        let (rest, k) = strip_prime(&n, 3, 45);
        assert_eq!(k, 45);
        assert_eq!(rest, BigInt::from(3).pow(5u32) * 7);
    }

    #[test]
    fn prime_validation() {
        assert!(Backend::padic(7).is_ok());
        assert_eq!(Backend::padic(9), Err(Error::InvalidPrime(9)));
    }

    #[test]
    fn element_of_valuation() {
        let e = Backend::PAdic(2).element_of_valuation(&q(3, 1)).unwrap();
        assert_eq!(e, Scalar::from_integer(Backend::PAdic(2), 8));
        assert!(Backend::PAdic(2).element_of_valuation(&q(1, 2)).is_err());
        let h = Backend::Hahn.element_of_valuation(&q(1, 3)).unwrap();
        assert_eq!(h.valuation(), Valuation::from_rational(q(1, 3)));
    }
}

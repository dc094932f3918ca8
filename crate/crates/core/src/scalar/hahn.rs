//! Finite-support Hahn series `Σ a_γ t^γ` with rational exponents and
//! rational coefficients.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::valuation::Valuation;
use crate::error::{Error, Result};

/// A Hahn series with finite support, stored as `(exponent, coefficient)`
/// pairs sorted by strictly increasing exponent with no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct HahnSeries {
    terms: Vec<(BigRational, BigRational)>,
}

impl HahnSeries {
    pub fn zero() -> Self {
        HahnSeries { terms: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(BigRational::zero(), c)
    }

    /// `c · t^e`.
    pub fn monomial(e: BigRational, c: BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        HahnSeries {
            terms: vec![(e, c)],
        }
    }

    /// Builds a series from arbitrary terms, merging equal exponents and
    /// dropping zero coefficients.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (BigRational, BigRational)>,
    {
        let mut terms: Vec<_> = terms.into_iter().collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(BigRational, BigRational)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match out.last_mut() {
                Some((le, lc)) if *le == e => *lc += c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        HahnSeries { terms: out }
    }

    pub fn terms(&self) -> &[(BigRational, BigRational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_zero() && self.terms[0].1.is_one()
    }

    /// `min{γ : a_γ ≠ 0}`.
    pub fn valuation(&self) -> Valuation {
        match self.terms.first() {
            Some((e, _)) => Valuation::Finite(e.clone()),
            None => Valuation::Infinite,
        }
    }

    /// The coefficient of `t^0`, which is the residue for elements of
    /// non-negative valuation.
    pub fn constant_term(&self) -> BigRational {
        self.terms
            .iter()
            .find(|(e, _)| e.is_zero())
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigRational::zero)
    }

    /// `Some(c)` when the series is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.as_slice() {
            [] => Some(BigRational::zero()),
            [(e, c)] if e.is_zero() => Some(c.clone()),
            _ => None,
        }
    }

    /// `Some((e, c))` when the series is the monomial `c·t^e`.
    pub fn as_monomial(&self) -> Option<(&BigRational, &BigRational)> {
        match self.terms.as_slice() {
            [(e, c)] => Some((e, c)),
            _ => None,
        }
    }

    pub fn neg(&self) -> Self {
        HahnSeries {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = &a[i].1 + &b[j].1;
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        HahnSeries { terms: out }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if let ([(e1, c1)], [(e2, c2)]) = (self.terms.as_slice(), other.terms.as_slice()) {
            return HahnSeries {
                terms: vec![(e1 + e2, c1 * c2)],
            };
        }
        let mut prod = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                prod.push((e1 + e2, c1 * c2));
            }
        }
        Self::from_terms(prod)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        HahnSeries {
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    /// Exact quotient `self / divisor`, computed by long division from the
    /// lowest exponent upwards.
    ///
    /// Succeeds when the division terminates with zero remainder before any
    /// quotient exponent exceeds `cutoff`. A non-monomial divisor generally
    /// has an inverse of infinite support, in which case this returns
    /// [`Error::HahnCutoff`].
    pub fn checked_div(&self, divisor: &Self, cutoff: &BigRational) -> Result<Self> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (de, dc) = divisor.terms[0].clone();
        if divisor.terms.len() == 1 {
            return Ok(HahnSeries {
                terms: self.terms.iter().map(|(e, c)| (e - &de, c / &dc)).collect(),
            });
        }
        let mut remainder = self.clone();
        let mut quotient = Vec::new();
        while let Some((re, rc)) = remainder.terms.first().cloned() {
            let qe = &re - &de;
            if &qe > cutoff {
                return Err(Error::HahnCutoff {
                    cutoff: super::valuation::format_rational(cutoff),
                });
            }
            let qc = &rc / &dc;
            let step = divisor.mul(&HahnSeries::monomial(qe.clone(), qc.clone()));
            remainder = remainder.sub(&step);
            quotient.push((qe, qc));
        }
        Ok(HahnSeries::from_terms(quotient))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::constant(BigRational::one());
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        result
    }
}

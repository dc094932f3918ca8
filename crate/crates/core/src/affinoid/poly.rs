use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::multi_index::MultiIndex;
use super::power;
use crate::error::{Error, Result};
use crate::scalar::{falling_factorial, Backend, Scalar, Valuation};

/// A sparse polynomial in `d` variables over a scalar backend: the
/// truncation-level stand-in for an affinoid function on the unit polydisc.
///
/// Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    backend: Backend,
    dim: usize,
    terms: BTreeMap<MultiIndex, Scalar>,
}

/// The name used for polynomials when they are read as functions on a
/// domain.
pub type AffinoidFunction = Poly;

impl Poly {
    pub fn zero(backend: Backend, dim: usize) -> Self {
        Poly {
            backend,
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Scalar) -> Self {
        Self::monomial(c, MultiIndex::zeros(dim))
    }

    pub fn one(backend: Backend, dim: usize) -> Self {
        Self::constant(dim, Scalar::one(backend))
    }

    /// `c · x^α`.
    pub fn monomial(c: Scalar, alpha: MultiIndex) -> Self {
        let mut p = Poly::zero(c.backend(), alpha.dim());
        if !c.is_zero() {
            p.terms.insert(alpha, c);
        }
        p
    }

    /// The coordinate function `x_i` (zero-based `i`).
    pub fn var(backend: Backend, dim: usize, i: usize) -> Self {
        Self::monomial(Scalar::one(backend), MultiIndex::unit(dim, i))
    }

    /// Builds a polynomial from terms, summing repeated exponents.
    pub fn from_terms<I>(backend: Backend, dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Scalar)>,
    {
        let mut p = Poly::zero(backend, dim);
        for (alpha, c) in terms {
            if alpha.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: alpha.dim(),
                });
            }
            if c.backend() != backend {
                return Err(Error::BackendMismatch {
                    left: backend.to_string(),
                    right: c.backend().to_string(),
                });
            }
            p.add_term(alpha, c);
        }
        Ok(p)
    }

    /// A univariate polynomial from dense coefficients, lowest degree first.
    pub fn from_univariate(backend: Backend, coeffs: Vec<Scalar>) -> Self {
        let mut p = Poly::zero(backend, 1);
        for (k, c) in coeffs.into_iter().enumerate() {
            if !c.is_zero() {
                p.terms.insert(MultiIndex::new(vec![k as u32]), c);
            }
        }
        p
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, Scalar> {
        &self.terms
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Scalar {
        self.terms
            .get(alpha)
            .cloned()
            .unwrap_or_else(|| Scalar::zero(self.backend))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest `|α|` in the support, `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::degree).max()
    }

    /// The value at the origin.
    pub fn constant_term(&self) -> Scalar {
        self.coeff(&MultiIndex::zeros(self.dim))
    }

    /// Dense coefficients of a univariate polynomial, lowest degree first.
    pub fn univariate_coeffs(&self) -> Option<Vec<Scalar>> {
        if self.dim != 1 {
            return None;
        }
        let deg = self.total_degree().unwrap_or(0) as usize;
        let mut out = vec![Scalar::zero(self.backend); deg + 1];
        for (a, c) in &self.terms {
            out[a.entries()[0] as usize] = c.clone();
        }
        Some(out)
    }

    fn add_term(&mut self, alpha: MultiIndex, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(alpha) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn check_compatible(&self, other: &Poly) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        if self.backend != other.backend {
            return Err(Error::BackendMismatch {
                left: self.backend.to_string(),
                right: other.backend.to_string(),
            });
        }
        Ok(())
    }

    fn assert_compatible(&self, other: &Poly) {
        if let Err(e) = self.check_compatible(other) {
            panic!("{}", e);
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.assert_compatible(other);
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            backend: self.backend,
            dim: self.dim,
            terms: self.terms.iter().map(|(a, c)| (a.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.assert_compatible(other);
        let mut out = Poly::zero(self.backend, self.dim);
        for (a, c) in &self.terms {
            for (b, e) in &other.terms {
                out.add_term(a.add(b), c * e);
            }
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        let mut out = Poly::zero(self.backend, self.dim);
        if c.is_zero() {
            return out;
        }
        for (a, e) in &self.terms {
            out.add_term(a.clone(), e * c);
        }
        out
    }

    pub fn scale_rational(&self, q: &BigRational) -> Poly {
        self.scale(&Scalar::from_rational(self.backend, q.clone()))
    }

    pub fn scale_int(&self, n: &BigInt) -> Poly {
        self.scale(&Scalar::from_bigint(self.backend, n.clone()))
    }

    /// `x^β · self`.
    pub fn shift(&self, beta: &MultiIndex) -> Poly {
        Poly {
            backend: self.backend,
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(a, c)| (a.add(beta), c.clone()))
                .collect(),
        }
    }

    /// `self^n`. Univariate inputs whose coefficients are rational (or, on
    /// the Hahn backend, monomials with exponents in arithmetic progression)
    /// are expanded by a coefficient recurrence; everything else falls back
    /// to repeated squaring.
    pub fn pow(&self, n: u32) -> Poly {
        if n == 0 {
            return Poly::one(self.backend, self.dim);
        }
        if self.dim == 1 && self.terms.len() > 1 {
            if let Some(coeffs) = power::pow_univariate(self, n) {
                return Poly::from_univariate(self.backend, coeffs);
            }
        }
        let mut result = Poly::one(self.backend, self.dim);
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

    /// `∂^α self` with `∂^α x^β = (β!/(β−α)!) x^{β−α}`.
    pub fn derivative(&self, alpha: &MultiIndex) -> Poly {
        let mut out = Poly::zero(self.backend, self.dim);
        for (beta, c) in &self.terms {
            if let Some(rest) = beta.checked_sub(alpha) {
                let f = beta
                    .entries()
                    .iter()
                    .zip(alpha.entries())
                    .fold(BigInt::from(1), |acc, (&b, &a)| {
                        acc * falling_factorial(b as u64, a as u64)
                    });
                out.add_term(rest, c.scale_int(&f));
            }
        }
        out
    }

    /// The Gauss valuation `min_α v(a_α)`; `+∞` for zero.
    pub fn gauss_norm(&self) -> Valuation {
        self.terms
            .values()
            .map(Scalar::valuation)
            .min()
            .unwrap_or(Valuation::Infinite)
    }

    /// `g(y) = f(c + s·y)` with one `(c_i, s_i)` pair per variable.
    pub fn substitute_affine(&self, center: &[Scalar], scale: &[Scalar]) -> Result<Poly> {
        if center.len() != self.dim || scale.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: center.len().min(scale.len()),
            });
        }
        let mut max_exp = vec![0u32; self.dim];
        for a in self.terms.keys() {
            for (m, &e) in max_exp.iter_mut().zip(a.entries()) {
                *m = (*m).max(e);
            }
        }
        let mut powers: Vec<Vec<Poly>> = Vec::with_capacity(self.dim);
        for i in 0..self.dim {
            let lin = Poly::constant(self.dim, center[i].clone())
                .add(&Poly::var(self.backend, self.dim, i).scale(&scale[i]));
            let mut row = vec![Poly::one(self.backend, self.dim)];
            for k in 1..=max_exp[i] as usize {
                let next = row[k - 1].mul(&lin);
                row.push(next);
            }
            powers.push(row);
        }
        let mut out = Poly::zero(self.backend, self.dim);
        for (a, c) in &self.terms {
            let mut term = Poly::constant(self.dim, c.clone());
            for (i, &e) in a.entries().iter().enumerate() {
                if e > 0 {
                    term = term.mul(&powers[i][e as usize]);
                }
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Reinterprets the polynomial in `new_dim` variables, sending `x_i` to
    /// `x_{i + offset}`.
    pub fn embed(&self, new_dim: usize, offset: usize) -> Poly {
        assert!(offset + self.dim <= new_dim);
        let terms = self
            .terms
            .iter()
            .map(|(a, c)| {
                let mut v = vec![0; new_dim];
                v[offset..offset + self.dim].copy_from_slice(a.entries());
                (MultiIndex::new(v), c.clone())
            })
            .collect();
        Poly {
            backend: self.backend,
            dim: new_dim,
            terms,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(b: Backend) -> Poly {
        Poly::var(b, 1, 0)
    }

    fn c(b: Backend, n: i64) -> Poly {
        Poly::constant(1, Scalar::from_integer(b, n))
    }

    #[test]
    fn gauss_norm_examples() {
        let b = Backend::PAdic(5);
        let f = x(b).pow(2).scale(&Scalar::from_integer(b, 5)).add(&c(b, 3));
        assert_eq!(f.gauss_norm(), Valuation::zero());
        assert_eq!(Poly::zero(b, 1).gauss_norm(), Valuation::Infinite);
        let two = Backend::PAdic(2);
        let g = x(two).sub(&c(two, 1)).pow(2);
        assert_eq!(
            g,
            x(two)
                .pow(2)
                .sub(&x(two).scale(&Scalar::from_integer(two, 2)))
                .add(&c(two, 1))
        );
        assert_eq!(g.gauss_norm(), Valuation::zero());
    }

    #[test]
    fn derivative_of_monomial() {
        let b = Backend::Hahn;
        let f = x(b).pow(5);
        let d2 = f.derivative(&MultiIndex::new(vec![2]));
        assert_eq!(d2, x(b).pow(3).scale(&Scalar::from_integer(b, 20)));
        assert!(c(b, 1).derivative(&MultiIndex::new(vec![1])).is_zero());
    }

    #[test]
    fn fast_power_matches_repeated_multiplication() {
        for b in [Backend::PAdic(3), Backend::Hahn] {
            let f = x(b).sub(&c(b, 2)).mul(&x(b).add(&c(b, 1)));
            let mut slow = Poly::one(b, 1);
            for _ in 0..7 {
                slow = slow.mul(&f);
            }
            assert_eq!(f.pow(7), slow);
        }
    }

    #[test]
    fn embed_moves_variables() {
        let b = Backend::Hahn;
        let e = x(b).embed(3, 2);
        assert_eq!(e, Poly::var(b, 3, 2));
    }
}

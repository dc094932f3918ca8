//! Differential operators `Σ a_α ∂^α` with polynomial coefficients, the
//! symbol map and operator norms.

mod decay;
mod norms;
mod oracle;
mod symbol;

use std::collections::BTreeMap;

use num_rational::BigRational;

use crate::affinoid::{MultiIndex, Poly};
use crate::error::{Error, Result};
use crate::scalar::Backend;

pub use decay::{symbol_decay_estimate, DecayCheck, DecayReport};
pub use norms::{operator_norm_bracket, seminorm, NormBracket};
pub use oracle::{EndoOracle, FnOracle, IdentityOracle, OperatorOracle};
pub use symbol::{
    combinatorial_delta, eta, roundtrip, total_symbol, translation_check, RoundtripCheck,
    RoundtripReport,
};

/// How the coefficient `a_α` pairs with the derivative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Normalization {
    /// `a_α ∂^α`.
    Plain,
    /// `a_α ∂^{(α)}` with `∂^{(α)} = ∂^α / α!`.
    Divided,
}

/// A finitely supported differential operator of order at most `order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffOperator {
    backend: Backend,
    dim: usize,
    normalization: Normalization,
    order: u32,
    coeffs: BTreeMap<MultiIndex, Poly>,
}

impl DiffOperator {
    pub fn zero(backend: Backend, dim: usize, normalization: Normalization) -> Self {
        DiffOperator {
            backend,
            dim,
            normalization,
            order: 0,
            coeffs: BTreeMap::new(),
        }
    }

    /// Builds an operator from `(α, a_α)` pairs. The order is the largest
    /// `|α|` in the support unless a larger `order` is requested.
    pub fn new<I>(
        backend: Backend,
        dim: usize,
        normalization: Normalization,
        order: Option<u32>,
        coeffs: I,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Poly)>,
    {
        let mut op = DiffOperator::zero(backend, dim, normalization);
        for (alpha, a) in coeffs {
            if alpha.dim() != dim || a.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: if alpha.dim() != dim {
                        alpha.dim()
                    } else {
                        a.dim()
                    },
                });
            }
            if a.backend() != backend {
                return Err(Error::BackendMismatch {
                    left: backend.to_string(),
                    right: a.backend().to_string(),
                });
            }
            op.add_term(alpha, a);
        }
        let support = op.coeffs.keys().map(MultiIndex::degree).max().unwrap_or(0);
        op.order = match order {
            Some(n) if n < support => {
                return Err(Error::Precondition(format!(
                    "order {} is below the support degree {}",
                    n, support
                )))
            }
            Some(n) => n,
            None => support,
        };
        Ok(op)
    }

    /// The single-term operator `a · ∂^α`.
    pub fn term(a: Poly, alpha: MultiIndex, normalization: Normalization) -> Self {
        let (backend, dim) = (a.backend(), a.dim());
        DiffOperator::new(backend, dim, normalization, None, [(alpha, a)])
            .expect("dimensions agree")
    }

    /// `∂^α` in the given normalization.
    pub fn derivation(backend: Backend, alpha: MultiIndex, normalization: Normalization) -> Self {
        let d = alpha.dim();
        Self::term(Poly::one(backend, d), alpha, normalization)
    }

    fn add_term(&mut self, alpha: MultiIndex, a: Poly) {
        if a.is_zero() {
            return;
        }
        let sum = match self.coeffs.remove(&alpha) {
            Some(prev) => prev.add(&a),
            None => a,
        };
        if !sum.is_zero() {
            self.coeffs.insert(alpha, sum);
        }
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &BTreeMap<MultiIndex, Poly> {
        &self.coeffs
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Poly {
        self.coeffs
            .get(alpha)
            .cloned()
            .unwrap_or_else(|| Poly::zero(self.backend, self.dim))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The same operator written as `Σ a_α ∂^α`.
    pub fn to_plain(&self) -> DiffOperator {
        match self.normalization {
            Normalization::Plain => self.clone(),
            Normalization::Divided => DiffOperator {
                normalization: Normalization::Plain,
                coeffs: self
                    .coeffs
                    .iter()
                    .map(|(a, c)| {
                        let f = BigRational::new(1.into(), a.factorial());
                        (a.clone(), c.scale_rational(&f))
                    })
                    .collect(),
                ..self.clone()
            },
        }
    }

    /// The same operator written as `Σ b_α ∂^{(α)}`.
    pub fn to_divided(&self) -> DiffOperator {
        match self.normalization {
            Normalization::Divided => self.clone(),
            Normalization::Plain => DiffOperator {
                normalization: Normalization::Divided,
                coeffs: self
                    .coeffs
                    .iter()
                    .map(|(a, c)| (a.clone(), c.scale_int(&a.factorial())))
                    .collect(),
                ..self.clone()
            },
        }
    }

    fn check_compatible_poly(&self, f: &Poly) -> Result<()> {
        if f.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: f.dim(),
            });
        }
        if f.backend() != self.backend {
            return Err(Error::BackendMismatch {
                left: self.backend.to_string(),
                right: f.backend().to_string(),
            });
        }
        Ok(())
    }

    /// `P(f)`, exact: only the finitely many `α` below the degree of `f` act.
    pub fn apply(&self, f: &Poly) -> Result<Poly> {
        self.check_compatible_poly(f)?;
        let mut out = Poly::zero(self.backend, self.dim);
        for (alpha, a) in &self.coeffs {
            let mut d = f.derivative(alpha);
            if d.is_zero() {
                continue;
            }
            if self.normalization == Normalization::Divided {
                d = d.scale_rational(&BigRational::new(1.into(), alpha.factorial()));
            }
            out = out.add(&a.mul(&d));
        }
        Ok(out)
    }

    /// `P ∘ Q` in plain normalization, via the Leibniz rule
    /// `∂^α ∘ b = Σ_{κ≤α} binom(α,κ) ∂^κ(b) ∂^{α−κ}`. The order is
    /// `N_P + N_Q`.
    pub fn compose(&self, other: &DiffOperator) -> Result<DiffOperator> {
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
        let p = self.to_plain();
        let q = other.to_plain();
        let mut out = DiffOperator::zero(self.backend, self.dim, Normalization::Plain);
        for (alpha, a) in &p.coeffs {
            for kappa in alpha.lower_box() {
                let rest = alpha.checked_sub(&kappa).expect("κ ≤ α");
                let binom = alpha.binomial(&kappa);
                for (beta, b) in &q.coeffs {
                    let db = b.derivative(&kappa);
                    if db.is_zero() {
                        continue;
                    }
                    out.add_term(rest.add(beta), a.mul(&db).scale_int(&binom));
                }
            }
        }
        out.order = self.order + other.order;
        Ok(out)
    }
}

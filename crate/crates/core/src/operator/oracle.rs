use super::DiffOperator;
use crate::affinoid::{MultiIndex, Poly};
use crate::error::{Error, Result};
use crate::scalar::Backend;

/// A K-linear endomorphism of polynomials, known through its values on
/// monomials up to a declared degree. Linearity and boundedness are part of
/// the contract and are not checked.
pub trait EndoOracle {
    fn dim(&self) -> usize;

    fn backend(&self) -> Backend;

    /// Largest `|β|` that may be queried.
    fn degree_cap(&self) -> u32;

    /// `ψ(x^β)` without the cap check.
    fn image(&self, beta: &MultiIndex) -> Poly;

    /// `ψ(x^β)`, refusing monomials beyond the cap.
    fn query(&self, beta: &MultiIndex) -> Result<Poly> {
        if beta.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: beta.dim(),
            });
        }
        if beta.degree() > self.degree_cap() {
            return Err(Error::DegreeCapExceeded {
                requested: beta.degree(),
                cap: self.degree_cap(),
            });
        }
        Ok(self.image(beta))
    }

    /// `ψ(f)` for a polynomial `f` of degree within the cap, by linearity.
    fn query_poly(&self, f: &Poly) -> Result<Poly> {
        let mut out = Poly::zero(self.backend(), self.dim());
        for (beta, c) in f.terms() {
            out = out.add(&self.query(beta)?.scale(c));
        }
        Ok(out)
    }
}

/// `ψ = P(·)` for a differential operator `P`.
#[derive(Clone, Debug)]
pub struct OperatorOracle {
    op: DiffOperator,
    cap: u32,
}

impl OperatorOracle {
    pub fn new(op: DiffOperator, cap: u32) -> Self {
        OperatorOracle { op, cap }
    }

    pub fn operator(&self) -> &DiffOperator {
        &self.op
    }
}

impl EndoOracle for OperatorOracle {
    fn dim(&self) -> usize {
        self.op.dim()
    }

    fn backend(&self) -> Backend {
        self.op.backend()
    }

    fn degree_cap(&self) -> u32 {
        self.cap
    }

    fn image(&self, beta: &MultiIndex) -> Poly {
        let x = Poly::monomial(crate::scalar::Scalar::one(self.backend()), beta.clone());
        self.op.apply(&x).expect("monomial matches the operator")
    }
}

/// The identity map.
#[derive(Clone, Debug)]
pub struct IdentityOracle {
    backend: Backend,
    dim: usize,
    cap: u32,
}

impl IdentityOracle {
    pub fn new(backend: Backend, dim: usize, cap: u32) -> Self {
        IdentityOracle { backend, dim, cap }
    }
}

impl EndoOracle for IdentityOracle {
    fn dim(&self) -> usize {
        self.dim
    }

    fn backend(&self) -> Backend {
        self.backend
    }

    fn degree_cap(&self) -> u32 {
        self.cap
    }

    fn image(&self, beta: &MultiIndex) -> Poly {
        Poly::monomial(crate::scalar::Scalar::one(self.backend), beta.clone())
    }
}

/// An endomorphism given by a closure on monomials.
pub struct FnOracle<F> {
    backend: Backend,
    dim: usize,
    cap: u32,
    f: F,
}

impl<F: Fn(&MultiIndex) -> Poly> FnOracle<F> {
    pub fn new(backend: Backend, dim: usize, cap: u32, f: F) -> Self {
        FnOracle {
            backend,
            dim,
            cap,
            f,
        }
    }
}

impl<F: Fn(&MultiIndex) -> Poly> EndoOracle for FnOracle<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn backend(&self) -> Backend {
        self.backend
    }

    fn degree_cap(&self) -> u32 {
        self.cap
    }

    fn image(&self, beta: &MultiIndex) -> Poly {
        (self.f)(beta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn queries_beyond_cap_fail() {
        let o = IdentityOracle::new(Backend::Hahn, 2, 3);
        assert!(o.query(&MultiIndex::new(vec![1, 2])).is_ok());
        assert_eq!(
            o.query(&MultiIndex::new(vec![2, 2])),
            Err(Error::DegreeCapExceeded {
                requested: 4,
                cap: 3
            })
        );
    }
}

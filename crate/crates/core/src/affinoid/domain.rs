use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Backend, Scalar, Valuation};

/// The polydisc `{x : v(x_i − c_i) ≥ r_i}`.
///
/// Radii are stored as valuations: `r_i = 0` is the unit radius and larger
/// values are smaller discs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polydisc {
    center: Vec<Scalar>,
    radii: Vec<BigRational>,
}

impl Polydisc {
    pub fn new(center: Vec<Scalar>, radii: Vec<BigRational>) -> Result<Self> {
        if center.len() != radii.len() {
            return Err(Error::DimensionMismatch {
                expected: center.len(),
                got: radii.len(),
            });
        }
        if center.is_empty() {
            return Err(Error::InvalidDomain("polydisc of dimension 0".into()));
        }
        let backend = center[0].backend();
        for c in &center {
            if c.backend() != backend {
                return Err(Error::InvalidDomain("center mixes backends".into()));
            }
            if c.valuation() < Valuation::zero() {
                return Err(Error::InvalidDomain(format!(
                    "center coordinate of valuation {} lies outside the unit polydisc",
                    c.valuation()
                )));
            }
        }
        if radii.iter().any(|r| r.is_negative()) {
            return Err(Error::InvalidDomain("negative radius valuation".into()));
        }
        Ok(Polydisc { center, radii })
    }

    /// The closed unit polydisc in `d` variables.
    pub fn unit(backend: Backend, d: usize) -> Self {
        Polydisc {
            center: vec![Scalar::zero(backend); d],
            radii: vec![BigRational::zero(); d],
        }
    }

    pub fn center(&self) -> &[Scalar] {
        &self.center
    }

    pub fn radii(&self) -> &[BigRational] {
        &self.radii
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn backend(&self) -> Backend {
        self.center[0].backend()
    }
}

/// A removed open disc `{x : v(x − a) > v(τ)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hole {
    pub center: Scalar,
    pub radius: BigRational,
}

/// The closed unit disc with finitely many open discs removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HoledDisc {
    backend: Backend,
    holes: Vec<Hole>,
}

impl HoledDisc {
    pub fn new(backend: Backend, holes: Vec<Hole>) -> Result<Self> {
        for h in &holes {
            if h.center.backend() != backend {
                return Err(Error::InvalidDomain(
                    "hole center on another backend".into(),
                ));
            }
            if h.center.valuation() < Valuation::zero() {
                return Err(Error::InvalidDomain(
                    "hole center outside the unit disc".into(),
                ));
            }
            if h.radius.is_negative() {
                return Err(Error::InvalidDomain(
                    "negative hole radius valuation".into(),
                ));
            }
        }
        for (i, a) in holes.iter().enumerate() {
            for b in &holes[i + 1..] {
                let gap = (&a.center - &b.center).valuation();
                let tight = Valuation::Finite(a.radius.clone().min(b.radius.clone()));
                if gap > tight {
                    return Err(Error::InvalidDomain(format!(
                        "holes around {} and {} overlap",
                        a.center, b.center
                    )));
                }
            }
        }
        Ok(HoledDisc { backend, holes })
    }

    pub fn holes(&self) -> &[Hole] {
        &self.holes
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Domain {
    Polydisc(Polydisc),
    Holed(HoledDisc),
}

impl Domain {
    pub fn dim(&self) -> usize {
        match self {
            Domain::Polydisc(p) => p.dim(),
            Domain::Holed(_) => 1,
        }
    }

    pub fn backend(&self) -> Backend {
        match self {
            Domain::Polydisc(p) => p.backend(),
            Domain::Holed(h) => h.backend(),
        }
    }
}

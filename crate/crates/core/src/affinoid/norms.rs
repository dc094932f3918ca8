use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::domain::Domain;
use super::poly::Poly;
use crate::error::{Error, Result};
use crate::scalar::{binomial, Scalar, Valuation};

/// The Gauss valuation of `f`: the smallest coefficient valuation.
pub fn gauss_norm(f: &Poly) -> Valuation {
    f.gauss_norm()
}

/// `g(y) = f(c + s·y)` where `v(s_i) = r_i`, so that the Gauss norm of `g` is
/// the supremum of `f` on the polydisc of center `c` and radius valuations
/// `r`. On the p-adic backend the radii must be integers.
pub fn rescale_to_subdisc(f: &Poly, center: &[Scalar], radii: &[BigRational]) -> Result<Poly> {
    if center.len() != f.dim() || radii.len() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            got: center.len(),
        });
    }
    if center.iter().any(|c| c.valuation() < Valuation::zero()) {
        return Err(Error::Precondition(
            "center outside the unit polydisc".into(),
        ));
    }
    let scale = radii
        .iter()
        .map(|r| f.backend().element_of_valuation(r))
        .collect::<Result<Vec<_>>>()?;
    f.substitute_affine(center, &scale)
}

/// The supremum norm of a polynomial on a domain, as a valuation.
///
/// On a polydisc this is the Gauss norm after rescaling. On a holed unit disc
/// it is the Gauss norm itself: the removed discs are open of radius at most
/// one, so the Gauss point of the unit disc survives.
pub fn sup_norm(f: &Poly, dom: &Domain) -> Result<Valuation> {
    if f.dim() != dom.dim() {
        return Err(Error::DimensionMismatch {
            expected: dom.dim(),
            got: f.dim(),
        });
    }
    match dom {
        Domain::Polydisc(p) => {
            if radii_are_zero(p.radii()) && p.center().iter().all(Scalar::is_zero) {
                return Ok(f.gauss_norm());
            }
            Ok(rescale_to_subdisc(f, p.center(), p.radii())?.gauss_norm())
        }
        Domain::Holed(_) => Ok(f.gauss_norm()),
    }
}

fn radii_are_zero(r: &[BigRational]) -> bool {
    r.iter().all(Zero::is_zero)
}

/// The supremum of a Laurent polynomial `Σ c_k y^k` on the annulus
/// `0 ≤ v(y) ≤ v(τ)`, i.e. the unit disc around the hole's center with the
/// open disc of radius `|τ|` removed.
///
/// Each monomial peaks on one of the two boundary circles, and the two
/// boundary suprema are Gauss-type norms, so the result is
/// `min_k v(c_k) + min(0, k·v(τ))`.
pub fn annulus_sup(coeffs: &BTreeMap<i64, Scalar>, tau: &BigRational) -> Valuation {
    coeffs
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(&k, c)| {
            let kv = BigRational::from_integer(BigInt::from(k)) * tau;
            c.valuation().shift(&kv.min(BigRational::zero()))
        })
        .min()
        .unwrap_or(Valuation::Infinite)
}

/// Closed form of `z_β^{-1} ∂^{(α)} z_β` for `z_β = (τ/(x−a))^{β+1}`:
/// returns `((−1)^α binom(α+β, α), α)`, meaning that scalar times
/// `(x−a)^{−α}`. The hole itself does not enter.
pub fn laurent_basis_derivative(alpha: u32, beta: u32) -> (BigInt, u32) {
    let b = binomial(alpha as u64 + beta as u64, alpha as u64);
    if alpha.is_multiple_of(2) {
        (b, alpha)
    } else {
        (-b, alpha)
    }
}

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::{DiffOperator, Normalization};
use crate::affinoid::{sup_norm, Domain, MultiIndex, Poly};
use crate::error::{Error, Result};
use crate::scalar::{multi_factorial_valuation, Valuation};

/// `sup_α |a_α| R^{|α|}` for the plain coefficients, in valuation form:
/// `min_α gauss(a_α) + |α|·r` where `r = v(R)` (negative for `R > 1`).
pub fn seminorm(op: &DiffOperator, r: &BigRational) -> Valuation {
    op.to_plain()
        .coeffs()
        .iter()
        .map(|(alpha, a)| {
            let deg = BigRational::from_integer(BigInt::from(alpha.degree()));
            a.gauss_norm().shift(&(deg * r))
        })
        .min()
        .unwrap_or(Valuation::Infinite)
}

/// Two-sided bounds on an operator norm, both as valuations of norms.
///
/// `lower` is the valuation of a lower bound for the norm and `upper` the
/// valuation of an upper bound, so `upper ≤ lower` as valuations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormBracket {
    pub lower: Valuation,
    pub upper: Valuation,
}

/// Brackets the operator norm of `P` on a polydisc.
///
/// The lower bound is the largest ratio `|P(e_δ)| / |e_δ|` over the
/// orthogonal basis `e_δ = Π (x_i − c_i)^{δ_i}` with `|δ| ≤ degree_cap`.
/// The upper bound combines coefficient norms with `‖∂^{(α)}‖ = ρ^{−α}`.
pub fn operator_norm_bracket(
    op: &DiffOperator,
    dom: &Domain,
    degree_cap: u32,
) -> Result<NormBracket> {
    let Domain::Polydisc(disc) = dom else {
        return Err(Error::UnsupportedDomain(
            "operator norms are bracketed on polydiscs only".into(),
        ));
    };
    if disc.dim() != op.dim() {
        return Err(Error::DimensionMismatch {
            expected: op.dim(),
            got: disc.dim(),
        });
    }
    let d = op.dim();
    let b = op.backend();
    let radius_of = |alpha: &MultiIndex| -> BigRational {
        alpha
            .entries()
            .iter()
            .zip(disc.radii())
            .map(|(&a, r)| r * BigRational::from_integer(BigInt::from(a)))
            .sum()
    };

    let linear: Vec<Poly> = (0..d)
        .map(|i| Poly::var(b, d, i).sub(&Poly::constant(d, disc.center()[i].clone())))
        .collect();
    let mut lower = Valuation::Infinite;
    for delta in MultiIndex::up_to_degree(d, degree_cap) {
        let e = delta
            .entries()
            .iter()
            .enumerate()
            .fold(Poly::one(b, d), |acc, (i, &k)| acc.mul(&linear[i].pow(k)));
        let image = op.apply(&e)?;
        let ratio = sup_norm(&image, dom)?.shift(&-radius_of(&delta));
        lower = lower.min(ratio);
    }

    let mut upper = Valuation::Infinite;
    for (alpha, a) in op.coeffs() {
        let mut v = sup_norm(a, dom)?.shift(&-radius_of(alpha));
        if op.normalization() == Normalization::Plain {
            v = v + multi_factorial_valuation(b, alpha.entries());
        }
        upper = upper.min(v);
    }
    Ok(NormBracket { lower, upper })
}

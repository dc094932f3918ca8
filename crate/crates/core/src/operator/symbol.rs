use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::oracle::{EndoOracle, OperatorOracle};
use super::DiffOperator;
use crate::affinoid::{MultiIndex, Poly};
use crate::error::{Error, Result};
use crate::scalar::{falling_factorial, Scalar};

/// `Σ_{β≤α} ψ(x^β) binom(α,β) (−x)^{α−β}`, the symbol before division by
/// `α!`.
fn eta_sum(psi: &dyn EndoOracle, alpha: &MultiIndex) -> Result<Poly> {
    let mut out = Poly::zero(psi.backend(), psi.dim());
    for beta in alpha.lower_box() {
        let rest = alpha.checked_sub(&beta).expect("β ≤ α");
        let coeff = alpha.binomial(&beta) * rest.sign();
        out = out.add(&psi.query(&beta)?.shift(&rest).scale_int(&coeff));
    }
    Ok(out)
}

/// `η_α(ψ) = (1/α!) Σ_{β≤α} ψ(x^β) binom(α,β) (−x)^{α−β}`.
///
/// For `ψ = P(·)` with `P = Σ a_α ∂^α` this recovers `a_α`.
pub fn eta(psi: &dyn EndoOracle, alpha: &MultiIndex) -> Result<Poly> {
    let s = eta_sum(psi, alpha)?;
    Ok(s.scale_rational(&BigRational::new(1.into(), alpha.factorial())))
}

/// `Σ_{|α|≤cap} η_α(ψ) ζ^α` as a polynomial in `2d` variables, the first
/// `d` being `x` and the last `d` being `ζ`.
pub fn total_symbol(psi: &dyn EndoOracle, cap: u32) -> Result<Poly> {
    if cap > psi.degree_cap() {
        return Err(Error::DegreeCapExceeded {
            requested: cap,
            cap: psi.degree_cap(),
        });
    }
    let d = psi.dim();
    let mut out = Poly::zero(psi.backend(), 2 * d);
    for alpha in MultiIndex::up_to_degree(d, cap) {
        let e = eta(psi, &alpha)?;
        if e.is_zero() {
            continue;
        }
        let zeta = MultiIndex::zeros(d).concat(&alpha);
        out = out.add(&e.embed(2 * d, 0).shift(&zeta));
    }
    Ok(out)
}

/// Checks that the symbol summand does not depend on the choice of
/// coordinates: computing it in `y = x − c` (querying `ψ` on `y^β` by
/// linearity) gives the same polynomial as in `x`.
pub fn translation_check(psi: &dyn EndoOracle, c: &[Scalar], alpha: &MultiIndex) -> Result<bool> {
    let d = psi.dim();
    if c.len() != d || alpha.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: c.len(),
        });
    }
    if c.iter()
        .any(|ci| ci.valuation() < crate::scalar::Valuation::zero())
    {
        return Err(Error::Precondition(
            "translation center must be integral".into(),
        ));
    }
    let lhs = eta_sum(psi, alpha)?;

    let b = psi.backend();
    let y: Vec<Poly> = (0..d)
        .map(|i| Poly::var(b, d, i).sub(&Poly::constant(d, c[i].clone())))
        .collect();
    let y_pow = |e: &MultiIndex| -> Poly {
        e.entries()
            .iter()
            .enumerate()
            .fold(Poly::one(b, d), |acc, (i, &k)| acc.mul(&y[i].pow(k)))
    };
    let mut rhs = Poly::zero(b, d);
    for beta in alpha.lower_box() {
        let rest = alpha.checked_sub(&beta).expect("β ≤ α");
        let image = psi.query_poly(&y_pow(&beta))?;
        let coeff = alpha.binomial(&beta) * rest.sign();
        rhs = rhs.add(&image.mul(&y_pow(&rest)).scale_int(&coeff));
    }
    Ok(lhs == rhs)
}

/// `Σ_{α≤β≤γ} (β!/(β−α)!) binom(γ,β) (−1)^{|γ−β|}`, which equals
/// `γ! δ_{α,γ}`.
pub fn combinatorial_delta(alpha: &MultiIndex, gamma: &MultiIndex) -> Result<BigInt> {
    if !alpha.le(gamma) {
        return Err(Error::Precondition(format!(
            "{} is not below {}",
            alpha, gamma
        )));
    }
    let mut total = BigInt::zero();
    for beta in MultiIndex::interval(alpha, gamma) {
        let falling = beta
            .entries()
            .iter()
            .zip(alpha.entries())
            .fold(BigInt::from(1), |acc, (&b, &a)| {
                acc * falling_factorial(b as u64, a as u64)
            });
        let rest = gamma.checked_sub(&beta).expect("β ≤ γ");
        total += falling * gamma.binomial(&beta) * rest.sign();
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundtripCheck {
    pub index: MultiIndex,
    pub expected: String,
    pub got: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundtripReport {
    pub operator_id: String,
    pub checks: Vec<RoundtripCheck>,
    pub pass: bool,
}

/// Rebuilds `P` from its action: queries `ψ = P(·)` on monomials, computes
/// `η_γ(ψ)` for every `|γ| ≤ N` and compares with the plain coefficients of
/// `P`.
pub fn roundtrip(op: &DiffOperator, operator_id: &str) -> RoundtripReport {
    let plain = op.to_plain();
    let oracle = OperatorOracle::new(op.clone(), op.order());
    let mut checks = Vec::new();
    for gamma in MultiIndex::up_to_degree(op.dim(), op.order()) {
        let expected = plain.coeff(&gamma);
        let got = eta(&oracle, &gamma).expect("queries stay within the order");
        checks.push(RoundtripCheck {
            pass: expected == got,
            index: gamma,
            expected: expected.to_string(),
            got: got.to_string(),
        });
    }
    RoundtripReport {
        operator_id: operator_id.to_string(),
        pass: checks.iter().all(|c| c.pass),
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{IdentityOracle, Normalization};
    use crate::scalar::Backend;

    fn idx(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn identity_symbol() {
        let psi = IdentityOracle::new(Backend::PAdic(2), 2, 4);
        assert_eq!(
            eta(&psi, &idx(&[0, 0])).unwrap(),
            Poly::one(Backend::PAdic(2), 2)
        );
        for a in MultiIndex::up_to_degree(2, 4).into_iter().skip(1) {
            assert!(eta(&psi, &a).unwrap().is_zero(), "{}", a);
        }
        assert_eq!(
            total_symbol(&psi, 4).unwrap(),
            Poly::one(Backend::PAdic(2), 4)
        );
    }

    #[test]
    fn euler_operator_symbol() {
        let b = Backend::Hahn;
        let x = Poly::var(b, 1, 0);
        let p = DiffOperator::term(x.clone(), idx(&[1]), Normalization::Plain);
        let psi = OperatorOracle::new(p, 3);
        assert!(eta(&psi, &idx(&[0])).unwrap().is_zero());
        assert_eq!(eta(&psi, &idx(&[1])).unwrap(), x);
        let xz = Poly::monomial(Scalar::one(b), idx(&[1, 1]));
        assert_eq!(total_symbol(&psi, 3).unwrap(), xz);
    }

    #[test]
    fn second_derivative_symbol() {
        let b = Backend::PAdic(5);
        let p = DiffOperator::derivation(b, idx(&[2]), Normalization::Plain);
        let psi = OperatorOracle::new(p, 2);
        assert_eq!(eta(&psi, &idx(&[2])).unwrap(), Poly::one(b, 1));
    }

    #[test]
    fn partial_derivative_total_symbol() {
        let b = Backend::Hahn;
        let p = DiffOperator::derivation(b, idx(&[1, 0]), Normalization::Plain);
        let psi = OperatorOracle::new(p, 3);
        assert_eq!(total_symbol(&psi, 3).unwrap(), Poly::var(b, 4, 2));
    }

    #[test]
    fn translation_of_derivative() {
        let b = Backend::PAdic(3);
        let p = DiffOperator::derivation(b, idx(&[1]), Normalization::Plain);
        let psi = OperatorOracle::new(p, 1);
        assert!(translation_check(&psi, &[Scalar::one(b)], &idx(&[1])).unwrap());
        assert_eq!(eta_sum(&psi, &idx(&[1])).unwrap(), Poly::one(b, 1));
    }

    #[test]
    fn combinatorial_delta_examples() {
        assert_eq!(
            combinatorial_delta(&idx(&[0]), &idx(&[2])).unwrap(),
            BigInt::zero()
        );
        assert_eq!(
            combinatorial_delta(&idx(&[3]), &idx(&[3])).unwrap(),
            BigInt::from(6)
        );
        assert_eq!(
            combinatorial_delta(&idx(&[1, 0]), &idx(&[2, 1])).unwrap(),
            BigInt::zero()
        );
        assert!(combinatorial_delta(&idx(&[2]), &idx(&[1])).is_err());
    }

    #[test]
    fn roundtrip_euler_and_zero() {
        let b = Backend::PAdic(2);
        let x = Poly::var(b, 1, 0);
        let p = DiffOperator::term(x, idx(&[1]), Normalization::Plain);
        let r = roundtrip(&p, "euler");
        assert!(r.pass);
        let z = roundtrip(&DiffOperator::zero(b, 2, Normalization::Plain), "zero");
        assert!(z.pass);
        assert_eq!(z.checks.len(), 1);
    }
}

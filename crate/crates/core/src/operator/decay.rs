use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::norms::operator_norm_bracket;
use super::DiffOperator;
use crate::affinoid::{sup_norm, Domain, MultiIndex, Polydisc};
use crate::error::Result;
use crate::scalar::{multi_factorial_valuation, Scalar, Uniformizer, Valuation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecayCheck {
    pub index: MultiIndex,
    /// `X_n` for the shrunken polydisc, `X` for the unit polydisc.
    pub domain: String,
    /// Required lower bound on the coefficient valuation.
    pub expected: Valuation,
    /// The coefficient valuation actually found.
    pub got: Valuation,
    pub margin: Option<String>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecayReport {
    pub operator_id: String,
    pub n: u32,
    pub operator_norm_upper: Valuation,
    pub checks: Vec<DecayCheck>,
    pub pass: bool,
}

/// Checks `|a_α|_{X_n} ≤ ‖P‖_{X_n} · |π|^{n|α|} / |α!|` for every stored
/// `α`, where `X_n` is the polydisc of radius `|π|^n` around the origin and
/// `‖P‖_{X_n}` is replaced by the upper end of its bracket.
///
/// When `a_α` attains its Gauss norm at the origin, the same bound is also
/// checked for the Gauss norm on the unit polydisc.
pub fn symbol_decay_estimate(
    op: &DiffOperator,
    n: u32,
    pi: &Uniformizer,
    degree_cap: u32,
    operator_id: &str,
) -> Result<DecayReport> {
    let b = op.backend();
    let d = op.dim();
    let step = pi.valuation() * BigRational::from_integer(BigInt::from(n));
    let x_n = Domain::Polydisc(Polydisc::new(
        vec![Scalar::zero(b); d],
        vec![step.clone(); d],
    )?);
    let upper = operator_norm_bracket(op, &x_n, degree_cap)?.upper;

    let plain = op.to_plain();
    let mut checks = Vec::new();
    for (alpha, a) in plain.coeffs() {
        let deg = BigRational::from_integer(BigInt::from(alpha.degree()));
        let expected = upper
            .shift(&(&step * deg))
            .checked_sub(&multi_factorial_valuation(b, alpha.entries()))
            .expect("factorial valuations are finite");
        let got = sup_norm(a, &x_n)?;
        checks.push(check(alpha, "X_n", &expected, got));
        let gauss = a.gauss_norm();
        if a.constant_term().valuation() == gauss {
            checks.push(check(alpha, "X", &expected, gauss));
        }
    }
    Ok(DecayReport {
        operator_id: operator_id.to_string(),
        n,
        operator_norm_upper: upper,
        pass: checks.iter().all(|c| c.pass),
        checks,
    })
}

fn check(alpha: &MultiIndex, domain: &str, expected: &Valuation, got: Valuation) -> DecayCheck {
    let margin = got.checked_sub(expected).map(|m| m.to_string());
    DecayCheck {
        index: alpha.clone(),
        domain: domain.to_string(),
        expected: expected.clone(),
        pass: got >= *expected,
        got,
        margin,
    }
}

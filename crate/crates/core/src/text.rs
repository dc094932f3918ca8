//! Text formats for scalars, polynomials and operators.
//!
//! * p-adic scalars: `num/den@p` (the parser also takes `num@p`).
//! * Hahn scalars: `c*t^(e)` terms by increasing exponent, joined by ` + `;
//!   zero is `0`. The parser also takes `t^(e)` and a bare rational `c`.
//! * Polynomials: terms by decreasing exponent, `coeff * x1^e1*x2^e2`.
//!   Rational coefficients are written bare, others as `[scalar]`.
//! * Operators: one `(α_1,…,α_d) : polynomial` line per coefficient, with
//!   optional `dimension:`, `normalization: plain|divided` and `order:`
//!   directives and `#` comments.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::affinoid::{MultiIndex, Poly};
use crate::error::{Error, Result};
use crate::operator::{DiffOperator, Normalization};
use crate::scalar::{format_rational, Backend, HahnSeries, Scalar};

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::PAdic { p, value } => write!(f, "{}/{}@{}", value.numer(), value.denom(), p),
            Scalar::Hahn(s) => write!(f, "{}", s),
        }
    }
}

impl fmt::Display for HahnSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms().iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{}*t^({})", format_rational(c), format_rational(e))?;
        }
        Ok(())
    }
}

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    parse_rational_at(s, 0)
}

fn parse_rational_at(s: &str, line: usize) -> Result<BigRational> {
    let s = s.trim();
    let bad = || err(line, format!("malformed rational `{}`", s));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// Parses a scalar for a known backend.
pub fn parse_scalar(s: &str, backend: Backend) -> Result<Scalar> {
    parse_scalar_at(s, backend, 0)
}

fn parse_scalar_at(s: &str, backend: Backend, line: usize) -> Result<Scalar> {
    let s = s.trim();
    match backend {
        Backend::PAdic(p) => {
            let body = match s.rsplit_once('@') {
                Some((body, q)) => {
                    let q: u32 = q
                        .trim()
                        .parse()
                        .map_err(|_| err(line, format!("malformed prime in `{}`", s)))?;
                    if q != p {
                        return Err(err(line, format!("scalar `{}` is not {}-adic", s, p)));
                    }
                    body
                }
                None => s,
            };
            Ok(Scalar::from_rational(
                backend,
                parse_rational_at(body, line)?,
            ))
        }
        Backend::Hahn => {
            if s == "0" {
                return Ok(Scalar::zero(backend));
            }
            let mut terms = Vec::new();
            for part in s.split(" + ") {
                let part = part.trim();
                let (c, e) = match part.find("t^(") {
                    Some(pos) => {
                        let coeff = part[..pos].trim().trim_end_matches('*').trim();
                        let rest = &part[pos + 3..];
                        let exp = rest
                            .strip_suffix(')')
                            .ok_or_else(|| err(line, format!("unclosed exponent in `{}`", part)))?;
                        let c = if coeff.is_empty() {
                            BigRational::one()
                        } else if coeff == "-" {
                            -BigRational::one()
                        } else {
                            parse_rational_at(coeff, line)?
                        };
                        (c, parse_rational_at(exp, line)?)
                    }
                    None => (parse_rational_at(part, line)?, BigRational::zero()),
                };
                terms.push((e, c));
            }
            Ok(Scalar::Hahn(HahnSeries::from_terms(terms)))
        }
    }
}

fn write_coeff(
    f: &mut fmt::Formatter<'_>,
    c: &Scalar,
    first: bool,
    has_monomial: bool,
) -> fmt::Result {
    match c.as_rational() {
        Some(q) => {
            let neg = q.is_negative();
            let abs = q.abs();
            match (first, neg) {
                (true, true) => f.write_str("-")?,
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
                (true, false) => {}
            }
            if !abs.is_one() || !has_monomial {
                f.write_str(&format_rational(&abs))?;
                if has_monomial {
                    f.write_str(" * ")?;
                }
            }
            Ok(())
        }
        None => {
            if !first {
                f.write_str(" + ")?;
            }
            write!(f, "[{}]", c)?;
            if has_monomial {
                f.write_str(" * ")?;
            }
            Ok(())
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (alpha, c)) in self.terms().iter().rev().enumerate() {
            let has_monomial = !alpha.is_zero();
            write_coeff(f, c, i == 0, has_monomial)?;
            let mut first_var = true;
            for (j, &e) in alpha.entries().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first_var {
                    f.write_str("*")?;
                }
                first_var = false;
                if e == 1 {
                    write!(f, "x{}", j + 1)?;
                } else {
                    write!(f, "x{}^{}", j + 1, e)?;
                }
            }
        }
        Ok(())
    }
}

/// Splits at top-level `+`/`-` that separate terms, keeping the sign with
/// the following term.
fn split_terms(s: &str) -> Vec<(bool, String)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut current = String::new();
    let mut negative = false;
    let mut last_significant: Option<char> = None;
    for ch in s.chars() {
        match ch {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            _ => {}
        }
        let is_sep = depth == 0
            && (ch == '+' || ch == '-')
            && !matches!(last_significant, Some('*') | Some('^') | Some('/') | None);
        if is_sep {
            out.push((negative, current.trim().to_string()));
            current.clear();
            negative = ch == '-';
            last_significant = None;
            continue;
        }
        if depth == 0 && ch == '-' && current.trim().is_empty() && last_significant.is_none() {
            negative = !negative;
            continue;
        }
        if !ch.is_whitespace() {
            last_significant = Some(ch);
        }
        current.push(ch);
    }
    out.push((negative, current.trim().to_string()));
    out
}

/// Parses a polynomial in `x1, …, xd` (`x` alone means `x1`).
pub fn parse_poly(s: &str, backend: Backend, dim: usize) -> Result<Poly> {
    parse_poly_at(s, backend, dim, 0)
}

fn parse_poly_at(s: &str, backend: Backend, dim: usize, line: usize) -> Result<Poly> {
    let s = s.trim();
    if s.is_empty() {
        return Err(err(line, "empty polynomial"));
    }
    let mut terms = Vec::new();
    for (negative, term) in split_terms(s) {
        if term.is_empty() {
            return Err(err(line, format!("empty term in `{}`", s)));
        }
        let mut coeff = Scalar::one(backend);
        let mut alpha = vec![0u32; dim];
        let mut rest = term.as_str();
        if let Some(inner) = rest.strip_prefix('[') {
            let close = inner
                .find(']')
                .ok_or_else(|| err(line, format!("unclosed `[` in `{}`", term)))?;
            coeff = parse_scalar_at(&inner[..close], backend, line)?;
            rest = inner[close + 1..].trim();
            rest = rest.strip_prefix('*').unwrap_or(rest).trim();
        }
        for factor in rest.split('*').map(str::trim).filter(|f| !f.is_empty()) {
            if let Some(var) = factor.strip_prefix('x') {
                let (name, exp) = match var.split_once('^') {
                    Some((n, e)) => (n, e),
                    None => (var, "1"),
                };
                let index: usize = if name.is_empty() {
                    1
                } else {
                    name.parse()
                        .map_err(|_| err(line, format!("unknown variable `x{}`", name)))?
                };
                if index == 0 || index > dim {
                    return Err(err(
                        line,
                        format!("variable `x{}` outside dimension {}", index, dim),
                    ));
                }
                let e: u32 = exp
                    .trim()
                    .parse()
                    .map_err(|_| err(line, format!("malformed exponent in `{}`", factor)))?;
                alpha[index - 1] += e;
            } else {
                let q = parse_rational_at(factor, line)?;
                coeff = coeff.scale(&q);
            }
        }
        if negative {
            coeff = -coeff;
        }
        terms.push((MultiIndex::new(alpha), coeff));
    }
    Poly::from_terms(backend, dim, terms).map_err(|e| err(line, e.to_string()))
}

pub fn parse_multi_index(s: &str) -> Result<MultiIndex> {
    parse_multi_index_at(s, 0)
}

fn parse_multi_index_at(s: &str, line: usize) -> Result<MultiIndex> {
    let s = s.trim();
    let inner = s
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| err(line, format!("multi-index `{}` must be parenthesized", s)))?;
    let entries = inner
        .split(',')
        .map(|e| {
            e.trim()
                .parse::<u32>()
                .map_err(|_| err(line, format!("malformed multi-index `{}`", s)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MultiIndex::new(entries))
}

/// Parses an operator file.
pub fn parse_operator(src: &str, backend: Backend) -> Result<DiffOperator> {
    let mut dim: Option<usize> = None;
    let mut normalization = Normalization::Plain;
    let mut order: Option<u32> = None;
    let mut pending: Vec<(usize, MultiIndex, String)> = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        if let Some(v) = text.strip_prefix("dimension:") {
            dim = Some(
                v.trim()
                    .parse()
                    .map_err(|_| err(line, "malformed dimension"))?,
            );
        } else if let Some(v) = text.strip_prefix("normalization:") {
            normalization = match v.trim() {
                "plain" => Normalization::Plain,
                "divided" => Normalization::Divided,
                other => return Err(err(line, format!("unknown normalization `{}`", other))),
            };
        } else if let Some(v) = text.strip_prefix("order:") {
            order = Some(v.trim().parse().map_err(|_| err(line, "malformed order"))?);
        } else {
            let (lhs, rhs) = text
                .split_once(" : ")
                .or_else(|| text.split_once(':'))
                .ok_or_else(|| err(line, "expected `(α) : polynomial`"))?;
            let alpha = parse_multi_index_at(lhs, line)?;
            match dim {
                None => dim = Some(alpha.dim()),
                Some(d) if d != alpha.dim() => {
                    return Err(err(
                        line,
                        format!("multi-index {} does not have {} entries", alpha, d),
                    ))
                }
                _ => {}
            }
            pending.push((line, alpha, rhs.to_string()));
        }
    }
    let dim = dim.unwrap_or(1);
    let mut coeffs = Vec::with_capacity(pending.len());
    for (line, alpha, rhs) in pending {
        if alpha.dim() != dim {
            return Err(err(
                line,
                format!("multi-index {} does not have {} entries", alpha, dim),
            ));
        }
        coeffs.push((alpha, parse_poly_at(&rhs, backend, dim, line)?));
    }
    DiffOperator::new(backend, dim, normalization, order, coeffs).map_err(|e| err(0, e.to_string()))
}

/// Writes an operator in the format read by [`parse_operator`].
pub fn format_operator(op: &DiffOperator) -> String {
    let mut out = format!(
        "dimension: {}\nnormalization: {}\norder: {}\n",
        op.dim(),
        match op.normalization() {
            Normalization::Plain => "plain",
            Normalization::Divided => "divided",
        },
        op.order()
    );
    for (alpha, a) in op.coeffs() {
        out.push_str(&format!("{} : {}\n", alpha, a));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_round_trip() {
        let b = Backend::PAdic(7);
        let s = Scalar::from_rational(b, BigRational::new((-3).into(), 14.into()));
        assert_eq!(s.to_string(), "-3/14@7");
        assert_eq!(parse_scalar(&s.to_string(), b).unwrap(), s);
        assert_eq!(parse_scalar("5@7", b).unwrap(), Scalar::from_integer(b, 5));
        assert!(parse_scalar("5@3", b).is_err());

        let h = parse_scalar("t^(1/2) + -2*t^(3)", Backend::Hahn).unwrap();
        assert_eq!(h.to_string(), "1*t^(1/2) + -2*t^(3)");
        assert_eq!(parse_scalar(&h.to_string(), Backend::Hahn).unwrap(), h);
        assert_eq!(Scalar::zero(Backend::Hahn).to_string(), "0");
    }

    #[test]
    fn poly_round_trip() {
        let b = Backend::PAdic(5);
        let p = parse_poly("3/2 * x1^2*x2 - x2 + 7 - x1", b, 2).unwrap();
        let text = p.to_string();
        assert_eq!(text, "3/2 * x1^2*x2 - x1 - x2 + 7");
        assert_eq!(parse_poly(&text, b, 2).unwrap(), p);
        assert_eq!(parse_poly("-x^3", b, 1).unwrap().to_string(), "-x1^3");
    }

    #[test]
    fn hahn_coefficients_are_bracketed() {
        let b = Backend::Hahn;
        let p = parse_poly("[1*t^(1/3) + 1*t^(1)] * x1 - 2", b, 1).unwrap();
        let text = p.to_string();
        assert_eq!(text, "[1*t^(1/3) + 1*t^(1)] * x1 - 2");
        assert_eq!(parse_poly(&text, b, 1).unwrap(), p);
    }

    #[test]
    fn operator_file() {
        let src = "# Euler operator plus a constant\nnormalization: divided\n(1) : x\n(0) : 2\n";
        let op = parse_operator(src, Backend::PAdic(3)).unwrap();
        assert_eq!(op.order(), 1);
        let again = parse_operator(&format_operator(&op), Backend::PAdic(3)).unwrap();
        assert_eq!(again, op);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let src = "(1) : x\n(2) : x^\n";
        match parse_operator(src, Backend::Hahn) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{:?}", other),
        }
        match parse_operator("(1,0) : 1\n(1) : 2\n", Backend::Hahn) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{:?}", other),
        }
    }
}

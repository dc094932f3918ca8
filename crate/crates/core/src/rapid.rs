//! Rapid decrease of coefficient families.
//!
//! A family `(a_α)` is rapidly decreasing when `v(a_α) − r|α|v(π) → ∞` for
//! every natural `r` (condition (a)), equivalently when
//! `v(a_α) − r|α|v(π)` is bounded below for every `r` (condition (c)).
//! Both are statements about all `α`, so a positive verdict needs a
//! symbolic lower bound on the valuations; finitely many queries can only
//! ever witness failure.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::affinoid::{MultiIndex, Poly};
use crate::scalar::{format_rational, Valuation};

type PolyFn = Arc<dyn Fn(&MultiIndex) -> Poly + Send + Sync>;
type ValuationFn = Arc<dyn Fn(&MultiIndex) -> Valuation + Send + Sync>;

/// A lower bound `v(a_α) ≥ L(|α|)` with `L` a polynomial over `ℚ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuationBound {
    coeffs: Vec<BigRational>,
}

impl ValuationBound {
    /// `L(n) = Σ coeffs[k] n^k`.
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        ValuationBound { coeffs }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn eval(&self, n: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * n + c)
    }

    /// `L(n) − r·n·v(π)`.
    fn shifted(&self, r: u32, pi: &BigRational) -> ValuationBound {
        let mut c = self.coeffs.clone();
        if c.len() < 2 {
            c.resize(2, BigRational::zero());
        }
        c[1] -= pi * BigRational::from_integer(BigInt::from(r));
        ValuationBound::new(c)
    }

    fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn leading(&self) -> BigRational {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// The smallest natural `n_0` past which `L(n) ≥ m`, from the Cauchy
    /// bound on the real roots of `L − m`. `None` unless `L → ∞`.
    fn threshold(&self, m: &BigRational) -> Option<BigInt> {
        let deg = self.degree()?;
        let lead = self.leading();
        if deg == 0 || !lead.is_positive() {
            return None;
        }
        let mut c = self.coeffs.clone();
        c[0] -= m;
        let ratio = c[..deg]
            .iter()
            .map(|a| (a / &lead).abs())
            .max()
            .unwrap_or_else(BigRational::zero);
        Some((BigRational::one() + ratio).ceil().to_integer())
    }
}

/// An infinite coefficient family `α ↦ a_α`, queried either as polynomials
/// (valued by their Gauss norm) or directly through exact valuations.
#[derive(Clone)]
pub struct SymbolFamily {
    dim: usize,
    coefficients: Coefficients,
    bound: Option<ValuationBound>,
}

#[derive(Clone)]
enum Coefficients {
    Polys(PolyFn),
    Valuations(ValuationFn),
}

impl SymbolFamily {
    pub fn from_polys<F>(dim: usize, f: F) -> Self
    where
        F: Fn(&MultiIndex) -> Poly + Send + Sync + 'static,
    {
        SymbolFamily {
            dim,
            coefficients: Coefficients::Polys(Arc::new(f)),
            bound: None,
        }
    }

    pub fn from_valuations<F>(dim: usize, f: F) -> Self
    where
        F: Fn(&MultiIndex) -> Valuation + Send + Sync + 'static,
    {
        SymbolFamily {
            dim,
            coefficients: Coefficients::Valuations(Arc::new(f)),
            bound: None,
        }
    }

    pub fn with_bound(mut self, bound: ValuationBound) -> Self {
        self.bound = Some(bound);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bound(&self) -> Option<&ValuationBound> {
        self.bound.as_ref()
    }

    /// `v(a_α)`, the Gauss valuation for polynomial coefficients.
    pub fn valuation(&self, alpha: &MultiIndex) -> Valuation {
        match &self.coefficients {
            Coefficients::Polys(f) => f(alpha).gauss_norm(),
            Coefficients::Valuations(f) => f(alpha),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    DecreasingWitnessed,
    NonDecreasingWitnessed,
    Inconclusive,
}

/// Condition (a) at one `r`: `L(n) − r n v(π) ≥ m` for all `n ≥ n_0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LimitCertificate {
    pub r: u32,
    /// `(m, n_0)` pairs.
    pub thresholds: Vec<(String, String)>,
}

/// Condition (c) at one `r`: the exact infimum of `L(n) − r n v(π)` over
/// the naturals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InfimumCertificate {
    pub r: u32,
    pub infimum: String,
    pub attained_at: String,
}

/// Finite evidence against condition (c): the running minimum of
/// `v(a_α) − r|α|v(π)` over `|α| ≤ k` keeps dropping as `k` doubles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub r: u32,
    /// `(k, min_{|α|≤k} v(a_α) − r|α|v(π))` at `k = cap/4, cap/2, cap`.
    pub running_minima: Vec<(u32, Valuation)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassifyReport {
    pub verdict: Verdict,
    pub path_a: Option<Vec<LimitCertificate>>,
    pub path_c: Option<Vec<InfimumCertificate>>,
    pub paths_agree: bool,
    pub witness: Option<Witness>,
    pub bound_violations: Vec<MultiIndex>,
}

const TARGETS: [i64; 3] = [0, 10, 100];
const ENUMERATION_LIMIT: u64 = 1_000_000;

fn path_a(bound: &ValuationBound, pi: &BigRational, r_max: u32) -> Option<Vec<LimitCertificate>> {
    (0..=r_max)
        .map(|r| {
            let q = bound.shifted(r, pi);
            let thresholds = TARGETS
                .iter()
                .map(|&m| {
                    let m = BigRational::from_integer(BigInt::from(m));
                    q.threshold(&m)
                        .map(|n0| (format_rational(&m), n0.to_string()))
                })
                .collect::<Option<Vec<_>>>()?;
            Some(LimitCertificate { r, thresholds })
        })
        .collect()
}

fn infimum(q: &ValuationBound) -> Option<(BigRational, BigInt)> {
    let at = |n: &BigInt| q.eval(&BigRational::from_integer(n.clone()));
    if q.degree() == Some(2) && q.leading().is_positive() {
        // vertex of c2 n² + c1 n + c0
        let c = q.coeffs();
        let vertex = -&c[1] / (BigRational::from_integer(BigInt::from(2)) * &c[2]);
        let lo = vertex.floor().to_integer().max(BigInt::zero());
        let hi = vertex.ceil().to_integer().max(BigInt::zero());
        let (vl, vh) = (at(&lo), at(&hi));
        return Some(if vl <= vh { (vl, lo) } else { (vh, hi) });
    }
    let n0 = q.threshold(
        &q.coeffs()
            .first()
            .cloned()
            .unwrap_or_else(BigRational::zero),
    )?;
    let limit = n0.to_u64().filter(|&n| n <= ENUMERATION_LIMIT)?;
    let mut best: Option<(BigRational, BigInt)> = None;
    for n in 0..=limit {
        let n = BigInt::from(n);
        let v = at(&n);
        if best.as_ref().is_none_or(|(b, _)| v < *b) {
            best = Some((v, n));
        }
    }
    best
}

fn path_c(bound: &ValuationBound, pi: &BigRational, r_max: u32) -> Option<Vec<InfimumCertificate>> {
    (0..=r_max + 1)
        .map(|r| {
            let (v, n) = infimum(&bound.shifted(r, pi))?;
            Some(InfimumCertificate {
                r,
                infimum: format_rational(&v),
                attained_at: n.to_string(),
            })
        })
        .collect()
}

fn find_witness(shell_minima: &[Valuation], pi: &BigRational, r_max: u32) -> Option<Witness> {
    let cap = shell_minima.len().checked_sub(1)? as u32;
    if cap < 4 {
        return None;
    }
    for r in 0..=r_max {
        let mut running = Vec::with_capacity(shell_minima.len());
        let mut current = Valuation::Infinite;
        for (n, v) in shell_minima.iter().enumerate() {
            let shift = pi * BigRational::from_integer(BigInt::from(r as u64 * n as u64));
            current = current.min(v.shift(&-shift));
            running.push(current.clone());
        }
        let scales = [cap / 4, cap / 2, cap];
        let m: Vec<&Valuation> = scales.iter().map(|&k| &running[k as usize]).collect();
        if m[2] < m[1] && m[1] < m[0] {
            return Some(Witness {
                r,
                running_minima: scales.iter().zip(m).map(|(&k, v)| (k, v.clone())).collect(),
            });
        }
    }
    None
}

/// Classifies a family using its bound (if any) for the positive case and
/// exact queries of every `|α| ≤ index_cap` for the negative case.
///
/// `pi` is `v(π)`. A decreasing verdict requires a bound of degree at least
/// two with positive leading coefficient that no queried index violates,
/// and both certificate paths to succeed for every `r ≤ r_max`.
pub fn classify(
    fam: &SymbolFamily,
    pi: &BigRational,
    r_max: u32,
    index_cap: u32,
) -> ClassifyReport {
    let mut shell_minima = vec![Valuation::Infinite; index_cap as usize + 1];
    let mut violations = Vec::new();
    for alpha in MultiIndex::up_to_degree(fam.dim, index_cap) {
        let v = fam.valuation(&alpha);
        let n = alpha.degree();
        if let Some(b) = &fam.bound {
            let l = b.eval(&BigRational::from_integer(BigInt::from(n)));
            if v < Valuation::Finite(l) {
                violations.push(alpha.clone());
            }
        }
        let slot = &mut shell_minima[n as usize];
        *slot = slot.clone().min(v);
    }

    let (pa, pc) = match &fam.bound {
        Some(b) if violations.is_empty() => (path_a(b, pi, r_max), path_c(b, pi, r_max)),
        _ => (None, None),
    };
    let paths_agree = pa.is_some() == pc.is_some();
    let superlinear = fam
        .bound
        .as_ref()
        .is_some_and(|b| b.degree().is_some_and(|d| d >= 2) && b.leading().is_positive());
    let witness = find_witness(&shell_minima, pi, r_max);

    let verdict = if superlinear && pa.is_some() && pc.is_some() {
        Verdict::DecreasingWitnessed
    } else if witness.is_some() {
        Verdict::NonDecreasingWitnessed
    } else {
        Verdict::Inconclusive
    };
    ClassifyReport {
        verdict,
        path_a: pa,
        path_c: pc,
        paths_agree,
        witness,
        bound_violations: violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rational, Backend, Scalar};

    fn pi_power(e: u32) -> Poly {
        Poly::constant(1, Scalar::from_integer(Backend::PAdic(2), 2).pow(e))
    }

    #[test]
    fn square_exponents_decrease() {
        let fam = SymbolFamily::from_polys(1, |a| pi_power(a.degree() * a.degree())).with_bound(
            ValuationBound::new(vec![rational(0), rational(0), rational(1)]),
        );
        let r = classify(&fam, &rational(1), 4, 12);
        assert_eq!(r.verdict, Verdict::DecreasingWitnessed);
        assert!(r.paths_agree);
        assert_eq!(r.path_c.unwrap()[3].infimum, "-2");
    }

    #[test]
    fn constant_family_does_not_decrease() {
        let fam = SymbolFamily::from_polys(1, |_| pi_power(0));
        let r = classify(&fam, &rational(1), 4, 12);
        assert_eq!(r.verdict, Verdict::NonDecreasingWitnessed);
        assert_eq!(r.witness.unwrap().r, 1);
    }

    #[test]
    fn linear_exponents_fail_at_large_r() {
        let fam = SymbolFamily::from_polys(1, |a| pi_power(2 * a.degree()))
            .with_bound(ValuationBound::new(vec![rational(0), rational(2)]));
        let r = classify(&fam, &rational(1), 4, 12);
        assert_eq!(r.verdict, Verdict::NonDecreasingWitnessed);
        assert_eq!(r.witness.unwrap().r, 3);
    }

    #[test]
    fn wrong_bound_is_discarded() {
        let fam =
            SymbolFamily::from_polys(1, |_| pi_power(0)).with_bound(ValuationBound::new(vec![
                rational(0),
                rational(0),
                rational(1),
            ]));
        let r = classify(&fam, &rational(1), 4, 12);
        assert!(!r.bound_violations.is_empty());
        assert_eq!(r.verdict, Verdict::NonDecreasingWitnessed);
    }

    #[test]
    fn no_bound_and_no_witness_is_inconclusive() {
        let fam = SymbolFamily::from_valuations(1, |a| {
            Valuation::from_integer((a.degree() * a.degree()) as i64)
        });
        assert_eq!(
            classify(&fam, &rational(1), 4, 12).verdict,
            Verdict::Inconclusive
        );
    }

    #[test]
    fn cauchy_threshold_is_sound() {
        let b = ValuationBound::new(vec![rational(-7), rational(-5), rational(1)]);
        let n0 = b.threshold(&rational(10)).unwrap();
        let n0 = n0.to_u64().unwrap();
        for n in n0..n0 + 50 {
            assert!(b.eval(&rational(n as i64)) >= rational(10));
        }
    }
}

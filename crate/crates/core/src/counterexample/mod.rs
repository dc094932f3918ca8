//! The family `ξ_α = Π_{β≤α} (x − λ_β)^{α²}` built from coset
//! representatives of the maximal ideal, and checks of its two competing
//! properties: on every proper subdomain the operator
//! `Σ ξ_α π^α ∂^{(α)}` converges, yet its coefficients on the whole disc are
//! not rapidly decreasing.

mod claims;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::affinoid::Poly;
use crate::error::{Error, Result};
use crate::scalar::{Backend, Scalar, Valuation};

pub use claims::{verify_claim1_disc, verify_claim1_laurent, verify_claim2};

/// How the representatives `λ_0, λ_1, …` are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CosetScheme {
    /// `λ_i = i mod p` on the p-adic backend. The residue field is finite,
    /// so residues repeat.
    Cycling(u32),
    /// Every rational exactly once on the Hahn backend, whose residue field
    /// is `ℚ`: `0, q_1, −q_1, q_2, −q_2, …` with `q_k` the Calkin–Wilf
    /// sequence `1, 1/2, 2, 1/3, 3/2, …`.
    RationalEnumeration,
}

impl CosetScheme {
    pub fn for_backend(backend: Backend) -> Self {
        match backend {
            Backend::PAdic(p) => CosetScheme::Cycling(p),
            Backend::Hahn => CosetScheme::RationalEnumeration,
        }
    }

    pub fn backend(self) -> Backend {
        match self {
            CosetScheme::Cycling(p) => Backend::PAdic(p),
            CosetScheme::RationalEnumeration => Backend::Hahn,
        }
    }

    pub fn name(self) -> String {
        match self {
            CosetScheme::Cycling(p) => format!("cycling-mod-{}", p),
            CosetScheme::RationalEnumeration => "rational-enumeration".to_string(),
        }
    }

    /// `λ_i` as a rational number.
    pub fn lambda(self, i: u64) -> BigRational {
        match self {
            CosetScheme::Cycling(p) => BigRational::from_integer(BigInt::from(i % p as u64)),
            CosetScheme::RationalEnumeration => {
                if i == 0 {
                    return BigRational::zero();
                }
                let q = calkin_wilf(i.div_ceil(2));
                if i % 2 == 1 {
                    q
                } else {
                    -q
                }
            }
        }
    }

    /// The least `γ` with `v(a − λ_γ) > 0`, for `v(a) ≥ 0`.
    pub fn residue_index(self, a: &Scalar) -> Result<u64> {
        if a.backend() != self.backend() {
            return Err(Error::BackendMismatch {
                left: self.backend().to_string(),
                right: a.backend().to_string(),
            });
        }
        if a.valuation() < Valuation::zero() {
            return Err(Error::Precondition(format!(
                "{} lies outside the valuation ring",
                a
            )));
        }
        match self {
            CosetScheme::Cycling(_) => Ok(a.padic_residue().expect("integral p-adic scalar")),
            CosetScheme::RationalEnumeration => {
                let c = a.hahn_residue().expect("Hahn scalar");
                rational_index(&c).ok_or_else(|| {
                    Error::Precondition(format!(
                        "residue {} sits beyond the enumerable index range",
                        crate::scalar::format_rational(&c)
                    ))
                })
            }
        }
    }

    /// Whether `λ_β` lies in the residue class of `λ_γ`.
    pub fn same_class(self, gamma: u64, beta: u64) -> bool {
        match self {
            CosetScheme::Cycling(p) => gamma % p as u64 == beta % p as u64,
            CosetScheme::RationalEnumeration => gamma == beta,
        }
    }
}

/// The `k`-th term (`k ≥ 1`) of the Calkin–Wilf sequence, read off the
/// binary expansion of `k`: after the leading one, a `0` bit moves
/// `p/q ↦ p/(p+q)` and a `1` bit moves `p/q ↦ (p+q)/q`.
pub fn calkin_wilf(k: u64) -> BigRational {
    assert!(k >= 1);
    let (mut p, mut q) = (BigInt::one(), BigInt::one());
    let bits = 64 - k.leading_zeros();
    for i in (0..bits - 1).rev() {
        if (k >> i) & 1 == 0 {
            q = &p + &q;
        } else {
            p = &p + &q;
        }
    }
    BigRational::new(p, q)
}

/// The position of a positive rational in the Calkin–Wilf sequence, by
/// walking up the tree with run-length steps. `None` past `u64`.
pub fn calkin_wilf_index(x: &BigRational) -> Option<u64> {
    if !x.is_positive() {
        return None;
    }
    let (mut p, mut q) = (x.numer().clone(), x.denom().clone());
    // runs of (bit, length) from the bottom of the tree upwards
    let mut runs: Vec<(u64, u64)> = Vec::new();
    let mut total: u64 = 0;
    while !(p.is_one() && q.is_one()) {
        let (bit, steps) = if p < q {
            let steps = (&q - 1u32) / &p;
            q -= &p * &steps;
            (0, steps)
        } else {
            let steps = (&p - 1u32) / &q;
            p -= &q * &steps;
            (1, steps)
        };
        let steps = steps.to_u64()?;
        total = total.checked_add(steps)?;
        if total > 62 {
            return None;
        }
        runs.push((bit, steps));
    }
    let mut k: u64 = 1;
    for &(bit, steps) in runs.iter().rev() {
        for _ in 0..steps {
            k = (k << 1) | bit;
        }
    }
    Some(k)
}

/// Inverse of [`CosetScheme::lambda`] for the rational enumeration.
fn rational_index(c: &BigRational) -> Option<u64> {
    if c.is_zero() {
        return Some(0);
    }
    let k = calkin_wilf_index(&c.abs())?;
    let base = k.checked_mul(2)?;
    Some(if c.is_positive() { base - 1 } else { base })
}

/// `ξ_α` for a coset scheme.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct XiFamily {
    scheme: CosetScheme,
}

impl XiFamily {
    pub fn new(scheme: CosetScheme) -> Self {
        XiFamily { scheme }
    }

    pub fn scheme(&self) -> CosetScheme {
        self.scheme
    }

    pub fn backend(&self) -> Backend {
        self.scheme.backend()
    }

    pub fn lambda(&self, i: u64) -> Scalar {
        Scalar::from_rational(self.backend(), self.scheme.lambda(i))
    }

    /// `Π_{β≤α} (x − λ_β)`.
    pub fn base(&self, alpha: u32) -> Poly {
        self.base_substituted(
            alpha,
            &Scalar::zero(self.backend()),
            &Scalar::one(self.backend()),
        )
    }

    /// `Π_{β≤α} (c − λ_β + s·y)`.
    pub fn base_substituted(&self, alpha: u32, c: &Scalar, s: &Scalar) -> Poly {
        let b = self.backend();
        let y = Poly::var(b, 1, 0).scale(s);
        (0..=alpha as u64).fold(Poly::one(b, 1), |acc, beta| {
            let shift = c - &self.lambda(beta);
            acc.mul(&y.add(&Poly::constant(1, shift)))
        })
    }

    /// `ξ_α = Π_{β≤α} (x − λ_β)^{α²}`, of degree `(α+1)α²`.
    pub fn xi(&self, alpha: u32) -> Poly {
        self.base(alpha).pow(alpha * alpha)
    }

    /// `ξ_α(c + s·y)` as a polynomial in `y`.
    pub fn xi_substituted(&self, alpha: u32, c: &Scalar, s: &Scalar) -> Poly {
        self.base_substituted(alpha, c, s).pow(alpha * alpha)
    }
}

/// One line of a claim report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimRow {
    pub alpha: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<u32>,
    pub valuation_lhs: Valuation,
    pub valuation_rhs: Valuation,
    pub pass: bool,
    #[serde(flatten)]
    pub extra: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimReport {
    pub scheme: String,
    pub claim: String,
    pub params: BTreeMap<String, String>,
    pub rows: Vec<ClaimRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stabilization_index: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<crate::rapid::Verdict>,
    pub pass: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    #[test]
    fn calkin_wilf_prefix() {
        let expect = [
            (1, 1),
            (1, 2),
            (2, 1),
            (1, 3),
            (3, 2),
            (2, 3),
            (3, 1),
            (1, 4),
        ];
        for (k, &(p, q)) in expect.iter().enumerate() {
            let x = calkin_wilf(k as u64 + 1);
            assert_eq!(x, BigRational::new(p.into(), q.into()));
        }
    }

    #[test]
    fn calkin_wilf_recurrence_and_inverse() {
        // next = 1 / (2⌊x⌋ − x + 1)
        let mut x = BigRational::one();
        for k in 1..2000u64 {
            assert_eq!(calkin_wilf(k), x);
            assert_eq!(calkin_wilf_index(&x), Some(k));
            let f = BigRational::from_integer(x.floor().to_integer());
            x = BigRational::one() / (rational(2) * f - &x + BigRational::one());
        }
    }

    #[test]
    fn far_away_rationals_are_out_of_range() {
        let x = BigRational::new(1.into(), 100.into());
        assert_eq!(calkin_wilf_index(&x), None);
        assert_eq!(calkin_wilf_index(&rational(62)), Some((1u64 << 62) - 1));
    }

    #[test]
    fn enumeration_is_injective_with_inverse() {
        let s = CosetScheme::RationalEnumeration;
        let mut seen = std::collections::HashSet::new();
        for i in 0..500 {
            let l = s.lambda(i);
            assert!(seen.insert(l.clone()));
            assert_eq!(rational_index(&l), Some(i));
        }
    }

    #[test]
    fn small_members() {
        let h = XiFamily::new(CosetScheme::RationalEnumeration);
        assert_eq!(h.xi(0), Poly::one(Backend::Hahn, 1));
        let x = Poly::var(Backend::Hahn, 1, 0);
        assert_eq!(h.xi(1), x.mul(&x.sub(&Poly::one(Backend::Hahn, 1))));
        let p = XiFamily::new(CosetScheme::Cycling(3));
        let xi2 = p.xi(2);
        assert_eq!(xi2.total_degree(), Some(12));
        assert_eq!(xi2.gauss_norm(), Valuation::zero());
    }

    #[test]
    fn residue_indices() {
        let s = CosetScheme::Cycling(5);
        let a = Scalar::from_integer(Backend::PAdic(5), 13);
        assert_eq!(s.residue_index(&a).unwrap(), 3);
        let h = CosetScheme::RationalEnumeration;
        let half = Scalar::from_rational(Backend::Hahn, BigRational::new(1.into(), 2.into()));
        assert_eq!(h.residue_index(&half).unwrap(), 3);
        assert_eq!(h.lambda(3), BigRational::new(1.into(), 2.into()));
    }
}

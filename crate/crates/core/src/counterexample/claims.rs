use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{ClaimReport, ClaimRow, XiFamily};
use crate::affinoid::{
    annulus_sup, laurent_basis_derivative, sup_norm, Domain, Hole, HoledDisc, MultiIndex, Poly,
};
use crate::error::{Error, Result};
use crate::operator::{DiffOperator, Normalization};
use crate::rapid::{classify, SymbolFamily, ValuationBound, Verdict};
use crate::scalar::{factorial_valuation, format_rational, Scalar, Uniformizer, Valuation};

/// Largest index enumerated when computing the Laurent constant.
const STABILIZATION_LIMIT: u64 = 100_000;

fn q(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn params(fam: &XiFamily, pi: &Uniformizer) -> BTreeMap<String, String> {
    let mut p = BTreeMap::new();
    p.insert("backend".into(), fam.backend().to_string());
    p.insert("pi".into(), pi.value().to_string());
    p.insert("pi_valuation".into(), format_rational(pi.valuation()));
    p
}

/// On the disc `Z` of center `a` and radius valuation `r > 0`: checks
/// `v(ξ_α|_Z) ≥ m_α α² min(v(ε), r)`, where `ε = a − λ_γ` for the residue
/// index `γ` of `a` and `m_α` counts the `β ≤ α` with `λ_β ≡ a`; then
/// classifies `α ↦ ξ_α|_Z π^α` with the bound
/// `L(n) = μn² + (v(π) − μγ)n`, `μ = min(v(ε), r)`.
pub fn verify_claim1_disc(
    fam: &XiFamily,
    a: &Scalar,
    radius: &BigRational,
    alpha_max: u32,
    pi: &Uniformizer,
) -> Result<ClaimReport> {
    if !radius.is_positive() {
        return Err(Error::Precondition(
            "the subdisc radius valuation must be positive".into(),
        ));
    }
    let scheme = fam.scheme();
    let gamma = scheme.residue_index(a)?;
    let eps = a - &fam.lambda(gamma);
    let mu = match eps.valuation() {
        Valuation::Finite(v) => v.min(radius.clone()),
        Valuation::Infinite => radius.clone(),
    };
    let s = fam.backend().element_of_valuation(radius)?;

    let mut rows = Vec::new();
    let mut restricted = Vec::new();
    for alpha in 0..=alpha_max {
        let g = fam.xi_substituted(alpha, a, &s);
        let lhs = g.gauss_norm();
        let matching = (0..=alpha as u64)
            .filter(|&b| scheme.same_class(gamma, b))
            .count() as u64;
        let rhs = Valuation::Finite(q(matching * (alpha as u64).pow(2)) * &mu);
        restricted.push(lhs.shift(&(pi.valuation() * q(alpha as u64))));
        let mut extra = BTreeMap::new();
        extra.insert("matching_factors".into(), matching.to_string());
        rows.push(ClaimRow {
            alpha,
            beta: None,
            delta: None,
            pass: lhs >= rhs,
            valuation_lhs: lhs,
            valuation_rhs: rhs,
            extra,
        });
    }

    let bound = ValuationBound::new(vec![
        BigRational::zero(),
        pi.valuation() - &mu * q(gamma),
        mu.clone(),
    ]);
    let table = Arc::new(restricted);
    let family = SymbolFamily::from_valuations(1, move |i: &MultiIndex| {
        table
            .get(i.degree() as usize)
            .cloned()
            .expect("queries stay below the tested range")
    })
    .with_bound(bound);
    let report = classify(&family, pi.valuation(), 4, alpha_max);

    let mut p = params(fam, pi);
    p.insert("center".into(), a.to_string());
    p.insert("radius_valuation".into(), format_rational(radius));
    p.insert("gamma".into(), gamma.to_string());
    p.insert("epsilon_valuation".into(), eps.valuation().to_string());
    p.insert("mu".into(), format_rational(&mu));
    p.insert("paths_agree".into(), report.paths_agree.to_string());
    let pass = rows.iter().all(|r| r.pass) && report.verdict == Verdict::DecreasingWitnessed;
    Ok(ClaimReport {
        scheme: scheme.name(),
        claim: "claim1-disc".into(),
        params: p,
        rows,
        stabilization_index: None,
        verdict: Some(report.verdict),
        pass,
    })
}

/// The closed-form valuation bound on `z_β^{-1} ξ_α ∂^{(α)} z_β` over the
/// unit disc with the hole `(a, τ)` removed: `α·min(α v(ρ) − v(τ), 0)` once
/// `α ≥ γ` (with `ρ = a − λ_γ`, and `0` when `ρ = 0`), and `−α v(τ)` before.
fn hole_bound(alpha: u64, gamma: u64, rho: &Valuation, tau: &BigRational) -> BigRational {
    if alpha < gamma {
        return -(q(alpha) * tau);
    }
    match rho {
        Valuation::Infinite => BigRational::zero(),
        Valuation::Finite(r) => {
            let inner = (q(alpha) * r - tau).min(BigRational::zero());
            q(alpha) * inner
        }
    }
}

/// Checks the operator `ξ = Σ ξ_α π^α ∂^{(α)}` on the unit disc with one
/// hole removed, against the orthogonal basis `x^δ`, `z_β = (τ/(x−a))^{β+1}`:
///
/// * `monomial` rows: `v(ξ_α ∂^{(α)} x^δ) ≥ 0`;
/// * `hole` rows: the exact valuation of `z_β^{-1} ξ_α ∂^{(α)} z_β` is at
///   least the closed-form bound, and so is the image `ξ_α ∂^{(α)} z_β`
///   itself, which is also at least the constant `C`;
/// * `tail` rows: `α v(π) + min(0, bound(α)) ≥ α v(π) + C`, which tends to
///   infinity.
///
/// `C = min(0, min_{α < α_s} bound(α))` where `α_s` is the stabilization
/// index past which every bound vanishes.
pub fn verify_claim1_laurent(
    fam: &XiFamily,
    hole: &Hole,
    alpha_max: u32,
    beta_max: u32,
    delta_max: u32,
    pi: &Uniformizer,
) -> Result<ClaimReport> {
    let b = fam.backend();
    let domain = Domain::Holed(HoledDisc::new(b, vec![hole.clone()])?);
    let scheme = fam.scheme();
    let tau = &hole.radius;
    let gamma = scheme.residue_index(&hole.center)?;
    let rho = (&hole.center - &fam.lambda(gamma)).valuation();

    let stabilization = match &rho {
        Valuation::Infinite => gamma,
        Valuation::Finite(r) => gamma.max(
            (tau / r)
                .ceil()
                .to_integer()
                .to_u64()
                .ok_or_else(|| Error::Precondition("stabilization index overflows".into()))?,
        ),
    };
    if stabilization > STABILIZATION_LIMIT {
        return Err(Error::Precondition(format!(
            "stabilization index {} exceeds {}",
            stabilization, STABILIZATION_LIMIT
        )));
    }
    let c = (0..stabilization)
        .map(|a| hole_bound(a, gamma, &rho, tau))
        .fold(BigRational::zero(), |acc, v| acc.min(v));
    let c_val = Valuation::Finite(c.clone());

    let mut rows = Vec::new();
    for alpha in 0..=alpha_max {
        let xi = fam.xi(alpha);
        let op = DiffOperator::term(xi, MultiIndex::new(vec![alpha]), Normalization::Divided);
        for delta in 0..=delta_max {
            let x_delta = Poly::monomial(Scalar::one(b), MultiIndex::new(vec![delta]));
            let lhs = sup_norm(&op.apply(&x_delta)?, &domain)?;
            let mut extra = BTreeMap::new();
            extra.insert("kind".into(), "monomial".into());
            rows.push(ClaimRow {
                alpha,
                beta: None,
                delta: Some(delta),
                pass: lhs >= Valuation::zero(),
                valuation_lhs: lhs,
                valuation_rhs: Valuation::zero(),
                extra,
            });
        }
    }

    for alpha in 0..=alpha_max {
        // ξ_α(a + y) as a polynomial in y
        let shifted = fam.xi_substituted(alpha, &hole.center, &Scalar::one(b));
        let laurent = |pole: i64| -> BTreeMap<i64, Scalar> {
            shifted
                .terms()
                .iter()
                .map(|(k, v)| (k.entries()[0] as i64 - pole, v.clone()))
                .collect()
        };
        let bound = hole_bound(alpha as u64, gamma, &rho, tau);
        for beta in 0..=beta_max {
            let (factor, pole) = laurent_basis_derivative(alpha, beta);
            let fv = Scalar::from_bigint(b, factor).valuation();
            let lhs = &fv + &annulus_sup(&laurent(pole as i64), tau);
            let image = (&fv + &annulus_sup(&laurent(alpha as i64 + beta as i64 + 1), tau))
                .shift(&(q(beta as u64 + 1) * tau));
            let rhs = Valuation::Finite(bound.clone());
            let mut extra = BTreeMap::new();
            extra.insert("kind".into(), "hole".into());
            extra.insert("image_valuation".into(), image.to_string());
            rows.push(ClaimRow {
                alpha,
                beta: Some(beta),
                delta: None,
                pass: lhs >= rhs && image >= lhs && image >= c_val,
                valuation_lhs: lhs,
                valuation_rhs: rhs,
                extra,
            });
        }
    }

    for alpha in 0..=alpha_max {
        let step = pi.valuation() * q(alpha as u64);
        let bound = hole_bound(alpha as u64, gamma, &rho, tau).min(BigRational::zero());
        let lhs = Valuation::Finite(&step + bound);
        let rhs = Valuation::Finite(&step + &c);
        let mut extra = BTreeMap::new();
        extra.insert("kind".into(), "tail".into());
        rows.push(ClaimRow {
            alpha,
            beta: None,
            delta: None,
            pass: lhs >= rhs,
            valuation_lhs: lhs,
            valuation_rhs: rhs,
            extra,
        });
    }

    let mut p = params(fam, pi);
    p.insert("hole_center".into(), hole.center.to_string());
    p.insert("hole_radius_valuation".into(), format_rational(tau));
    p.insert("gamma".into(), gamma.to_string());
    p.insert("rho_valuation".into(), rho.to_string());
    p.insert("C_valuation".into(), format_rational(&c));
    Ok(ClaimReport {
        scheme: scheme.name(),
        claim: "claim1-laurent".into(),
        params: p,
        pass: rows.iter().all(|r| r.pass),
        rows,
        stabilization_index: Some(stabilization),
        verdict: None,
    })
}

/// Checks `v(ξ_α π^α / (α! π^{2α})) ≤ −α v(π)` and `v(ξ_α) = 0` for every
/// `α ≤ alpha_max`, then classifies the family `α ↦ ξ_α π^α / (α! π^{2α})`
/// from its exact valuations.
pub fn verify_claim2(fam: &XiFamily, alpha_max: u32, pi: &Uniformizer) -> Result<ClaimReport> {
    let b = fam.backend();
    let pv = pi.valuation();
    let mut rows = Vec::new();
    let mut values = Vec::new();
    for alpha in 0..=alpha_max {
        let xi = fam.xi(alpha);
        let gauss = xi.gauss_norm();
        let a = q(alpha as u64);
        let fact = factorial_valuation(b, alpha as u64);
        let lhs = gauss
            .shift(&(pv * &a))
            .checked_sub(&fact)
            .expect("finite factorial valuation")
            .shift(&-(pv * &a * q(2)));
        let rhs = Valuation::Finite(-(pv * &a));
        values.push(lhs.clone());
        let mut extra = BTreeMap::new();
        extra.insert("gauss_valuation".into(), gauss.to_string());
        extra.insert("factorial_valuation".into(), fact.to_string());
        extra.insert("degree".into(), xi.total_degree().unwrap_or(0).to_string());
        rows.push(ClaimRow {
            alpha,
            beta: None,
            delta: None,
            pass: lhs <= rhs && gauss == Valuation::zero(),
            valuation_lhs: lhs,
            valuation_rhs: rhs,
            extra,
        });
    }
    let table = Arc::new(values);
    let family = SymbolFamily::from_valuations(1, move |i: &MultiIndex| {
        table
            .get(i.degree() as usize)
            .cloned()
            .expect("queries stay below the tested range")
    });
    let report = classify(&family, pv, 4, alpha_max);
    let pass = rows.iter().all(|r| r.pass) && report.verdict == Verdict::NonDecreasingWitnessed;
    let mut p = params(fam, pi);
    p.insert("alpha_max".into(), alpha_max.to_string());
    if let Some(w) = &report.witness {
        p.insert("witness_r".into(), w.r.to_string());
    }
    Ok(ClaimReport {
        scheme: fam.scheme().name(),
        claim: "claim2".into(),
        params: p,
        rows,
        stabilization_index: None,
        verdict: Some(report.verdict),
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counterexample::CosetScheme;
    use crate::scalar::{rational, Backend};

    #[test]
    fn hahn_disc_at_origin() {
        let fam = XiFamily::new(CosetScheme::RationalEnumeration);
        let pi = Uniformizer::standard(Backend::Hahn);
        let r =
            verify_claim1_disc(&fam, &Scalar::zero(Backend::Hahn), &rational(1), 3, &pi).unwrap();
        assert!(r.pass, "{:?}", r);
        assert_eq!(r.rows[0].valuation_lhs, Valuation::zero());
        assert_eq!(r.rows[1].valuation_lhs, Valuation::from_integer(1));
        assert_eq!(r.rows[1].valuation_rhs, Valuation::from_integer(1));
    }

    #[test]
    fn cycling_disc_counts_matching_factors() {
        let fam = XiFamily::new(CosetScheme::Cycling(2));
        let pi = Uniformizer::standard(Backend::PAdic(2));
        let r = verify_claim1_disc(&fam, &Scalar::zero(Backend::PAdic(2)), &rational(1), 4, &pi)
            .unwrap();
        assert!(r.pass);
        assert_eq!(r.rows[4].valuation_rhs, Valuation::from_integer(48));
        assert_eq!(r.rows[4].extra["matching_factors"], "3");
    }

    #[test]
    fn claim2_examples() {
        let pi = Uniformizer::standard(Backend::PAdic(2));
        let r = verify_claim2(&XiFamily::new(CosetScheme::Cycling(2)), 6, &pi).unwrap();
        assert!(r.pass);
        assert_eq!(r.rows[3].valuation_lhs, Valuation::from_integer(-4));
        assert_eq!(r.rows[0].valuation_lhs, Valuation::zero());

        let h = Uniformizer::standard(Backend::Hahn);
        let r = verify_claim2(&XiFamily::new(CosetScheme::RationalEnumeration), 6, &h).unwrap();
        assert!(r.pass);
        assert_eq!(r.rows[5].valuation_lhs, Valuation::from_integer(-5));
        assert_eq!(r.verdict, Some(Verdict::NonDecreasingWitnessed));
    }

    #[test]
    fn laurent_small_hole() {
        let b = Backend::PAdic(2);
        let hole = Hole {
            center: Scalar::from_integer(b, 1),
            radius: rational(2),
        };
        let r = verify_claim1_laurent(
            &XiFamily::new(CosetScheme::Cycling(2)),
            &hole,
            4,
            3,
            6,
            &Uniformizer::standard(b),
        )
        .unwrap();
        assert!(r.pass);
        assert_eq!(r.stabilization_index, Some(1));
    }

    #[test]
    fn laurent_nontrivial_rho() {
        // a = 5 ≡ λ_1 = 1 with ρ = 4, v(ρ) = 2; τ of valuation 5
        let b = Backend::PAdic(2);
        let hole = Hole {
            center: Scalar::from_integer(b, 5),
            radius: rational(5),
        };
        let r = verify_claim1_laurent(
            &XiFamily::new(CosetScheme::Cycling(2)),
            &hole,
            5,
            2,
            6,
            &Uniformizer::standard(b),
        )
        .unwrap();
        assert!(r.pass);
        assert_eq!(r.stabilization_index, Some(3));
        assert_eq!(r.params["C_valuation"], "-3");
    }
}

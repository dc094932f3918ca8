//! Powers of univariate polynomials by the J.C.P. Miller recurrence.
//!
//! For `h(x) = Σ_{j≤m} h_j x^j` with `h_0 ≠ 0`, the coefficients of
//! `h^n = Σ c_k x^k` satisfy
//! `k h_0 c_k = Σ_{j=1}^{min(m,k)} ((n+1)j − k) h_j c_{k−j}`.
//! Over the integers every division is exact, so after clearing
//! denominators the whole expansion runs on `BigInt` without gcds. This is
//! what makes the degree-27,900 members of the counterexample family cheap.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::Poly;
use crate::scalar::{strip_prime, Backend, HahnSeries, Scalar};

/// Dense coefficients of `f^n`, or `None` when the coefficients of `f` do
/// not have a shape the recurrence handles.
pub(crate) fn pow_univariate(f: &Poly, n: u32) -> Option<Vec<Scalar>> {
    let coeffs = f.univariate_coeffs()?;
    match f.backend() {
        Backend::PAdic(_) => {
            let q: Vec<BigRational> = coeffs
                .iter()
                .map(|c| c.as_rational())
                .collect::<Option<_>>()?;
            let b = f.backend();
            Some(
                rational_pow(&q, n)
                    .into_iter()
                    .map(|c| Scalar::from_rational(b, c))
                    .collect(),
            )
        }
        Backend::Hahn => hahn_weighted_pow(&coeffs, n),
    }
}

/// `P(y) = Σ c_k t^{e + r k} y^k = t^e h(t^r y)`, so
/// `P^n = t^{ne} Σ_j H_j t^{rj} y^j` with `H = h^n`.
fn hahn_weighted_pow(coeffs: &[Scalar], n: u32) -> Option<Vec<Scalar>> {
    let mut support: Vec<(usize, BigRational, BigRational)> = Vec::new();
    for (k, c) in coeffs.iter().enumerate() {
        let Scalar::Hahn(s) = c else { return None };
        if s.is_zero() {
            continue;
        }
        let (e, a) = s.as_monomial()?;
        support.push((k, e.clone(), a.clone()));
    }
    if support.len() < 2 {
        return None;
    }
    let (k0, e0, _) = &support[0];
    let (k1, e1, _) = &support[1];
    let r = (e1 - e0) / BigRational::from_integer(BigInt::from(k1 - k0));
    let e = e0 - &r * BigRational::from_integer(BigInt::from(*k0));
    for (k, ek, _) in &support {
        if *ek != &e + &r * BigRational::from_integer(BigInt::from(*k)) {
            return None;
        }
    }
    let mut h = vec![BigRational::zero(); coeffs.len()];
    for (k, _, a) in support {
        h[k] = a;
    }
    let base = &e * BigRational::from_integer(BigInt::from(n));
    Some(
        rational_pow(&h, n)
            .into_iter()
            .enumerate()
            .map(|(j, c)| {
                let exp = &base + &r * BigRational::from_integer(BigInt::from(j));
                Scalar::Hahn(HahnSeries::monomial(exp, c))
            })
            .collect(),
    )
}

/// Dense coefficients of `(Σ c_k x^k)^n` over `ℚ`.
pub(crate) fn rational_pow(c: &[BigRational], n: u32) -> Vec<BigRational> {
    if n == 0 {
        return vec![BigRational::one()];
    }
    let Some(s) = c.iter().position(|x| !x.is_zero()) else {
        return vec![BigRational::zero()];
    };
    let last = c.iter().rposition(|x| !x.is_zero()).unwrap();
    let h = &c[s..=last];

    let l = h.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = h.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let powered = integer_pow(&ints, n);

    let mut out = vec![BigRational::zero(); s * n as usize];
    out.extend(divide_by_power(powered, &l, n));
    out
}

fn integer_pow(h: &[BigInt], n: u32) -> Vec<BigInt> {
    let m = h.len() - 1;
    let deg = m * n as usize;
    let mut c: Vec<BigInt> = Vec::with_capacity(deg + 1);
    c.push(num_traits::pow(h[0].clone(), n as usize));
    let n1 = n as i128 + 1;
    for k in 1..=deg {
        let mut acc = BigInt::zero();
        for j in 1..=m.min(k) {
            let w = n1 * j as i128 - k as i128;
            if w == 0 || h[j].is_zero() {
                continue;
            }
            acc += &c[k - j] * (&h[j] * BigInt::from(w));
        }
        let div = &h[0] * BigInt::from(k);
        let (q, r) = acc.div_rem(&div);
        debug_assert!(r.is_zero());
        c.push(q);
    }
    c
}

/// Reduces each `F_k / L^n`. When `L` factors over small primes the common
/// powers are stripped prime by prime, which is far cheaper than a gcd on
/// numbers of this size; otherwise the generic reduction is used.
fn divide_by_power(nums: Vec<BigInt>, l: &BigInt, n: u32) -> Vec<BigRational> {
    if l.is_one() {
        return nums.into_iter().map(BigRational::from_integer).collect();
    }
    let Some(primes) = small_factorization(l) else {
        let den = num_traits::pow(l.clone(), n as usize);
        return nums
            .into_iter()
            .map(|x| BigRational::new(x, den.clone()))
            .collect();
    };
    let mut cache: HashMap<Vec<u64>, BigInt> = HashMap::new();
    nums.into_iter()
        .map(|x| {
            if x.is_zero() {
                return BigRational::zero();
            }
            let mut num = x;
            let mut remaining = Vec::with_capacity(primes.len());
            for &(q, e) in &primes {
                let limit = e * n as u64;
                let (rest, k) = strip_prime(&num, q, limit);
                num = rest;
                remaining.push(limit - k);
            }
            let den = cache
                .entry(remaining.clone())
                .or_insert_with(|| {
                    primes
                        .iter()
                        .zip(&remaining)
                        .fold(BigInt::one(), |acc, (&(q, _), &k)| {
                            acc * num_traits::pow(BigInt::from(q), k as usize)
                        })
                })
                .clone();
            BigRational::new_raw(num, den)
        })
        .collect()
}

/// `[(q, v_q(l))]` when `l` has no prime factor above `2^20`.
fn small_factorization(l: &BigInt) -> Option<Vec<(u64, u64)>> {
    let mut rest = l.abs();
    let mut out = Vec::new();
    let mut q: u64 = 2;
    while rest > BigInt::one() {
        if q > 1 << 20 {
            return None;
        }
        if let Some(r) = rest.to_u64() {
            if q * q > r {
                if r > 1 << 20 {
                    return None;
                }
                out.push((r, 1));
                break;
            }
        }
        let (next, k) = strip_prime(&rest, q, u64::MAX);
        if k > 0 {
            out.push((q, k));
            rest = next;
        }
        q += if q == 2 { 1 } else { 2 };
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn naive(c: &[BigRational], n: u32) -> Vec<BigRational> {
        let mut out = vec![BigRational::one()];
        for _ in 0..n {
            let mut next = vec![BigRational::zero(); out.len() + c.len() - 1];
            for (i, a) in out.iter().enumerate() {
                for (j, b) in c.iter().enumerate() {
                    next[i + j] += a * b;
                }
            }
            out = next;
        }
        out
    }

    #[test]
    fn matches_naive_expansion() {
        let cases = vec![
            vec![q(0, 1), q(-1, 2), q(3, 1), q(2, 3)],
            vec![q(5, 7), q(1, 1)],
            vec![q(-1, 6), q(0, 1), q(1, 10)],
            vec![q(0, 1), q(0, 1), q(4, 9)],
        ];
        for c in cases {
            for n in [1, 2, 5, 9] {
                let mut expect = naive(&c, n);
                let got = rational_pow(&c, n);
                while expect.len() > got.len() && expect.last().unwrap().is_zero() {
                    expect.pop();
                }
                assert_eq!(got, expect, "{:?}^{}", c, n);
            }
        }
    }

    #[test]
    fn large_prime_denominator_uses_generic_reduction() {
        let p = BigInt::from(1_048_583u64);
        let c = vec![BigRational::new(BigInt::one(), p.clone()), q(1, 1)];
        assert_eq!(rational_pow(&c, 3), naive(&c, 3));
    }

    #[test]
    fn factorization() {
        assert_eq!(
            small_factorization(&BigInt::from(360)),
            Some(vec![(2, 3), (3, 2), (5, 1)])
        );
        assert_eq!(
            small_factorization(&BigInt::from(1_048_583u64 * 1_048_589u64)),
            None
        );
    }
}

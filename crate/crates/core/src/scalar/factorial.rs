//! Valuations of factorials and exact integer combinatorics.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::valuation::Valuation;
use super::Backend;

/// `v_p(m!)` by Legendre's formula `Σ_k ⌊m / p^k⌋`.
pub fn legendre(m: u64, p: u64) -> u64 {
    let mut total = 0;
    let mut q = m;
    while q > 0 {
        q /= p;
        total += q;
    }
    total
}

/// `v(m!)`: Legendre's formula on a p-adic backend, zero in residue
/// characteristic zero.
pub fn factorial_valuation(backend: Backend, m: u64) -> Valuation {
    match backend {
        Backend::PAdic(p) => {
            let v = legendre(m, p as u64);
            debug_assert!(v * (p as u64 - 1) <= m);
            Valuation::from_rational(BigRational::from_integer(BigInt::from(v)))
        }
        Backend::Hahn => Valuation::zero(),
    }
}

/// `v(α_1! ··· α_d!)`.
pub fn multi_factorial_valuation(backend: Backend, alpha: &[u32]) -> Valuation {
    alpha.iter().fold(Valuation::zero(), |acc, &a| {
        acc + factorial_valuation(backend, a as u64)
    })
}

/// The valuation exponent of `ϖ`: `1/(p−1)` for p-adic scalars and `0` for
/// Hahn series, so that `v(α!) ≤ |α| · varpi_exponent`.
pub fn varpi_exponent(backend: Backend) -> BigRational {
    match backend {
        Backend::PAdic(p) => BigRational::new(BigInt::one(), BigInt::from(p - 1)),
        Backend::Hahn => BigRational::zero(),
    }
}

pub fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `n! / (n−k)!`, zero when `k > n`.
pub fn falling_factorial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    ((n - k + 1)..=n).fold(BigInt::one(), |acc, j| acc * j)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_small_cases() {
        assert_eq!(legendre(4, 2), 3);
        assert_eq!(legendre(4, 5), 0);
        assert_eq!(legendre(25, 5), 6);
    }

    #[test]
    fn hahn_factorials_are_units() {
        assert_eq!(factorial_valuation(Backend::Hahn, 100), Valuation::zero());
    }

    #[test]
    fn varpi() {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        assert_eq!(varpi_exponent(Backend::PAdic(3)), half);
        assert_eq!(varpi_exponent(Backend::PAdic(2)), BigRational::one());
        assert!(varpi_exponent(Backend::Hahn).is_zero());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(falling_factorial(5, 2), BigInt::from(20));
        assert_eq!(factorial(0), BigInt::one());
    }
}

//! Seeded generators for random scalars, polynomials and operators. The
//! same seed always yields the same inputs.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::affinoid::{MultiIndex, Poly};
use crate::operator::{DiffOperator, Normalization};
use crate::scalar::{Backend, HahnSeries, Scalar};

/// Size limits for generated objects.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FuzzShape {
    pub dim: usize,
    pub order: u32,
    pub coeff_degree: u32,
    pub max_terms: usize,
}

impl Default for FuzzShape {
    fn default() -> Self {
        FuzzShape {
            dim: 2,
            order: 4,
            coeff_degree: 3,
            max_terms: 4,
        }
    }
}

pub struct Fuzzer {
    backend: Backend,
    rng: ChaCha8Rng,
}

impl Fuzzer {
    pub fn new(backend: Backend, seed: u64) -> Self {
        Fuzzer {
            backend,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn range(&mut self, lo: u32, hi: u32) -> u32 {
        self.rng.gen_range(lo..=hi)
    }

    fn small_rational(&mut self, integral: bool) -> BigRational {
        let n: i64 = self.rng.gen_range(-30..=30);
        let d: i64 = if integral {
            let p = self.backend.prime().map_or(1, i64::from);
            let d = *[1, 1, 1, 7, 11, 13]
                .choose(&mut self.rng)
                .expect("non-empty");
            if p > 1 && d % p == 0 {
                1
            } else {
                d
            }
        } else {
            self.rng.gen_range(1..=12)
        };
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    /// A random scalar; with `integral` it has non-negative valuation.
    pub fn scalar(&mut self, integral: bool) -> Scalar {
        match self.backend {
            Backend::PAdic(_) => Scalar::from_rational(self.backend, self.small_rational(integral)),
            Backend::Hahn => {
                let n = self.rng.gen_range(1..=3);
                let terms = (0..n).map(|_| {
                    let lo = if integral { 0 } else { -4 };
                    let e = BigRational::new(self.rng.gen_range(lo..=6).into(), 2.into());
                    (e, self.small_rational(false))
                });
                let terms: Vec<_> = terms.collect();
                Scalar::Hahn(HahnSeries::from_terms(terms))
            }
        }
    }

    pub fn multi_index(&mut self, dim: usize, max_degree: u32) -> MultiIndex {
        let all = MultiIndex::up_to_degree(dim, max_degree);
        all.choose(&mut self.rng).expect("non-empty").clone()
    }

    pub fn poly(&mut self, dim: usize, max_degree: u32, max_terms: usize) -> Poly {
        let n = self.rng.gen_range(0..=max_terms);
        let terms: Vec<_> = (0..n)
            .map(|_| (self.multi_index(dim, max_degree), self.scalar(false)))
            .collect();
        Poly::from_terms(self.backend, dim, terms).expect("generated terms are consistent")
    }

    pub fn operator(&mut self, shape: FuzzShape) -> DiffOperator {
        let normalization = if self.rng.gen_bool(0.5) {
            Normalization::Plain
        } else {
            Normalization::Divided
        };
        let n = self.rng.gen_range(1..=shape.max_terms.max(1));
        let coeffs: Vec<_> = (0..n)
            .map(|_| {
                let alpha = self.multi_index(shape.dim, shape.order);
                (
                    alpha,
                    self.poly(shape.dim, shape.coeff_degree, shape.max_terms),
                )
            })
            .collect();
        DiffOperator::new(self.backend, shape.dim, normalization, None, coeffs)
            .expect("generated terms are consistent")
    }

    /// A center with integral coordinates.
    pub fn center(&mut self, dim: usize) -> Vec<Scalar> {
        (0..dim).map(|_| self.scalar(true)).collect()
    }
}

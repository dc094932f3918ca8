use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::scalar::{binomial, factorial};

/// A multi-index `α = (α_1, …, α_d)`. The derived order is lexicographic and
/// only serves as a canonical storage order; use [`MultiIndex::le`] for the
/// componentwise partial order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zeros(d: usize) -> Self {
        MultiIndex(vec![0; d])
    }

    /// The index `e_i` with a single one in position `i`.
    pub fn unit(d: usize, i: usize) -> Self {
        let mut v = vec![0; d];
        v[i] = 1;
        MultiIndex(v)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `|α| = Σ α_i`.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    /// Componentwise `self ≤ other`.
    pub fn le(&self, other: &MultiIndex) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self − other`, or `None` unless `other ≤ self`.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        if !other.le(self) {
            return None;
        }
        Some(MultiIndex(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    /// `α! = Π α_i!`.
    pub fn factorial(&self) -> BigInt {
        self.0
            .iter()
            .fold(BigInt::one(), |acc, &a| acc * factorial(a as u64))
    }

    /// `binom(α, β) = Π binom(α_i, β_i)`.
    pub fn binomial(&self, beta: &MultiIndex) -> BigInt {
        self.0
            .iter()
            .zip(&beta.0)
            .fold(BigInt::one(), |acc, (&a, &b)| {
                acc * binomial(a as u64, b as u64)
            })
    }

    /// `(−1)^{|α|}` as `±1`.
    pub fn sign(&self) -> i64 {
        if self.degree().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// All `β` with `0 ≤ β ≤ self`, in lexicographic order.
    pub fn lower_box(&self) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex(Vec::with_capacity(self.0.len()))];
        for &a in &self.0 {
            let mut next = Vec::with_capacity(out.len() * (a as usize + 1));
            for prefix in &out {
                for b in 0..=a {
                    let mut v = prefix.0.clone();
                    v.push(b);
                    next.push(MultiIndex(v));
                }
            }
            out = next;
        }
        out
    }

    /// All `β` with `lower ≤ β ≤ self`.
    pub fn interval(lower: &MultiIndex, upper: &MultiIndex) -> Vec<MultiIndex> {
        match upper.checked_sub(lower) {
            Some(width) => width.lower_box().iter().map(|b| b.add(lower)).collect(),
            None => Vec::new(),
        }
    }

    /// All indices in dimension `d` with `|α| ≤ n`, in lexicographic order.
    pub fn up_to_degree(d: usize, n: u32) -> Vec<MultiIndex> {
        fn rec(d: usize, budget: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if prefix.len() == d {
                out.push(MultiIndex(prefix.clone()));
                return;
            }
            for a in 0..=budget {
                prefix.push(a);
                rec(d, budget - a, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(d, n, &mut Vec::with_capacity(d), &mut out);
        out
    }

    /// All indices in dimension `d` with `|α| = n`.
    pub fn of_degree(d: usize, n: u32) -> Vec<MultiIndex> {
        Self::up_to_degree(d, n)
            .into_iter()
            .filter(|a| a.degree() == n)
            .collect()
    }

    /// Concatenation `(α, β)`.
    pub fn concat(&self, other: &MultiIndex) -> MultiIndex {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        MultiIndex(v)
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", a)?;
        }
        f.write_str(")")
    }
}

impl serde::Serialize for MultiIndex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

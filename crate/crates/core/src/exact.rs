//! Exact integer and rational arithmetic plus the counting primitives the
//! rest of the crate is built from.
//!
//! [`Nat`] and [`Rat`] are thin aliases over `num-bigint` / `num-rational`.
//! `BigRational` reduces on every construction, so `Rat` equality is value
//! equality.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};

/// Arbitrary-precision nonnegative integer.
pub type Nat = BigUint;

/// Arbitrary-precision rational, always in lowest terms.
pub type Rat = BigRational;

pub fn nat(v: u64) -> Nat {
    Nat::from(v)
}

/// Lifts a natural number into the rationals.
pub fn rat_from_nat(v: &Nat) -> Rat {
    Rat::from_integer(BigInt::from(v.clone()))
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Returns `Some(n)` when `r` is a nonnegative integer.
pub fn rat_to_nat(r: &Rat) -> Option<Nat> {
    if !r.is_integer() {
        return None;
    }
    r.to_integer().to_biguint()
}

pub fn factorial(n: usize) -> Nat {
    (2..=n as u64).fold(Nat::one(), |acc, i| acc * i)
}

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> Nat {
    if k > n {
        return Nat::default();
    }
    let k = k.min(n - k);
    // Each partial product is itself a binomial coefficient, so the division is exact.
    let mut acc = Nat::one();
    for i in 0..k as u64 {
        acc = acc * (n as u64 - i) / (i + 1);
    }
    acc
}

/// `n! / (i_1! ... i_k!)`. Fails when the parts do not sum to `n`.
pub fn multinomial(n: usize, parts: &[usize]) -> Result<Nat> {
    let sum: usize = parts.iter().sum();
    if sum != n {
        return Err(Error::PartsSumMismatch { n, sum });
    }
    // Product of binomials C(i_1 + ... + i_j, i_j) avoids the big division.
    let mut acc = Nat::one();
    let mut running = 0;
    for &p in parts {
        running += p;
        acc *= binomial(running, p);
    }
    Ok(acc)
}

/// Ordered `k`-tuples of positive integers summing to `n`, in lexicographic
/// order. Yields nothing when `k > n` or `k == 0`.
pub fn compositions(n: usize, k: usize) -> Compositions {
    let current = if k == 0 || k > n {
        None
    } else {
        let mut first = vec![1; k];
        first[k - 1] = n - (k - 1);
        Some(first)
    };
    Compositions { current }
}

#[derive(Debug, Clone)]
pub struct Compositions {
    current: Option<Vec<usize>>,
}

impl Iterator for Compositions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let k = out.len();
        // Successor: the rightmost position j < k-1 whose tail still has slack
        // grows by one; the tail is reset to (1, ..., 1, remainder).
        let mut tail = out[k - 1];
        for j in (0..k - 1).rev() {
            let tail_len = k - 1 - j;
            if tail > tail_len {
                let mut next = out.clone();
                next[j] += 1;
                for slot in &mut next[j + 1..k - 1] {
                    *slot = 1;
                }
                next[k - 1] = tail - 1 - (tail_len - 1);
                self.current = Some(next);
                break;
            }
            tail += out[j];
        }
        Some(out)
    }
}

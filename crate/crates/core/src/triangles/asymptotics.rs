//! Behaviour of `B_n^(m)` and `S^(m)(n, k)` as the order `m` grows with `n`
//! held fixed.

use num_bigint::BigInt;
use num_traits::One;

use super::{bell, global_cache, BellMethod};
use crate::error::{Error, Result};
use crate::exact::{factorial, rat_to_nat, Nat, Rat};

/// Mean outer cardinality over the order-`m` partitions of an `n`-set,
/// `sum_k k S^(m)(n,k) / B_n^(m)`.
pub fn average_cardinality(n: usize, m: usize) -> Rat {
    let t = global_cache().get(n, m);
    Rat::new(
        BigInt::from(t.weighted_row_sum(n)),
        BigInt::from(t.row_sum(n)),
    )
}

/// `B_n^(m) / B_n^(m-1)` for `m >= 1`.
pub fn bell_ratio(n: usize, m: usize) -> Rat {
    assert!(m >= 1, "ratio needs m >= 1");
    let top = bell(n, m, BellMethod::RowSum);
    let bottom = bell(n, m - 1, BellMethod::RowSum);
    Rat::new(BigInt::from(top), BigInt::from(bottom))
}

/// Share of one-box elements, `S^(m)(n,1) / B_n^(m)`, for `n, m >= 1`.
pub fn singleton_share(n: usize, m: usize) -> Rat {
    assert!(n >= 1 && m >= 1, "share needs n, m >= 1");
    let t = global_cache().get(n, m);
    Rat::new(BigInt::from(t.get(n, 1)), BigInt::from(t.row_sum(n)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteDifferenceReport {
    pub n: usize,
    /// `B_n^(m)` for `m = 1..=m_count`.
    pub values: Vec<Nat>,
    /// The `(n-1)`-th forward differences of `values`.
    pub differences: Vec<BigInt>,
    pub constant: bool,
    /// `(n-1)! * n! / 2^(n-1)`, the value a degree `n-1` polynomial in `m`
    /// with leading coefficient `n!/2^(n-1)` must produce.
    pub predicted: Nat,
}

impl FiniteDifferenceReport {
    pub fn passed(&self) -> bool {
        let predicted = BigInt::from(self.predicted.clone());
        self.constant && self.differences.iter().all(|d| *d == predicted)
    }
}

/// Checks that `m -> B_n^(m)` has constant `(n-1)`-th differences over
/// `m = 1..=m_count` and that the constant matches the predicted leading term.
pub fn finite_difference_check(n: usize, m_count: usize) -> Result<FiniteDifferenceReport> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("finite differences need n >= 2, got {n}")));
    }
    if m_count < n + 1 {
        return Err(Error::InvalidArgument(format!(
            "need at least {} orders for n = {n}, got {m_count}",
            n + 1
        )));
    }
    let values: Vec<Nat> = (1..=m_count)
        .map(|m| bell(n, m, BellMethod::TriangleRecurrence))
        .collect();
    let mut differences: Vec<BigInt> = values.iter().cloned().map(BigInt::from).collect();
    for _ in 0..n - 1 {
        differences = differences.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    let constant = differences.windows(2).all(|w| w[0] == w[1]);
    let predicted = Rat::new(
        BigInt::from(factorial(n - 1) * factorial(n)),
        BigInt::from(Nat::one() << (n - 1)),
    );
    let predicted = rat_to_nat(&predicted).ok_or_else(|| {
        Error::InvalidArgument(format!("predicted constant for n = {n} is not an integer"))
    })?;
    Ok(FiniteDifferenceReport {
        n,
        values,
        differences,
        constant,
        predicted,
    })
}

//! Stirling triangles of every order and the higher-order Bell numbers built
//! on them.
//!
//! A [`Triangle`] of order `m` holds `S^(m)(n, k)` for `0 <= k <= n <= n_max`.
//! Order 0 is the identity matrix and order 1 is the ordinary Stirling
//! triangle of the second kind. Row 0 is always `[1]` and column 0 is zero
//! below it, so `S^(m)(0, 0) = 1` and `S^(m)(n, 0) = 0` for `n >= 1`.

mod asymptotics;
mod cache;
mod identities;

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{binomial, Nat};

pub use asymptotics::{
    average_cardinality, bell_ratio, finite_difference_check, singleton_share,
    FiniteDifferenceReport,
};
pub use cache::{global_cache, TriangleCache};
pub use identities::{CellResult, Fault, Identity, IdentityReport, Verifier};

/// Lower-triangular matrix of `S^(m)(n, k)`.
#[derive(Clone, PartialEq, Eq)]
pub struct Triangle {
    order: usize,
    rows: Vec<Vec<Nat>>,
}

impl fmt::Debug for Triangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Triangle")
            .field("order", &self.order)
            .field("n_max", &self.n_max())
            .finish()
    }
}

/// How to raise the Stirling matrix to the `m`-th power.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StirlingMethod {
    /// `S^(j+1)(n,k) = sum_i S^(j)(i,k) S(n,i)`, applied `m - 1` times.
    Recurrence,
    /// Iterated right multiplication `S^(j+1) = S^(j) * S`.
    MatrixPower,
    /// Square-and-multiply. Skips most intermediate orders.
    BinaryPower,
}

impl Triangle {
    pub fn identity(n_max: usize) -> Triangle {
        let rows = (0..=n_max)
            .map(|n| {
                let mut row = vec![Nat::zero(); n + 1];
                row[n] = Nat::one();
                row
            })
            .collect();
        Triangle { order: 0, rows }
    }

    /// Builds a triangle from explicit rows, checking shape and the fixed
    /// boundary values. Positivity of the interior is checked for order >= 1.
    pub fn from_rows(order: usize, rows: Vec<Vec<Nat>>) -> Result<Triangle> {
        if rows.is_empty() {
            return Err(Error::InvalidArgument("triangle needs at least row 0".into()));
        }
        for (n, row) in rows.iter().enumerate() {
            if row.len() != n + 1 {
                return Err(Error::InvalidArgument(format!(
                    "row {n} has {} entries, expected {}",
                    row.len(),
                    n + 1
                )));
            }
            if !row[n].is_one() {
                return Err(Error::InvalidArgument(format!("diagonal entry ({n},{n}) is not 1")));
            }
            if n > 0 && !row[0].is_zero() {
                return Err(Error::InvalidArgument(format!("entry ({n},0) is not 0")));
            }
            for (k, v) in row.iter().enumerate().take(n).skip(1) {
                let ok = if order == 0 { v.is_zero() } else { !v.is_zero() };
                if !ok {
                    return Err(Error::InvalidArgument(format!(
                        "entry ({n},{k}) = {v} violates the order-{order} shape"
                    )));
                }
            }
        }
        Ok(Triangle { order, rows })
    }

    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `S^(m)(n, k)`; zero above the diagonal.
    pub fn get(&self, n: usize, k: usize) -> Nat {
        self.entry(n, k).cloned().unwrap_or_default()
    }

    pub fn entry(&self, n: usize, k: usize) -> Option<&Nat> {
        self.rows.get(n).and_then(|row| row.get(k))
    }

    pub fn row(&self, n: usize) -> &[Nat] {
        &self.rows[n]
    }

    pub fn rows(&self) -> &[Vec<Nat>] {
        &self.rows
    }

    /// `sum_k S^(m)(n, k)`, which is `B_n^(m)` for `m >= 1`.
    pub fn row_sum(&self, n: usize) -> Nat {
        self.rows[n].iter().sum()
    }

    /// `sum_k k S^(m)(n, k)`.
    pub fn weighted_row_sum(&self, n: usize) -> Nat {
        self.rows[n]
            .iter()
            .enumerate()
            .map(|(k, v)| v * k as u64)
            .sum()
    }

    /// First `n_max + 1` rows of this triangle.
    pub fn truncated(&self, n_max: usize) -> Triangle {
        assert!(n_max <= self.n_max());
        Triangle {
            order: self.order,
            rows: self.rows[..=n_max].to_vec(),
        }
    }

    /// Matrix product `self * rhs`; orders add.
    pub fn mul(&self, rhs: &Triangle) -> Triangle {
        assert_eq!(self.n_max(), rhs.n_max(), "triangle sizes differ");
        let rows = (0..=self.n_max())
            .map(|n| {
                (0..=n)
                    .map(|k| (k..=n).map(|i| &self.rows[n][i] * &rhs.rows[i][k]).sum())
                    .collect()
            })
            .collect();
        Triangle {
            order: self.order + rhs.order,
            rows,
        }
    }

    /// Adds one to entry `(n, k)`. Fault-injection hook for the verifier.
    #[doc(hidden)]
    pub fn corrupt(&mut self, n: usize, k: usize) {
        self.rows[n][k] += 1u32;
    }
}

/// Stirling numbers of the second kind, `S(n,k) = k S(n-1,k) + S(n-1,k-1)`.
pub fn stirling2_triangle(n_max: usize) -> Triangle {
    let mut rows: Vec<Vec<Nat>> = Vec::with_capacity(n_max + 1);
    rows.push(vec![Nat::one()]);
    for n in 1..=n_max {
        let prev = &rows[n - 1];
        let mut row = vec![Nat::zero(); n + 1];
        for k in 1..=n {
            let stay = prev.get(k).map(|v| v * k as u64).unwrap_or_default();
            row[k] = stay + &prev[k - 1];
        }
        rows.push(row);
    }
    Triangle { order: 1, rows }
}

/// One step of the higher-order recurrence: order `j` to order `j + 1`.
pub(crate) fn recurrence_step(prev: &Triangle, base: &Triangle) -> Triangle {
    let n_max = prev.n_max();
    let rows = (0..=n_max)
        .map(|n| {
            (0..=n)
                .map(|k| (k..=n).map(|i| &prev.rows[i][k] * &base.rows[n][i]).sum())
                .collect()
        })
        .collect();
    Triangle {
        order: prev.order + 1,
        rows,
    }
}

/// `S^(m)(n, k)` for all `n <= n_max`. `m = 0` gives the identity.
pub fn higher_stirling(n_max: usize, m: usize, method: StirlingMethod) -> Triangle {
    if m == 0 {
        return Triangle::identity(n_max);
    }
    let base = stirling2_triangle(n_max);
    match method {
        StirlingMethod::Recurrence => {
            let mut t = base.clone();
            for _ in 1..m {
                t = recurrence_step(&t, &base);
            }
            t
        }
        StirlingMethod::MatrixPower => {
            let mut t = base.clone();
            for _ in 1..m {
                t = t.mul(&base);
            }
            t
        }
        StirlingMethod::BinaryPower => {
            let mut acc = Triangle::identity(n_max);
            let mut square = base;
            let mut e = m;
            while e > 0 {
                if e & 1 == 1 {
                    acc = acc.mul(&square);
                }
                e >>= 1;
                if e > 0 {
                    square = square.mul(&square);
                }
            }
            acc
        }
    }
}

/// Routes to `B_n^(m)`. They are independent enough to cross-check each other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellMethod {
    /// Row sum of the order-`m` Stirling triangle.
    RowSum,
    /// `B_n^(m) = sum_k B_k^(m-1) S(n,k)`, iterated up from order 0.
    TriangleRecurrence,
    /// `B_n^(m) = sum_s C(n-1,s) B_s^(m) B_(n-s)^(m-1)`; needs no Stirling numbers.
    FixedElement,
    /// `B_n^(m) = sum_i B_i^(m-r) S^(r)(n,i)` with `r = ceil(m/2)`.
    IntermediateStage,
    /// `n!` times the coefficient of `x^n` in `E_m(x)`.
    Egf,
}

impl BellMethod {
    pub const ALL: [BellMethod; 5] = [
        BellMethod::RowSum,
        BellMethod::TriangleRecurrence,
        BellMethod::FixedElement,
        BellMethod::IntermediateStage,
        BellMethod::Egf,
    ];
}

/// `B_n^(m)` for `n = 0..=n_max` at one order `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BellTable {
    pub m: usize,
    pub values: Vec<Nat>,
}

impl BellTable {
    pub fn get(&self, n: usize) -> &Nat {
        &self.values[n]
    }
}

/// `B_n^(m)` by the chosen method. `B_n^(0) = 1` and `B_0^(m) = 1`.
///
/// Panics if the generating-function route produces a non-integral value,
/// which can only mean an arithmetic bug.
pub fn bell(n: usize, m: usize, method: BellMethod) -> Nat {
    if m == 0 || n == 0 {
        return Nat::one();
    }
    match method {
        BellMethod::RowSum => global_cache().get(n, m).row_sum(n),
        BellMethod::TriangleRecurrence => bell_table(n, m).values.swap_remove(n),
        BellMethod::FixedElement => bell_table_fixed_element(n, m).values.swap_remove(n),
        BellMethod::IntermediateStage => {
            let r = m.div_ceil(2);
            let inner = global_cache().get(n, m - r);
            let split = global_cache().get(n, r);
            (1..=n)
                .map(|i| {
                    let b = if m - r == 0 { Nat::one() } else { inner.row_sum(i) };
                    b * split.row(n)[i].clone()
                })
                .sum()
        }
        BellMethod::Egf => crate::egf::bell_from_egf(n, m, n)
            .unwrap_or_else(|e| panic!("generating-function route failed: {e}")),
    }
}

/// `B_0^(m) ... B_(n_max)^(m)` by the triangle recurrence.
pub fn bell_table(n_max: usize, m: usize) -> BellTable {
    let s = global_cache().get(n_max, 1);
    let mut values = vec![Nat::one(); n_max + 1];
    for _ in 0..m {
        let next: Vec<Nat> = (0..=n_max)
            .map(|n| {
                if n == 0 {
                    return Nat::one();
                }
                (1..=n).map(|k| &values[k] * &s.rows[n][k]).sum()
            })
            .collect();
        values = next;
    }
    BellTable { m, values }
}

/// `B_0^(m) ... B_(n_max)^(m)` by fixing one element, order by order.
pub fn bell_table_fixed_element(n_max: usize, m: usize) -> BellTable {
    let mut prev = vec![Nat::one(); n_max + 1];
    for _ in 0..m {
        let mut cur = vec![Nat::one(); n_max + 1];
        for n in 1..=n_max {
            cur[n] = (0..n)
                .map(|s| binomial(n - 1, s) * &cur[s] * &prev[n - s])
                .sum();
        }
        prev = cur;
    }
    BellTable { m, values: prev }
}

/// Bell tables for orders `1..=m_max`, each over `n = 0..=n_max`.
pub fn bell_grid(n_max: usize, m_max: usize) -> Vec<BellTable> {
    (1..=m_max).map(|m| bell_table(n_max, m)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::nat;

    /// `S(n,k)` as (surjections from n onto k labels) / k!, by brute force.
    fn surjection_stirling(n: usize, k: usize) -> u64 {
        if n == 0 || k == 0 {
            return u64::from(n == k);
        }
        let total = (k as u64).pow(n as u32);
        let mut onto = 0u64;
        for code in 0..total {
            let mut hit = vec![false; k];
            let mut c = code;
            for _ in 0..n {
                hit[(c % k as u64) as usize] = true;
                c /= k as u64;
            }
            if hit.iter().all(|&h| h) {
                onto += 1;
            }
        }
        onto / (1..=k as u64).product::<u64>()
    }

    fn oracle_base(n_max: usize) -> Vec<Vec<u128>> {
        (0..=n_max)
            .map(|n| (0..=n_max).map(|k| surjection_stirling(n, k) as u128).collect())
            .collect()
    }

    fn oracle_power(s: &[Vec<u128>], m: usize) -> Vec<Vec<u128>> {
        let n_max = s.len() - 1;
        let mut acc: Vec<Vec<u128>> = (0..=n_max)
            .map(|n| (0..=n_max).map(|k| u128::from(n == k)).collect())
            .collect();
        for _ in 0..m {
            acc = (0..=n_max)
                .map(|n| {
                    (0..=n_max)
                        .map(|k| (0..=n_max).map(|i| acc[n][i] * s[i][k]).sum())
                        .collect()
                })
                .collect();
        }
        acc
    }

    #[test]
    fn stirling_base_matches_surjection_count() {
        let t = stirling2_triangle(8);
        assert_eq!(surjection_stirling(3, 2), 3);
        assert_eq!(t.get(3, 2), nat(3));
        for n in 0..=7 {
            for k in 0..=n {
                assert_eq!(t.get(n, k), nat(surjection_stirling(n, k)), "S({n},{k})");
            }
            assert_eq!(t.get(n, n), nat(1));
        }
        assert_eq!(t.row_sum(5), nat(52));
    }

    #[test]
    fn higher_stirling_matches_oracle_power() {
        let want = oracle_power(&oracle_base(3), 2);
        assert_eq!((want[3][1], want[3][2], want[3][3]), (5, 6, 1));
        let base = oracle_base(7);
        let powers: Vec<_> = (0..=5).map(|m| oracle_power(&base, m)).collect();
        for method in [StirlingMethod::Recurrence, StirlingMethod::MatrixPower, StirlingMethod::BinaryPower] {
            for m in 0..=5 {
                let t = higher_stirling(7, m, method);
                assert_eq!(t.order(), m);
                let o = &powers[m];
                for n in 0..=7 {
                    for k in 0..=n {
                        assert_eq!(t.get(n, k), Nat::from(o[n][k]), "{method:?} m={m} ({n},{k})");
                    }
                }
            }
        }
    }

    #[test]
    fn higher_stirling_published_entries() {
        let t5 = higher_stirling(5, 5, StirlingMethod::Recurrence);
        assert_eq!(t5.get(5, 3), nat(725));
        let t20 = higher_stirling(5, 20, StirlingMethod::MatrixPower);
        assert_eq!(t20.get(5, 2), nat(233050));
        assert_eq!(t20, higher_stirling(5, 20, StirlingMethod::BinaryPower));
    }

    #[test]
    fn bell_methods_agree() {
        for n in 0..=8 {
            for m in 0..=5 {
                let reference = bell(n, m, BellMethod::TriangleRecurrence);
                for method in BellMethod::ALL {
                    assert_eq!(bell(n, m, method), reference, "{method:?} n={n} m={m}");
                }
            }
        }
    }

    #[test]
    fn bell_examples() {
        for method in BellMethod::ALL {
            assert_eq!(bell(3, 2, method), nat(12));
            assert_eq!(bell(8, 5, method), nat(45592666));
            assert_eq!(bell(5, 50, method), nat(49314926));
            for m in 0..8 {
                assert_eq!(bell(1, m, method), nat(1));
            }
        }
    }

    #[test]
    fn triangle_laws() {
        for m in 1..=5 {
            let t = higher_stirling(8, m, StirlingMethod::Recurrence);
            let prev = bell_table(8, m - 1);
            let cur = bell_table(8, m);
            for n in 1..=8 {
                assert_eq!(t.row_sum(n), cur.values[n]);
                assert_eq!(t.get(n, 1), prev.values[n]);
                for k in 1..=n {
                    assert!(t.get(n, k) >= nat(1));
                }
            }
            for r in 0..=m {
                let split = higher_stirling(8, m - r, StirlingMethod::MatrixPower)
                    .mul(&higher_stirling(8, r, StirlingMethod::MatrixPower));
                assert_eq!(split, t);
            }
        }
    }

    #[test]
    fn bell_table_shape() {
        for m in 0..=5 {
            let t = bell_table(10, m);
            assert_eq!(t.values[0], nat(1));
            assert_eq!(t.values[1], nat(1));
            assert_eq!(t, bell_table_fixed_element(10, m));
            if m >= 1 {
                assert!(t.values[1..].windows(2).all(|w| w[0] < w[1]));
            }
        }
        assert_eq!(bell_grid(3, 2).len(), 2);
    }

    #[test]
    fn from_rows_validates_shape() {
        let good = stirling2_triangle(4);
        assert_eq!(Triangle::from_rows(1, good.rows().to_vec()).unwrap(), good);
        let mut rows = good.rows().to_vec();
        rows[3][3] = nat(2);
        assert!(Triangle::from_rows(1, rows).is_err());
        let mut rows = good.rows().to_vec();
        rows[2].pop();
        assert!(Triangle::from_rows(1, rows).is_err());
        let mut rows = good.rows().to_vec();
        rows[4][2] = nat(0);
        assert!(Triangle::from_rows(1, rows).is_err());
        assert!(Triangle::from_rows(0, Triangle::identity(3).rows().to_vec()).is_ok());
        assert!(Triangle::from_rows(1, vec![]).is_err());
    }
}

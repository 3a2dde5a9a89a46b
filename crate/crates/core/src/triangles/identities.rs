//! Cell-by-cell checks of the Bell/Stirling identities.
//!
//! Every check reads its Stirling values from one [`Verifier`], which can be
//! told to corrupt a single entry. A correct checker must then report the
//! cells that depend on it.

use std::collections::HashMap;
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{global_cache, Triangle};
use crate::error::{Error, Result};
use crate::exact::{binomial, compositions, factorial, multinomial, rat_from_nat, Nat, Rat};

/// Largest `n` accepted by the composition-sum identities.
pub const OUTSIDE_IN_MAX_N: usize = 16;
/// Largest `n` accepted by the other identities.
pub const MAX_N: usize = 200;
/// Largest `m` accepted by any identity.
pub const MAX_M: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Identity {
    /// `B_n^(m) = sum_k B_k^(m-1) S(n,k)`
    BellStirling,
    /// `B_n^(m) = sum_s C(n-1,s) B_s^(m) B_(n-s)^(m-1)`
    BellFixedElement,
    /// `S^(m)(n,k) = sum_s C(n-1,s) B_(n-s)^(m-1) S^(m)(s,k-1)`
    StirlingFixedElement,
    /// `S^(m)(n,k) = sum_i S^(m-r)(i,k) S^(r)(n,i)`
    StirlingSplit,
    /// `B_n^(m) = sum_i B_i^(m-r) S^(r)(n,i)`
    BellSplit,
    /// `S^(m)(n,k) = 1/k! sum_(i_1+..+i_k=n) multinomial * prod B_(i_j)^(m-1)`
    StirlingOutsideIn,
    /// The previous identity summed over `k`.
    BellOutsideIn,
    /// `S^m = S^(m-r) * S^r` as a matrix product.
    MatrixSplit,
}

impl Identity {
    pub const ALL: [Identity; 8] = [
        Identity::BellStirling,
        Identity::BellFixedElement,
        Identity::StirlingFixedElement,
        Identity::StirlingSplit,
        Identity::BellSplit,
        Identity::StirlingOutsideIn,
        Identity::BellOutsideIn,
        Identity::MatrixSplit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::BellStirling => "bell-stirling",
            Identity::BellFixedElement => "bell-fixed-element",
            Identity::StirlingFixedElement => "stirling-fixed-element",
            Identity::StirlingSplit => "stirling-split",
            Identity::BellSplit => "bell-split",
            Identity::StirlingOutsideIn => "stirling-outside-in",
            Identity::BellOutsideIn => "bell-outside-in",
            Identity::MatrixSplit => "matrix-split",
        }
    }

    fn uses_split(self) -> bool {
        matches!(
            self,
            Identity::StirlingSplit | Identity::BellSplit | Identity::MatrixSplit
        )
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Identity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Identity> {
        Identity::ALL
            .into_iter()
            .find(|i| i.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown identity `{s}`")))
    }
}

/// One checked instance of an identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellResult {
    pub identity: Identity,
    pub n: usize,
    pub m: usize,
    pub r: Option<usize>,
    pub k: Option<usize>,
    pub lhs: Rat,
    pub rhs: Rat,
}

impl CellResult {
    pub fn passed(&self) -> bool {
        self.lhs == self.rhs
    }

    /// e.g. `stirling-split n=5 m=3 r=1 k=2`
    pub fn label(&self) -> String {
        let mut s = format!("{} n={} m={}", self.identity, self.n, self.m);
        if let Some(r) = self.r {
            s.push_str(&format!(" r={r}"));
        }
        if let Some(k) = self.k {
            s.push_str(&format!(" k={k}"));
        }
        s
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IdentityReport {
    pub cells: Vec<CellResult>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.cells.iter().all(CellResult::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CellResult> {
        self.cells.iter().filter(|c| !c.passed())
    }

    pub fn extend(&mut self, other: IdentityReport) {
        self.cells.extend(other.cells);
    }
}

/// A single corrupted entry `S^(order)(n, k) + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fault {
    pub order: usize,
    pub n: usize,
    pub k: usize,
}

impl FromStr for Fault {
    type Err = Error;

    /// Parses `order:n:k`.
    fn from_str(s: &str) -> Result<Fault> {
        let parts: Vec<_> = s.split(':').map(str::parse::<usize>).collect();
        match parts.as_slice() {
            [Ok(order), Ok(n), Ok(k)] if *k >= 1 && k <= n => Ok(Fault {
                order: *order,
                n: *n,
                k: *k,
            }),
            _ => Err(Error::InvalidArgument(format!(
                "fault `{s}` is not order:n:k with 1 <= k <= n"
            ))),
        }
    }
}

/// Source of Stirling triangles for identity checks over `n <= n_max`.
#[derive(Debug)]
pub struct Verifier {
    n_max: usize,
    fault: Option<Fault>,
    triangles: HashMap<usize, Arc<Triangle>>,
}

impl Verifier {
    pub fn new(n_max: usize) -> Verifier {
        Verifier {
            n_max,
            fault: None,
            triangles: HashMap::new(),
        }
    }

    pub fn with_fault(mut self, fault: Fault) -> Verifier {
        self.fault = Some(fault);
        self.triangles.clear();
        self
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn triangle(&mut self, m: usize) -> Arc<Triangle> {
        if let Some(t) = self.triangles.get(&m) {
            return t.clone();
        }
        let mut t = global_cache().get(self.n_max, m);
        if let Some(f) = self.fault {
            if f.order == m && f.n <= self.n_max {
                let mut bad = (*t).clone();
                bad.corrupt(f.n, f.k);
                t = Arc::new(bad);
            }
        }
        self.triangles.insert(m, t.clone());
        t
    }

    fn bell(&mut self, n: usize, m: usize) -> Nat {
        if m == 0 || n == 0 {
            Nat::one()
        } else {
            self.triangle(m).row_sum(n)
        }
    }

    /// Checks `identity` on every valid cell of the given ranges. With
    /// `r = None` the split identities sweep every `0 <= r <= m`.
    pub fn verify(
        &mut self,
        identity: Identity,
        n_range: RangeInclusive<usize>,
        m_range: RangeInclusive<usize>,
        r: Option<usize>,
    ) -> Result<IdentityReport> {
        self.check_bounds(identity, &n_range, &m_range, r)?;
        let mut report = IdentityReport::default();
        for m in m_range {
            let rs: Vec<usize> = match r {
                _ if !identity.uses_split() => vec![usize::MAX],
                Some(r) if r <= m => vec![r],
                Some(_) => continue,
                None => (0..=m).collect(),
            };
            for &r in &rs {
                for n in n_range.clone() {
                    self.check_cell(identity, n, m, r, &mut report.cells);
                }
            }
        }
        Ok(report)
    }

    fn check_bounds(
        &self,
        identity: Identity,
        n_range: &RangeInclusive<usize>,
        m_range: &RangeInclusive<usize>,
        r: Option<usize>,
    ) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if n_range.is_empty() || m_range.is_empty() {
            return bad("empty n or m range".into());
        }
        if *n_range.start() == 0 || *m_range.start() == 0 {
            return bad("n and m ranges start at 1".into());
        }
        if *n_range.end() > self.n_max {
            return bad(format!("n up to {} exceeds verifier size {}", n_range.end(), self.n_max));
        }
        let n_cap = match identity {
            Identity::StirlingOutsideIn | Identity::BellOutsideIn => OUTSIDE_IN_MAX_N,
            _ => MAX_N,
        };
        if *n_range.end() > n_cap {
            return bad(format!("{identity} supports n <= {n_cap}"));
        }
        if *m_range.end() > MAX_M {
            return bad(format!("m must be <= {MAX_M}"));
        }
        if let Some(r) = r {
            if r > *m_range.end() {
                return bad(format!("r = {r} exceeds every m in range"));
            }
        }
        Ok(())
    }

    fn check_cell(&mut self, id: Identity, n: usize, m: usize, r: usize, out: &mut Vec<CellResult>) {
        let cell = |k: Option<usize>, r: Option<usize>, lhs: Nat, rhs: Rat| CellResult {
            identity: id,
            n,
            m,
            r,
            k,
            lhs: rat_from_nat(&lhs),
            rhs,
        };
        let int = |v: Nat| rat_from_nat(&v);
        match id {
            Identity::BellStirling => {
                let s = self.triangle(1);
                let rhs: Nat = (1..=n).map(|k| self.bell(k, m - 1) * &s.row(n)[k]).sum();
                out.push(cell(None, None, self.bell(n, m), int(rhs)));
            }
            Identity::BellFixedElement => {
                let rhs: Nat = (0..n)
                    .map(|s| binomial(n - 1, s) * self.bell(s, m) * self.bell(n - s, m - 1))
                    .sum();
                out.push(cell(None, None, self.bell(n, m), int(rhs)));
            }
            Identity::StirlingFixedElement => {
                let t = self.triangle(m);
                for k in 1..=n {
                    let rhs: Nat = (k - 1..n)
                        .map(|s| binomial(n - 1, s) * self.bell(n - s, m - 1) * t.get(s, k - 1))
                        .sum();
                    out.push(cell(Some(k), None, t.get(n, k), int(rhs)));
                }
            }
            Identity::StirlingSplit => {
                let (full, outer, inner) = (self.triangle(m), self.triangle(m - r), self.triangle(r));
                for k in 1..=n {
                    let rhs: Nat = (k..=n).map(|i| outer.get(i, k) * &inner.row(n)[i]).sum();
                    out.push(cell(Some(k), Some(r), full.get(n, k), int(rhs)));
                }
            }
            Identity::BellSplit => {
                let inner = self.triangle(r);
                let rhs: Nat = (1..=n).map(|i| self.bell(i, m - r) * &inner.row(n)[i]).sum();
                out.push(cell(None, Some(r), self.bell(n, m), int(rhs)));
            }
            Identity::StirlingOutsideIn => {
                let t = self.triangle(m);
                for k in 1..=n {
                    let rhs = self.outside_in(n, k, m);
                    out.push(cell(Some(k), None, t.get(n, k), rhs));
                }
            }
            Identity::BellOutsideIn => {
                let rhs = (1..=n).fold(Rat::zero(), |acc, k| acc + self.outside_in(n, k, m));
                out.push(cell(None, None, self.bell(n, m), rhs));
            }
            Identity::MatrixSplit => {
                let product = self.triangle(m - r).mul(&self.triangle(r));
                let full = self.triangle(m);
                for k in 1..=n {
                    out.push(cell(Some(k), Some(r), full.get(n, k), int(product.get(n, k))));
                }
            }
        }
    }

    /// `1/k! sum multinomial(n; i) prod B_(i_j)^(m-1)` over positive
    /// compositions, so the empty family `B_0` never appears.
    fn outside_in(&mut self, n: usize, k: usize, m: usize) -> Rat {
        let bells: Vec<Nat> = (0..=n).map(|i| self.bell(i, m - 1)).collect();
        let sum: Nat = compositions(n, k)
            .map(|parts| {
                let weight = multinomial(n, &parts).expect("composition sums to n");
                parts.iter().fold(weight, |acc, &i| acc * &bells[i])
            })
            .sum();
        Rat::new(BigInt::from(sum), BigInt::from(factorial(k)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_fixed_element_hand_expansion() {
        // C(2,0) B_0^(2) B_3^(1) + C(2,1) B_1^(2) B_2^(1) + C(2,2) B_2^(2) B_1^(1)
        let hand = 5 + 2 * 2 + 3;
        assert_eq!(hand, 12);
        let mut v = Verifier::new(3);
        let report = v.verify(Identity::BellFixedElement, 3..=3, 2..=2, None).unwrap();
        assert_eq!(report.cells.len(), 1);
        assert!(report.passed());
        assert_eq!(report.cells[0].rhs, Rat::from_integer(12.into()));
    }

    #[test]
    fn stirling_fixed_element_at_k1_is_first_column() {
        let mut v = Verifier::new(8);
        let report = v.verify(Identity::StirlingFixedElement, 1..=8, 1..=5, None).unwrap();
        assert!(report.passed());
        for c in report.cells.iter().filter(|c| c.k == Some(1)) {
            let prev = if c.m == 1 { Nat::one() } else { v.triangle(c.m - 1).row_sum(c.n) };
            assert_eq!(c.lhs, rat_from_nat(&prev));
        }
    }

    #[test]
    fn outside_in_reproduces_published_entry() {
        let mut v = Verifier::new(5);
        let report = v.verify(Identity::StirlingOutsideIn, 5..=5, 5..=5, None).unwrap();
        let cell = report.cells.iter().find(|c| c.k == Some(2)).unwrap();
        assert_eq!(cell.rhs, Rat::from_integer(3325.into()));
        assert!(report.passed());
    }

    #[test]
    fn every_identity_passes_on_small_sweep() {
        let mut v = Verifier::new(6);
        for id in Identity::ALL {
            let report = v.verify(id, 1..=6, 1..=4, None).unwrap();
            assert!(!report.cells.is_empty(), "{id}");
            assert!(report.passed(), "{id}: {:?}", report.failures().next());
        }
    }

    #[test]
    fn fixed_r_skips_smaller_m() {
        let mut v = Verifier::new(4);
        let report = v.verify(Identity::BellSplit, 1..=4, 1..=3, Some(2)).unwrap();
        assert!(report.cells.iter().all(|c| c.m >= 2 && c.r == Some(2)));
        assert_eq!(report.cells.len(), 8);
    }

    #[test]
    fn fault_is_reported_at_its_cell() {
        let fault = Fault { order: 3, n: 5, k: 2 };
        let mut v = Verifier::new(6).with_fault(fault);
        let report = v.verify(Identity::StirlingSplit, 1..=6, 1..=4, None).unwrap();
        assert!(!report.passed());
        assert!(report
            .failures()
            .any(|c| c.n == 5 && c.m == 3 && c.k == Some(2)));
        let report = v.verify(Identity::BellFixedElement, 1..=6, 1..=4, None).unwrap();
        assert!(report.failures().any(|c| c.n == 5 && c.m == 3));
    }

    #[test]
    fn bad_ranges_are_rejected() {
        let mut v = Verifier::new(5);
        assert!(v.verify(Identity::BellStirling, 0..=3, 1..=2, None).is_err());
        assert!(v.verify(Identity::BellStirling, 1..=6, 1..=2, None).is_err());
        assert!(v.verify(Identity::BellSplit, 1..=3, 1..=2, Some(3)).is_err());
        let mut big = Verifier::new(20);
        assert!(big.verify(Identity::BellOutsideIn, 1..=20, 1..=2, None).is_err());
    }

    #[test]
    fn parse_names_and_faults() {
        for id in Identity::ALL {
            assert_eq!(id.name().parse::<Identity>().unwrap(), id);
        }
        assert!("no-such-identity".parse::<Identity>().is_err());
        assert_eq!("3:5:2".parse::<Fault>().unwrap(), Fault { order: 3, n: 5, k: 2 });
        assert!("3:5:6".parse::<Fault>().is_err());
        assert!("3:5".parse::<Fault>().is_err());
    }
}

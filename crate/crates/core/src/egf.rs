//! Truncated formal power series with exact rational coefficients, and the
//! exponential generating functions of the higher-order Bell and Stirling
//! numbers built from them.
//!
//! `E_0(x) = e^x` and `E_(m+1)(x) = exp(E_m(x) - 1)`; the coefficient of `x^n`
//! in `E_m` is `B_n^(m) / n!`. Every extraction multiplies back by `n!` and
//! insists on an integer, so a wrong coefficient anywhere shows up as an error
//! rather than a plausible number.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{factorial, rat_from_nat, rat_to_nat, Nat, Rat};

/// `c_0 + c_1 x + ... + c_N x^N`, everything beyond `x^N` discarded.
#[derive(Clone, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<Rat>,
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "Series[{}]", terms.join(", "))
    }
}

impl Series {
    pub fn zero(order: usize) -> Series {
        Series {
            coeffs: vec![Rat::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Series {
        Series::constant(Rat::one(), order)
    }

    pub fn constant(c: Rat, order: usize) -> Series {
        let mut s = Series::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The series `x`.
    pub fn x(order: usize) -> Series {
        let mut s = Series::zero(order);
        if order >= 1 {
            s.coeffs[1] = Rat::one();
        }
        s
    }

    /// `e^x = sum x^n / n!`.
    pub fn exp_x(order: usize) -> Series {
        Series {
            coeffs: (0..=order)
                .map(|n| Rat::new(BigInt::one(), BigInt::from(factorial(n))))
                .collect(),
        }
    }

    /// Truncates or zero-pads `coeffs` to exactly `order + 1` terms.
    pub fn from_coeffs(mut coeffs: Vec<Rat>, order: usize) -> Series {
        coeffs.resize(order + 1, Rat::zero());
        Series { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Coefficient of `x^n`; zero beyond the truncation order.
    pub fn coeff(&self, n: usize) -> Rat {
        self.coeffs.get(n).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Index of the first nonzero coefficient, `None` for the zero series.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    fn check_order(&self, other: &Series) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Series) -> Result<Series> {
        self.check_order(other)?;
        Ok(Series {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Series) -> Result<Series> {
        self.check_order(other)?;
        Ok(Series {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn mul(&self, other: &Series) -> Result<Series> {
        self.check_order(other)?;
        let order = self.order();
        let mut coeffs = vec![Rat::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in other.coeffs[..=order - i].iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Ok(Series { coeffs })
    }

    pub fn scale(&self, c: &Rat) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// `self - c_0`, i.e. the series with its constant term dropped.
    pub fn minus_constant(&self) -> Series {
        let mut s = self.clone();
        s.coeffs[0] = Rat::zero();
        s
    }

    pub fn pow(&self, k: usize) -> Series {
        let mut acc = Series::one(self.order());
        for _ in 0..k {
            acc = acc.mul(self).expect("same order");
        }
        acc
    }

    /// `exp(self)` as the finite sum `sum_k self^k / k!`.
    ///
    /// The constant term must be zero; then `self^k` vanishes through order
    /// `N` once `k > N` and the sum is exact.
    pub fn exp(&self) -> Result<Series> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonZeroConstantTerm);
        }
        let order = self.order();
        let mut result = Series::one(order);
        let mut term = Series::one(order);
        for k in 1..=order {
            term = term.mul(self)?.scale(&Rat::new(BigInt::one(), BigInt::from(k)));
            if term.is_zero() {
                break;
            }
            result = result.add(&term)?;
        }
        Ok(result)
    }

    /// `exp(self)` from `g' = f' g`, i.e. `n g_n = sum_k k f_k g_(n-k)`.
    /// Must agree with [`Series::exp`] coefficient for coefficient.
    pub fn exp_by_derivative(&self) -> Result<Series> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonZeroConstantTerm);
        }
        let order = self.order();
        let mut g = vec![Rat::zero(); order + 1];
        g[0] = Rat::one();
        for n in 1..=order {
            let mut acc = Rat::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    acc += &self.coeffs[k] * &g[n - k] * BigInt::from(k);
                }
            }
            g[n] = acc / BigInt::from(n);
        }
        Ok(Series { coeffs: g })
    }

    /// `self(inner(x))`, defined only for `inner` with zero constant term.
    pub fn compose(&self, inner: &Series) -> Result<Series> {
        self.check_order(inner)?;
        if !inner.coeffs[0].is_zero() {
            return Err(Error::NonZeroInnerConstant);
        }
        let order = self.order();
        let mut acc = Series::constant(self.coeffs[order].clone(), order);
        for c in self.coeffs[..order].iter().rev() {
            acc = acc.mul(inner)?;
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }

    /// `n!` times the coefficient of `x^n`, which must be a nonnegative
    /// integer for every series this module produces.
    pub fn egf_value(&self, n: usize) -> Result<Nat> {
        let scaled = self.coeff(n) * rat_from_nat(&factorial(n));
        rat_to_nat(&scaled).ok_or_else(|| Error::NonIntegral {
            n,
            value: scaled.to_string(),
        })
    }

    /// [`Series::egf_value`] for every `n` up to the truncation order.
    pub fn egf_values(&self) -> Result<Vec<Nat>> {
        (0..=self.order()).map(|n| self.egf_value(n)).collect()
    }
}

/// `exp(f)` for `f` with zero constant term.
pub fn series_exp(f: &Series) -> Result<Series> {
    f.exp()
}

/// `E_m(x)` truncated at `x^order`, from `E_0 = e^x` by `m` applications of
/// `E -> exp(E - 1)`.
pub fn iterated_exponential(m: usize, order: usize) -> Series {
    let mut e = Series::exp_x(order);
    for _ in 0..m {
        e = e.minus_constant().exp().expect("constant term removed");
    }
    e
}

/// `B_n^(m)` as `n! [x^n] E_m(x)`.
pub fn bell_from_egf(n: usize, m: usize, order: usize) -> Result<Nat> {
    if order < n {
        return Err(Error::InvalidArgument(format!(
            "series order {order} is below n = {n}"
        )));
    }
    iterated_exponential(m, order).egf_value(n)
}

/// `(E_(m-1)(x) - 1)^k / k!`, the generating function of `S^(m)(n, k)`.
pub fn stirling_series(k: usize, m: usize, order: usize) -> Result<Series> {
    if m == 0 {
        return Err(Error::InvalidArgument("stirling series need m >= 1".into()));
    }
    if k > order {
        return Err(Error::InvalidArgument(format!(
            "k = {k} exceeds series order {order}"
        )));
    }
    let inner = iterated_exponential(m - 1, order).minus_constant();
    let k_fact = Rat::new(BigInt::one(), BigInt::from(factorial(k)));
    Ok(inner.pow(k).scale(&k_fact))
}

/// `S^(m)(n, k)` as `n! [x^n] (E_(m-1) - 1)^k / k!`.
pub fn stirling_from_egf(n: usize, k: usize, m: usize) -> Result<Nat> {
    stirling_series(k, m, n.max(k))?.egf_value(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{nat, rat};

    fn nats(v: &[u64]) -> Vec<Nat> {
        v.iter().map(|&x| nat(x)).collect()
    }

    #[test]
    fn exp_of_zero_is_one() {
        assert_eq!(Series::zero(5).exp().unwrap(), Series::one(5));
    }

    #[test]
    fn exp_of_x() {
        let e = Series::x(4).exp().unwrap();
        let want = vec![rat(1, 1), rat(1, 1), rat(1, 2), rat(1, 6), rat(1, 24)];
        assert_eq!(e.coeffs(), want.as_slice());
    }

    #[test]
    fn exp_of_exp_minus_one_gives_bell_numbers() {
        let f = Series::exp_x(5).minus_constant();
        let e = series_exp(&f).unwrap();
        assert_eq!(e.egf_values().unwrap(), nats(&[1, 1, 2, 5, 15, 52]));
    }

    #[test]
    fn exp_rejects_constant_term() {
        assert_eq!(Series::one(3).exp(), Err(Error::NonZeroConstantTerm));
        assert_eq!(Series::one(3).exp_by_derivative(), Err(Error::NonZeroConstantTerm));
    }

    #[test]
    fn exp_routes_agree() {
        for m in 0..4 {
            let f = iterated_exponential(m, 9).minus_constant();
            assert_eq!(f.exp().unwrap(), f.exp_by_derivative().unwrap());
        }
    }

    #[test]
    fn iterated_exponential_examples() {
        let e0 = iterated_exponential(0, 3);
        assert_eq!(e0.coeffs(), &[rat(1, 1), rat(1, 1), rat(1, 2), rat(1, 6)]);
        assert_eq!(iterated_exponential(2, 3).coeff(3), rat(2, 1));
        assert_eq!(iterated_exponential(5, 8).coeff(8), rat(45592666, 40320));
    }

    #[test]
    fn bell_from_egf_examples() {
        assert_eq!(bell_from_egf(3, 2, 3).unwrap(), nat(12));
        for m in 0..6 {
            assert_eq!(bell_from_egf(1, m, 1).unwrap(), nat(1));
        }
        assert_eq!(bell_from_egf(6, 3, 6).unwrap(), nat(12915));
        assert!(bell_from_egf(6, 3, 5).is_err());
    }

    #[test]
    fn stirling_series_examples() {
        let s = stirling_series(1, 1, 6).unwrap();
        assert_eq!(s.egf_values().unwrap(), nats(&[0, 1, 1, 1, 1, 1, 1]));
        assert_eq!(stirling_from_egf(5, 3, 5).unwrap(), nat(725));
        // 2-block partitions of {1,2,3,4}: 4 singletons-with-triple + 3 pair-pairs
        assert_eq!(stirling_series(2, 1, 4).unwrap().egf_value(4).unwrap(), nat(7));
        assert!(stirling_series(5, 2, 4).is_err());
        assert!(stirling_series(1, 0, 4).is_err());
    }

    #[test]
    fn non_integral_coefficient_is_an_error() {
        let s = Series::from_coeffs(vec![rat(0, 1), rat(1, 3)], 1);
        assert!(matches!(s.egf_value(1), Err(Error::NonIntegral { n: 1, .. })));
    }

    #[test]
    fn compose_requires_zero_constant_inner() {
        let g = Series::exp_x(3);
        assert_eq!(g.compose(&Series::one(3)), Err(Error::NonZeroInnerConstant));
        assert!(g.compose(&Series::x(4)).is_err());
        // exp(x) o x = exp(x)
        assert_eq!(g.compose(&Series::x(3)).unwrap(), g);
    }

    #[test]
    fn composition_law() {
        let inner = Series::exp_x(8).minus_constant();
        for m in 0..=4 {
            let lhs = iterated_exponential(m, 8).minus_constant().compose(&inner).unwrap();
            let rhs = iterated_exponential(m + 1, 8).minus_constant();
            assert_eq!(lhs, rhs, "m = {m}");
        }
    }

    #[test]
    fn stacking_law() {
        for m in 1..=3 {
            let mut total = Series::zero(8);
            for k in 1..=8 {
                total = total.add(&stirling_series(k, m, 8).unwrap()).unwrap();
            }
            let e = iterated_exponential(m, 8);
            assert_eq!(total, e.minus_constant());
            assert!(total.coeff(0).is_zero());
        }
    }

    #[test]
    fn arithmetic_truncates() {
        let x = Series::x(3);
        assert_eq!(x.pow(3).coeff(3), rat(1, 1));
        assert!(x.pow(4).is_zero());
        assert_eq!(x.pow(2).valuation(), Some(2));
        assert_eq!(Series::zero(2).valuation(), None);
        assert_eq!(x.add(&Series::x(2)), Err(Error::OrderMismatch { left: 3, right: 2 }));
    }
}

//! Representation numbers `r(1^k m^k; n)`: a lattice-count oracle, theta
//! series, the generating series `(theta(tau) theta(m tau))^k`, the eta
//! quotient `x_m` and the correction series `a_{j,k,m}`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eta::{quotient_expand, EtaQuotient};
use crate::series::{Scalar, Series};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error("unsupported multiplier {0} (expected 1, 2 or 4)")]
    UnsupportedMultiplier(u32),
    #[error("k must be positive")]
    ZeroK,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub enum Multiplier {
    One,
    Two,
    Four,
}

impl Multiplier {
    pub const ALL: [Multiplier; 3] = [Multiplier::One, Multiplier::Two, Multiplier::Four];

    pub fn value(self) -> u32 {
        match self {
            Multiplier::One => 1,
            Multiplier::Two => 2,
            Multiplier::Four => 4,
        }
    }
}

impl TryFrom<u32> for Multiplier {
    type Error = RepError;

    fn try_from(m: u32) -> Result<Self, RepError> {
        match m {
            1 => Ok(Multiplier::One),
            2 => Ok(Multiplier::Two),
            4 => Ok(Multiplier::Four),
            _ => Err(RepError::UnsupportedMultiplier(m)),
        }
    }
}

impl From<Multiplier> for u32 {
    fn from(m: Multiplier) -> u32 {
        m.value()
    }
}

impl fmt::Display for Multiplier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// The form `x_1^2 + ... + x_k^2 + m (x_{k+1}^2 + ... + x_{2k}^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormSpec {
    k: u32,
    m: Multiplier,
}

impl FormSpec {
    pub fn new(k: u32, m: u32) -> Result<Self, RepError> {
        if k == 0 {
            return Err(RepError::ZeroK);
        }
        Ok(FormSpec { k, m: Multiplier::try_from(m)? })
    }

    pub fn with_multiplier(k: u32, m: Multiplier) -> Result<Self, RepError> {
        if k == 0 {
            return Err(RepError::ZeroK);
        }
        Ok(FormSpec { k, m })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn m(&self) -> Multiplier {
        self.m
    }

    pub fn variables(&self) -> u32 {
        2 * self.k
    }
}

impl fmt::Display for FormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(k={}, m={})", self.k, self.m)
    }
}

/// Counts for `0..=max_n`, one variable at a time:
/// `r_{j+1}(n) = sum_{t^2 <= n} r_j(n - w t^2)`.
pub fn brute_counts(spec: FormSpec, max_n: usize) -> Vec<BigInt> {
    let len = max_n + 1;
    let mut r = vec![BigInt::zero(); len];
    r[0] = BigInt::from(1);
    let m = spec.m().value() as usize;
    for var in 0..spec.variables() {
        let w = if var < spec.k() { 1 } else { m };
        let mut next = vec![BigInt::zero(); len];
        for (n, slot) in next.iter_mut().enumerate() {
            let mut t = 0usize;
            while w * t * t <= n {
                let c = &r[n - w * t * t];
                if t == 0 {
                    *slot += c;
                } else {
                    *slot += c * 2u32;
                }
                t += 1;
            }
        }
        r = next;
    }
    r
}

pub fn brute_count(spec: FormSpec, n: u64) -> BigInt {
    brute_counts(spec, n as usize).pop().expect("nonempty")
}

/// Direct nested enumeration over all `2k` variables. Only usable for tiny `n`.
pub fn enumerate_direct(spec: FormSpec, n: u64) -> u64 {
    let n = n as i64;
    let m = spec.m().value() as i64;
    let weights: Vec<i64> = (0..spec.variables()).map(|i| if i < spec.k() { 1 } else { m }).collect();
    fn go(weights: &[i64], rest: i64) -> u64 {
        match weights.split_first() {
            None => u64::from(rest == 0),
            Some((&w, tail)) => {
                let mut total = 0;
                let mut t = 0i64;
                while w * t * t <= rest {
                    let sub = go(tail, rest - w * t * t);
                    total += if t == 0 { sub } else { 2 * sub };
                    t += 1;
                }
                total
            }
        }
    }
    go(&weights, n)
}

/// `sum_{n in Z} q^{n^2}` below `q^order`.
pub fn theta_series<T: Scalar>(order: i64) -> Series<T> {
    let len = order.max(0) as usize;
    let mut coeffs = vec![T::zero(); len];
    let two = T::from_i64(2).expect("small");
    let mut n = 0usize;
    while n * n < len {
        coeffs[n * n] = if n == 0 { T::one() } else { two.clone() };
        n += 1;
    }
    Series::from_coeffs(coeffs)
}

/// `theta = eta_2^5 / (eta_1^2 eta_4^2)`.
pub fn theta_eta_quotient() -> EtaQuotient {
    EtaQuotient::from_exponents([(1, -2), (2, 5), (4, -2)])
}

/// `theta(tau) theta(m tau)` as an eta quotient.
pub fn theta_product_eta(m: Multiplier) -> EtaQuotient {
    let theta = theta_eta_quotient();
    theta.mul(&theta.dilate(m.value() as u64))
}

/// `x_1 = (eta_1 eta_4)^24 / eta_2^48`, `x_2 = (eta_1 eta_8 / (eta_2 eta_4))^8`,
/// `x_4 = (eta_1 eta_4 eta_16)^4 / (eta_2 eta_8)^6`.
pub fn x_eta(m: Multiplier) -> EtaQuotient {
    match m {
        Multiplier::One => EtaQuotient::from_exponents([(1, 24), (2, -48), (4, 24)]),
        Multiplier::Two => EtaQuotient::from_exponents([(1, 8), (2, -8), (4, -8), (8, 8)]),
        Multiplier::Four => EtaQuotient::from_exponents([(1, 4), (2, -6), (4, 4), (8, -6), (16, 4)]),
    }
}

/// `(theta(tau) theta(m tau))^k` below `q^order`; panics if a coefficient is
/// negative, since each one counts solutions.
pub fn gen_series<T: Scalar>(spec: FormSpec, order: i64) -> Series<T> {
    let theta = theta_series::<T>(order);
    let base = theta.mul_series(&theta.dilate(spec.m().value()).truncate(order));
    let g = base.pow(spec.k() as i64).expect("nonnegative power");
    for (e24, c) in g.terms() {
        assert!(!c.is_negative(), "negative count {c} at q^{}", e24 / 24);
    }
    g
}

pub fn x_series<T: Scalar>(m: Multiplier, order: i64) -> Series<T> {
    quotient_expand(&x_eta(m), order)
}

/// `a_{j,k,m} = (theta(tau) theta(m tau))^k x_m^j` as a series product.
pub fn correction_series<T: Scalar>(j: u32, spec: FormSpec, order: i64) -> Series<T> {
    let x = x_series::<T>(spec.m(), order);
    let g = gen_series::<T>(spec, order);
    g.mul_series(&x.pow(j as i64).expect("nonnegative power")).truncate(order)
}

/// The merged eta quotient `(theta theta_m)^k x_m^j`.
pub fn correction_eta(j: u32, spec: FormSpec) -> EtaQuotient {
    theta_product_eta(spec.m()).pow(spec.k() as i64).mul(&x_eta(spec.m()).pow(j as i64))
}

/// `a_{j,k,m}` by expanding the merged eta quotient directly.
pub fn correction_series_eta<T: Scalar>(j: u32, spec: FormSpec, order: i64) -> Series<T> {
    quotient_expand(&correction_eta(j, spec), order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::kronecker;
    use crate::IntSeries;
    use proptest::prelude::*;

    fn spec(k: u32, m: u32) -> FormSpec {
        FormSpec::new(k, m).unwrap()
    }

    fn coeffs(s: &IntSeries, range: std::ops::Range<i64>) -> Vec<i64> {
        range.map(|n| i64::try_from(s.coefficient(n).unwrap()).unwrap()).collect()
    }

    #[test]
    fn brute_examples() {
        assert_eq!(brute_count(spec(1, 2), 1), BigInt::from(2));
        assert_eq!(brute_count(spec(2, 2), 2), BigInt::from(8));
        for k in 1..=4 {
            for m in [1, 2, 4] {
                assert_eq!(brute_count(spec(k, m), 0), BigInt::from(1));
            }
        }
    }

    #[test]
    fn brute_matches_direct_enumeration() {
        for k in 1..=3 {
            for m in [1, 2, 4] {
                let dp = brute_counts(spec(k, m), 20);
                for n in 0..=20u64 {
                    assert_eq!(dp[n as usize], BigInt::from(enumerate_direct(spec(k, m), n)), "k={k} m={m} n={n}");
                }
            }
        }
        let dp = brute_counts(spec(4, 2), 12);
        for n in 0..=12u64 {
            assert_eq!(dp[n as usize], BigInt::from(enumerate_direct(spec(4, 2), n)));
        }
    }

    #[test]
    fn theta_examples() {
        let t: IntSeries = theta_series(10);
        assert_eq!(coeffs(&t, 0..5), vec![1, 2, 0, 0, 2]);
        assert_eq!(coeffs(&t, 9..10), vec![2]);
    }

    #[test]
    fn theta_eta_duality() {
        let lattice: IntSeries = theta_series(1000);
        let eta: IntSeries = quotient_expand(&theta_eta_quotient(), 1000);
        assert_eq!(lattice, eta);
    }

    #[test]
    fn gen_examples() {
        let g: IntSeries = gen_series(spec(2, 2), 9);
        assert_eq!(coeffs(&g, 0..9), vec![1, 4, 8, 16, 24, 24, 32, 32, 24]);
        let g: IntSeries = gen_series(spec(4, 2), 9);
        assert_eq!(g.coefficient(8).unwrap(), BigInt::from(2160));
    }

    #[test]
    fn gen_matches_oracle() {
        for k in 1..=4 {
            for m in [1, 2, 4] {
                let g: IntSeries = gen_series(spec(k, m), 61);
                let b = brute_counts(spec(k, m), 60);
                for n in 0..=60 {
                    assert_eq!(g.coefficient(n).unwrap(), b[n as usize], "k={k} m={m} n={n}");
                }
            }
        }
    }

    #[test]
    fn x_series_leading_terms() {
        let x2: IntSeries = x_series(Multiplier::Two, 6);
        assert_eq!(coeffs(&x2, 0..6), vec![0, 1, -8, 28, -64, 142]);
        for m in Multiplier::ALL {
            assert_eq!(x_eta(m).prefactor24(), 24);
            let x: IntSeries = x_series(m, 4);
            assert!(x.coefficient(0).unwrap().is_zero());
            assert_eq!(x.coefficient(1).unwrap(), BigInt::from(1));
        }
    }

    #[test]
    fn correction_fixture() {
        let a: IntSeries = correction_series(1, spec(4, 2), 9);
        assert_eq!(coeffs(&a, 1..9), vec![1, 0, -4, 0, -2, 0, 24, 0]);
        let b: IntSeries = correction_series_eta(1, spec(4, 2), 9);
        assert_eq!(a, b);
    }

    #[test]
    fn correction_leading_term() {
        for k in 1..=4 {
            for m in [1, 2, 4] {
                for j in 1..=5u32 {
                    let a: IntSeries = correction_series(j, spec(k, m), j as i64 + 3);
                    for n in 0..j as i64 {
                        assert!(a.coefficient(n).unwrap().is_zero());
                    }
                    assert_eq!(a.coefficient(j as i64).unwrap(), BigInt::from(1));
                }
            }
        }
    }

    #[test]
    fn correction_routes_agree() {
        for k in 1..=4 {
            for m in [1, 2, 4] {
                for j in 1..=3 {
                    let a: IntSeries = correction_series(j, spec(k, m), 120);
                    let b: IntSeries = correction_series_eta(j, spec(k, m), 120);
                    assert_eq!(a, b, "j={j} k={k} m={m}");
                }
            }
        }
    }

    #[test]
    fn jacobi_two_squares() {
        let b = brute_counts(spec(1, 1), 200);
        for n in 1..=200i64 {
            let expect: i64 = (1..=n).filter(|d| n % d == 0).map(|d| 4 * kronecker(-4, d) as i64).sum();
            assert_eq!(b[n as usize], BigInt::from(expect), "n={n}");
        }
    }

    #[test]
    fn spec_validation() {
        assert_eq!(FormSpec::new(1, 3), Err(RepError::UnsupportedMultiplier(3)));
        assert_eq!(FormSpec::new(0, 2), Err(RepError::ZeroK));
        assert_eq!(spec(3, 4).variables(), 6);
    }

    proptest! {
        #[test]
        fn gen_coefficients_match_dp(k in 1u32..=3, mi in 0usize..3, n in 0i64..40) {
            let s = FormSpec::with_multiplier(k, Multiplier::ALL[mi]).unwrap();
            let g: IntSeries = gen_series(s, n + 1);
            prop_assert_eq!(g.coefficient(n).unwrap(), brute_count(s, n as u64));
        }
    }
}

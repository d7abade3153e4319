//! Truncated power series in `q^(1/24)` with exact coefficients.
//!
//! A [`Series`] stores its coefficients densely on an arithmetic grid of
//! exponents `offset24, offset24 + stride, ...` (all measured in 24ths) and
//! knows every coefficient strictly below `q^(order24/24)`. Binary operations
//! never report more precision than their inputs justify.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, NumAssignRef, NumRef, One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("leading coefficient is zero (series vanishes to its precision)")]
    ZeroLeadingCoefficient,
    #[error("leading coefficient {0} is not invertible in the coefficient ring")]
    NotInvertible(String),
    #[error("series has a nonzero coefficient at the fractional exponent {0}/24")]
    NonIntegralSeries(i64),
    #[error("series has a nonzero coefficient at the negative exponent {0}")]
    NegativeExponent(i64),
    #[error("coefficient of q^({exponent24}/24) requested but series is only known below q^({order24}/24)")]
    BeyondTruncation { exponent24: i64, order24: i64 },
    #[error("malformed series term: {0}")]
    Parse(String),
}

/// Exact coefficient ring for [`Series`].
///
/// Implemented for machine and arbitrary-precision integers and for their
/// rational fields. Floating point types are deliberately not implemented.
pub trait Scalar:
    Num + NumRef + NumAssignRef + Signed + Neg<Output = Self> + Clone + FromPrimitive + fmt::Debug + fmt::Display + Send + Sync
{
    /// `self += a * b`.
    fn add_product(&mut self, a: &Self, b: &Self);

    /// True when `self` has a multiplicative inverse in the ring.
    fn is_unit(&self) -> bool;
}

macro_rules! scalar_int {
    ($($t:ty),*) => {$(
        impl Scalar for $t {
            #[inline]
            fn add_product(&mut self, a: &Self, b: &Self) {
                *self += *a * *b;
            }
            fn is_unit(&self) -> bool {
                *self == 1 || *self == -1
            }
        }
    )*};
}
scalar_int!(i64, i128);

impl Scalar for BigInt {
    #[inline]
    fn add_product(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
}

macro_rules! scalar_ratio {
    ($($t:ty),*) => {$(
        impl Scalar for Ratio<$t> {
            #[inline]
            fn add_product(&mut self, a: &Self, b: &Self) {
                *self += a * b;
            }
            fn is_unit(&self) -> bool {
                !self.is_zero()
            }
        }
    )*};
}
scalar_ratio!(i64, i128, BigInt);

fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

fn ceil_div(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    a.div_euclid(b) + i64::from(a.rem_euclid(b) != 0)
}

#[derive(Clone, Debug)]
pub struct Series<T> {
    offset24: i64,
    stride: i64,
    coeffs: Vec<T>,
    order24: i64,
}

impl<T: Scalar> Series<T> {
    fn zeros(offset24: i64, stride: i64, order24: i64) -> Self {
        assert!(stride > 0, "grid stride must be positive");
        let len = ceil_div(order24 - offset24, stride).max(0) as usize;
        Series { offset24, stride, coeffs: vec![T::zero(); len], order24 }
    }

    /// Integral series `c0 + c1 q + ...` known below `q^len`.
    pub fn from_coeffs(coeffs: Vec<T>) -> Self {
        let order24 = 24 * coeffs.len() as i64;
        Series { offset24: 0, stride: 24, coeffs, order24 }
    }

    /// Series from `(exponent24, coefficient)` terms, known below `q^(order24/24)`.
    /// Terms at or beyond the truncation are dropped; repeated exponents add up.
    pub fn from_terms24<I>(terms: I, order24: i64) -> Self
    where
        I: IntoIterator<Item = (i64, T)>,
    {
        let terms: Vec<(i64, T)> = terms.into_iter().filter(|(e, _)| *e < order24).collect();
        let Some(offset24) = terms.iter().map(|(e, _)| *e).min() else {
            return Self::zeros(0, 24, order24.max(0));
        };
        let stride = terms.iter().fold(24, |g, (e, _)| gcd(g, *e - offset24));
        let mut out = Self::zeros(offset24, stride, order24);
        for (e, c) in terms {
            out.coeffs[((e - offset24) / stride) as usize] += &c;
        }
        out
    }

    pub fn constant(c: T, order: i64) -> Self {
        Self::from_terms24([(0, c)], 24 * order)
    }

    pub fn one(order: i64) -> Self {
        Self::constant(T::one(), order)
    }

    pub fn zero(order: i64) -> Self {
        Self::zeros(0, 24, 24 * order)
    }

    pub fn monomial24(exponent24: i64, c: T, order24: i64) -> Self {
        Self::from_terms24([(exponent24, c)], order24)
    }

    pub fn offset24(&self) -> i64 {
        self.offset24
    }

    pub fn order24(&self) -> i64 {
        self.order24
    }

    /// Number of integer exponents `q^0, q^1, ...` that are known.
    pub fn order(&self) -> i64 {
        ceil_div(self.order24, 24)
    }

    /// Nonzero `(exponent24, coefficient)` pairs in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &T)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.offset24 + self.stride * i as i64, c))
    }

    pub fn coefficient24(&self, exponent24: i64) -> Result<T, SeriesError> {
        if exponent24 >= self.order24 {
            return Err(SeriesError::BeyondTruncation { exponent24, order24: self.order24 });
        }
        let rel = exponent24 - self.offset24;
        if rel < 0 || rel % self.stride != 0 {
            return Ok(T::zero());
        }
        Ok(self.coeffs[(rel / self.stride) as usize].clone())
    }

    /// Coefficient of `q^n` for an integer exponent `n`.
    pub fn coefficient(&self, n: i64) -> Result<T, SeriesError> {
        self.coefficient24(24 * n)
    }

    /// True when every nonzero coefficient sits at an integer exponent.
    pub fn is_integral(&self) -> bool {
        self.first_fractional().is_none()
    }

    fn first_fractional(&self) -> Option<i64> {
        self.terms().map(|(e, _)| e).find(|e| e.rem_euclid(24) != 0)
    }

    /// Coefficients of `q^0, ..., q^(order-1)` for an integral series with no
    /// negative exponents.
    pub fn to_integral(&self) -> Result<Vec<T>, SeriesError> {
        if let Some(e) = self.first_fractional() {
            return Err(SeriesError::NonIntegralSeries(e));
        }
        if let Some((e, _)) = self.terms().next().filter(|(e, _)| *e < 0) {
            return Err(SeriesError::NegativeExponent(e / 24));
        }
        (0..self.order().max(0)).map(|n| self.coefficient(n)).collect()
    }

    fn regrid(&self, offset24: i64, stride: i64, order24: i64) -> Self {
        debug_assert!(self.stride % stride == 0 && (self.offset24 - offset24) % stride == 0);
        let mut out = Self::zeros(offset24, stride, order24);
        let step = (self.stride / stride) as usize;
        let start = (self.offset24 - offset24) / stride;
        for (i, c) in self.coeffs.iter().enumerate() {
            let idx = start + (i * step) as i64;
            if idx >= 0 && (idx as usize) < out.coeffs.len() {
                out.coeffs[idx as usize] = c.clone();
            }
        }
        out
    }

    fn common_grid(&self, other: &Self) -> (i64, i64, i64) {
        let offset = self.offset24.min(other.offset24);
        let stride = gcd(gcd(self.stride, other.stride), self.offset24 - other.offset24);
        let order = self.order24.min(other.order24);
        (offset, stride, order)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&mut T, &T)) -> Self {
        let (offset, stride, order) = self.common_grid(other);
        let mut out = self.regrid(offset, stride, order);
        let rhs = other.regrid(offset, stride, order);
        for (a, b) in out.coeffs.iter_mut().zip(&rhs.coeffs) {
            f(a, b);
        }
        out
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut out = self.clone();
        for x in &mut out.coeffs {
            *x *= c;
        }
        out
    }

    /// Cauchy product, precise below `min(off_a + ord_b, off_b + ord_a)`.
    pub fn mul_series(&self, other: &Self) -> Self {
        let stride = gcd(self.stride, other.stride);
        let offset = self.offset24 + other.offset24;
        let order = (self.offset24 + other.order24).min(other.offset24 + self.order24);
        let mut out = Self::zeros(offset, stride, order);
        let len = out.coeffs.len();
        let ra = (self.stride / stride) as usize;
        let rb = (other.stride / stride) as usize;
        let nonzero_b: Vec<(usize, &T)> =
            other.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        for (i, a) in self.coeffs.iter().enumerate() {
            let base = i * ra;
            if base >= len {
                break;
            }
            if a.is_zero() {
                continue;
            }
            for &(j, b) in &nonzero_b {
                let idx = base + j * rb;
                if idx >= len {
                    break;
                }
                out.coeffs[idx].add_product(a, b);
            }
        }
        out
    }

    /// Multiplicative inverse: `self * inverse = 1 + O(q^precision)`.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let lead_idx = self
            .coeffs
            .iter()
            .position(|c| !c.is_zero())
            .ok_or(SeriesError::ZeroLeadingCoefficient)?;
        let lead = &self.coeffs[lead_idx];
        if !lead.is_unit() {
            return Err(SeriesError::NotInvertible(lead.to_string()));
        }
        let valuation = self.offset24 + self.stride * lead_idx as i64;
        let a = &self.coeffs[lead_idx..];
        let relative = self.order24 - valuation;
        let mut out = Self::zeros(-valuation, self.stride, -valuation + relative);
        let inv_lead = T::one() / lead.clone();
        let nonzero_a: Vec<(usize, &T)> =
            a.iter().enumerate().skip(1).filter(|(_, c)| !c.is_zero()).collect();
        for n in 0..out.coeffs.len() {
            let value = if n == 0 {
                inv_lead.clone()
            } else {
                let mut acc = T::zero();
                for &(i, ai) in &nonzero_a {
                    if i > n {
                        break;
                    }
                    acc.add_product(ai, &out.coeffs[n - i]);
                }
                -(acc * &inv_lead)
            };
            out.coeffs[n] = value;
        }
        Ok(out)
    }

    /// Integer power by binary exponentiation; negative exponents invert first.
    pub fn pow(&self, e: i64) -> Result<Self, SeriesError> {
        if e < 0 {
            return self.inverse()?.pow(-e);
        }
        let mut result = Self::zeros(0, self.stride, self.order24 - self.offset24);
        if let Some(c) = result.coeffs.first_mut() {
            *c = T::one();
        }
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_series(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_series(&base);
            }
        }
        Ok(result)
    }

    /// `f(q) -> f(q^t)`.
    pub fn dilate(&self, t: u32) -> Self {
        assert!(t > 0, "dilation factor must be positive");
        let t = i64::from(t);
        Series {
            offset24: self.offset24 * t,
            stride: self.stride * t,
            coeffs: self.coeffs.clone(),
            order24: self.order24 * t,
        }
    }

    /// Multiply by `q^(e24/24)`.
    pub fn shift24(&self, e24: i64) -> Self {
        Series {
            offset24: self.offset24 + e24,
            stride: self.stride,
            coeffs: self.coeffs.clone(),
            order24: self.order24 + e24,
        }
    }

    /// `tau -> tau + 1/2`, i.e. `q -> -q`, on an integral series.
    pub fn half_shift(&self) -> Result<Self, SeriesError> {
        if let Some(e) = self.first_fractional() {
            return Err(SeriesError::NonIntegralSeries(e));
        }
        let mut out = self.clone();
        for (i, c) in out.coeffs.iter_mut().enumerate() {
            let e = self.offset24 + self.stride * i as i64;
            if !c.is_zero() && (e / 24).rem_euclid(2) == 1 {
                *c = -c.clone();
            }
        }
        Ok(out)
    }

    /// Drop everything at or above `q^(order24/24)`; never widens.
    pub fn truncate24(&self, order24: i64) -> Self {
        let order24 = order24.min(self.order24);
        self.regrid(self.offset24, self.stride, order24)
    }

    pub fn truncate(&self, order: i64) -> Self {
        self.truncate24(24 * order)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Series<U> {
        Series {
            offset24: self.offset24,
            stride: self.stride,
            coeffs: self.coeffs.iter().map(f).collect(),
            order24: self.order24,
        }
    }

    /// Smallest exponent (in 24ths) where the two series differ, comparing
    /// only below the smaller of the two truncation orders.
    pub fn first_difference(&self, other: &Self) -> Option<i64> {
        (self - other).terms().next().map(|(e, _)| e)
    }
}

impl<T: Scalar> PartialEq for Series<T> {
    fn eq(&self, other: &Self) -> bool {
        self.order24 == other.order24 && self.terms().eq(other.terms())
    }
}

impl<T: Scalar> Add for &Series<T> {
    type Output = Series<T>;
    fn add(self, rhs: &Series<T>) -> Series<T> {
        self.zip_with(rhs, |a, b| *a += b)
    }
}

impl<T: Scalar> Sub for &Series<T> {
    type Output = Series<T>;
    fn sub(self, rhs: &Series<T>) -> Series<T> {
        self.zip_with(rhs, |a, b| *a -= b)
    }
}

impl<T: Scalar> Mul for &Series<T> {
    type Output = Series<T>;
    fn mul(self, rhs: &Series<T>) -> Series<T> {
        self.mul_series(rhs)
    }
}

impl<T: Scalar> Neg for &Series<T> {
    type Output = Series<T>;
    fn neg(self) -> Series<T> {
        self.map(|c| -c.clone())
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl<T: Scalar> $tr for Series<T> {
            type Output = Series<T>;
            fn $m(self, rhs: Series<T>) -> Series<T> {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

fn fmt_exponent(e24: i64) -> String {
    let g = gcd(e24, 24);
    let (num, den) = (e24 / g, 24 / g);
    match (num, den) {
        (1, 1) => "q".to_string(),
        (n, 1) => format!("q^{n}"),
        (n, d) => format!("q^({n}/{d})"),
    }
}

impl<T: Scalar> fmt::Display for Series<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            let (neg, mag) = if c.is_negative() { (true, c.abs()) } else { (false, c.clone()) };
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            if e == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", fmt_exponent(e))?;
            } else {
                write!(f, "{mag}*{}", fmt_exponent(e))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O({})", fmt_exponent(self.order24))
    }
}

/// Wire form of a series: nonzero `(exponent24, "p/q")` pairs in ascending
/// exponent order plus the truncation order in 24ths.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesRepr {
    pub order24: i64,
    pub terms: Vec<(i64, String)>,
}

impl<T: Scalar + FromStr> Series<T> {
    pub fn to_repr(&self) -> SeriesRepr {
        SeriesRepr {
            order24: self.order24,
            terms: self.terms().map(|(e, c)| (e, c.to_string())).collect(),
        }
    }

    pub fn from_repr(repr: &SeriesRepr) -> Result<Self, SeriesError> {
        let mut last = None;
        let mut terms = Vec::with_capacity(repr.terms.len());
        for (e, c) in &repr.terms {
            if last.is_some_and(|l| l >= *e) {
                return Err(SeriesError::Parse(format!("exponent {e} out of ascending order")));
            }
            if *e >= repr.order24 {
                return Err(SeriesError::Parse(format!("exponent {e} beyond truncation")));
            }
            last = Some(*e);
            let c = T::from_str(c).map_err(|_| SeriesError::Parse(c.clone()))?;
            terms.push((*e, c));
        }
        Ok(Self::from_terms24(terms, repr.order24))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use proptest::prelude::*;

    fn int(coeffs: &[i64], order: i64) -> Series<i64> {
        let mut v = coeffs.to_vec();
        v.resize(order as usize, 0);
        Series::from_coeffs(v)
    }

    fn rat(coeffs: &[i64], order: i64) -> Series<Rational> {
        int(coeffs, order).map(|&c| Rational::from_integer(c.into()))
    }

    #[test]
    fn add_examples() {
        assert_eq!(&int(&[1, 1], 10) + &int(&[1, -1], 10), int(&[2], 10));
        let s = int(&[3, 0, 5, -1], 10);
        assert_eq!(&s + &Series::zero(10), s);
        let q124 = Series::<i64>::monomial24(1, 1, 240);
        assert_eq!(&q124 + &q124, Series::monomial24(1, 2, 240));
    }

    #[test]
    fn add_takes_minimum_order() {
        let s = &int(&[1], 5) + &int(&[1], 9);
        assert_eq!(s.order24(), 120);
        assert!(s.coefficient(5).is_err());
    }

    #[test]
    fn mixed_grid_addition() {
        let a = Series::<i64>::one(2);
        let b = Series::monomial24(1, 1, 48);
        let s = &a + &b;
        assert_eq!(s.coefficient24(0).unwrap(), 1);
        assert_eq!(s.coefficient24(1).unwrap(), 1);
        assert_eq!(s.coefficient24(2).unwrap(), 0);
        assert!(!s.is_integral());
    }

    #[test]
    fn mul_examples() {
        assert_eq!(&int(&[1, 1], 10) * &int(&[1, -1], 10), int(&[1, 0, -1], 10));
        let a = int(&[1, 2], 10);
        assert_eq!(&a * &a, int(&[1, 4, 4], 10));
        let p = &Series::<i64>::monomial24(1, 1, 240) * &Series::monomial24(23, 1, 240);
        assert_eq!(p.coefficient(1).unwrap(), 1);
        assert!(p.is_integral());
        assert_eq!(p.terms().count(), 1);
    }

    #[test]
    fn mul_order_bookkeeping() {
        // q * (1 + O(q^5)) is known below q^6, intersected with the other side.
        let q = Series::<i64>::monomial24(24, 1, 240);
        let p = &q * &int(&[1], 5);
        assert_eq!(p.order24(), (24 + 120).min(240));
    }

    #[test]
    fn inverse_examples() {
        let inv = int(&[1, -1], 12).inverse().unwrap();
        assert_eq!(inv, int(&[1; 12], 12));
        assert_eq!(int(&[1], 8).inverse().unwrap(), int(&[1], 8));
        let half = rat(&[2], 8).inverse().unwrap();
        assert_eq!(half.coefficient(0).unwrap(), Rational::new(1.into(), 2.into()));
    }

    #[test]
    fn inverse_errors() {
        assert_eq!(int(&[0, 0], 4).inverse(), Err(SeriesError::ZeroLeadingCoefficient));
        assert!(matches!(int(&[2, 1], 4).inverse(), Err(SeriesError::NotInvertible(_))));
    }

    #[test]
    fn inverse_negates_offset() {
        let eta_like = Series::<i64>::from_terms24([(1, 1), (25, -1)], 241);
        let inv = eta_like.inverse().unwrap();
        assert_eq!(inv.offset24(), -1);
        assert_eq!((&eta_like * &inv), Series::one(10));
    }

    #[test]
    fn pow_examples() {
        assert_eq!(int(&[1, 1], 10).pow(2).unwrap(), int(&[1, 2, 1], 10));
        assert_eq!(int(&[4, 1, 7], 10).pow(0).unwrap(), int(&[1], 10));
        assert_eq!(int(&[1, -1], 10).pow(-1).unwrap(), int(&[1; 10], 10));
    }

    #[test]
    fn dilate_examples() {
        assert_eq!(int(&[1, 1], 10).dilate(2), int(&[1, 0, 1], 20));
        let s = int(&[1, 3, 4], 10);
        assert_eq!(s.dilate(1), s);
        assert_eq!(int(&[0, 1, 0, 1], 10).dilate(4), {
            let mut v = vec![0; 40];
            v[4] = 1;
            v[12] = 1;
            Series::from_coeffs(v)
        });
    }

    #[test]
    fn half_shift_examples() {
        assert_eq!(int(&[1, 1, 1], 10).half_shift().unwrap(), int(&[1, -1, 1], 10));
        assert_eq!(int(&[1, 0, 1], 10).half_shift().unwrap(), int(&[1, 0, 1], 10));
        let frac = Series::<i64>::monomial24(1, 1, 48);
        assert_eq!(frac.half_shift(), Err(SeriesError::NonIntegralSeries(1)));
    }

    #[test]
    fn coefficient_examples() {
        let s = int(&[1, 0, 3], 10);
        assert_eq!(s.coefficient(2).unwrap(), 3);
        assert_eq!(s.coefficient(1).unwrap(), 0);
        assert_eq!(Series::<i64>::monomial24(1, 1, 240).coefficient(0).unwrap(), 0);
        assert_eq!(
            s.coefficient(10),
            Err(SeriesError::BeyondTruncation { exponent24: 240, order24: 240 })
        );
    }

    #[test]
    fn display_and_repr() {
        let s = rat(&[1, -2, 0, 3], 4);
        assert_eq!(s.to_string(), "1 - 2*q + 3*q^3 + O(q^4)");
        let eta = Series::<i64>::from_terms24([(1, 1), (25, -1)], 49);
        assert_eq!(eta.to_string(), "q^(1/24) - q^(25/24) + O(q^(49/24))");
        let half = Series::<Rational>::monomial24(24, Rational::new(1.into(), 2.into()), 48);
        let repr = half.to_repr();
        assert_eq!(repr.terms, vec![(24, "1/2".to_string())]);
        assert_eq!(Series::<Rational>::from_repr(&repr).unwrap(), half);
    }

    fn arb_series() -> impl Strategy<Value = Series<i64>> {
        (prop::collection::vec(-5i64..=5, 1..12), 6i64..14).prop_map(|(c, ord)| int(&c, ord))
    }

    fn arb_unit() -> impl Strategy<Value = Series<Rational>> {
        (prop::collection::vec(-9i64..=9, 1..10), prop_oneof![Just(1i64), Just(-3), Just(7)])
            .prop_map(|(mut c, lead)| {
                c[0] = lead;
                rat(&c, 12)
            })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_series(), b in arb_series(), c in arb_series()) {
            prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        }

        #[test]
        fn inverse_is_two_sided(a in arb_unit()) {
            let inv = a.inverse().unwrap();
            prop_assert_eq!(&a * &inv, Series::one(12));
            prop_assert_eq!(&inv * &a, Series::one(12));
        }

        #[test]
        fn dilate_composes(a in arb_series(), s in 1u32..5, t in 1u32..5) {
            prop_assert_eq!(a.dilate(s * t), a.dilate(s).dilate(t));
        }

        #[test]
        fn half_shift_involutive_homomorphism(a in arb_series(), b in arb_series()) {
            prop_assert_eq!(a.half_shift().unwrap().half_shift().unwrap(), a.clone());
            prop_assert_eq!(
                (&a * &b).half_shift().unwrap(),
                &a.half_shift().unwrap() * &b.half_shift().unwrap()
            );
        }

        #[test]
        fn repr_roundtrip(a in arb_unit(), shift in -30i64..30) {
            let s = a.shift24(shift);
            prop_assert_eq!(Series::<Rational>::from_repr(&s.to_repr()).unwrap(), s);
        }
    }
}

//! Eta quotients on `Gamma_0(N)`: expansion, the Newman/Gordon–Hughes
//! modularity conditions, cusp widths and the Ligozat order formula.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::divisors;
use crate::series::{Scalar, Series};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EtaError {
    #[error("level must be positive")]
    ZeroLevel,
    #[error("{d} does not divide the level {level}")]
    NotADivisor { d: u64, level: u64 },
    #[error("cannot parse eta quotient {0:?}: expected ascending \"d:r\" pairs such as \"1:-2,2:5,4:-2\"")]
    Parse(String),
    #[error("cannot parse cusp {0:?}: expected \"a/c\"")]
    CuspParse(String),
    #[error("invalid cusp {a}/{c} at level {level}: need c > 0, c | N and gcd(a, c) = 1")]
    InvalidCusp { a: i64, c: u64, level: u64 },
    #[error("eta quotient at level {quotient} cannot be viewed at level {cusp}")]
    LevelMismatch { quotient: u64, cusp: u64 },
    #[error("modularity conditions fail for {quotient} at level {level}: {report}")]
    ConditionsNotMet { quotient: String, level: u64, report: String },
}

/// `prod_{d | N} eta(d tau)^{r_d}`. Zero exponents are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EtaQuotient {
    level: u64,
    exponents: BTreeMap<u64, i64>,
}

impl EtaQuotient {
    pub fn new<I>(level: u64, exponents: I) -> Result<Self, EtaError>
    where
        I: IntoIterator<Item = (u64, i64)>,
    {
        if level == 0 {
            return Err(EtaError::ZeroLevel);
        }
        let mut map = BTreeMap::new();
        for (d, r) in exponents {
            if d == 0 || level % d != 0 {
                return Err(EtaError::NotADivisor { d, level });
            }
            *map.entry(d).or_insert(0) += r;
        }
        map.retain(|_, r| *r != 0);
        Ok(EtaQuotient { level, exponents: map })
    }

    /// Quotient at the smallest level containing every divisor.
    pub fn from_exponents<I>(exponents: I) -> Self
    where
        I: IntoIterator<Item = (u64, i64)>,
    {
        let pairs: Vec<(u64, i64)> = exponents.into_iter().collect();
        let level = pairs.iter().filter(|(_, r)| *r != 0).fold(1u64, |l, (d, _)| l.lcm(d));
        Self::new(level, pairs).expect("every divisor divides the lcm")
    }

    /// Parse `"d:r,d:r,..."` with strictly ascending divisors and no spaces.
    pub fn parse(s: &str, level: u64) -> Result<Self, EtaError> {
        Self::new(level, parse_pairs(s)?)
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn exponents(&self) -> &BTreeMap<u64, i64> {
        &self.exponents
    }

    pub fn exponent(&self, d: u64) -> i64 {
        self.exponents.get(&d).copied().unwrap_or(0)
    }

    /// `sum r_d`, twice the weight.
    pub fn weight_twice(&self) -> i64 {
        self.exponents.values().sum()
    }

    pub fn weight(&self) -> Rational {
        Rational::new(self.weight_twice().into(), 2.into())
    }

    /// `sum d r_d`: the leading exponent of the expansion, in 24ths.
    pub fn prefactor24(&self) -> i64 {
        self.exponents.iter().map(|(&d, &r)| d as i64 * r).sum()
    }

    /// Same quotient regarded at a multiple of its level.
    pub fn with_level(&self, level: u64) -> Result<Self, EtaError> {
        if level == 0 || level % self.level != 0 {
            return Err(EtaError::LevelMismatch { quotient: self.level, cusp: level });
        }
        Ok(EtaQuotient { level, exponents: self.exponents.clone() })
    }

    /// Product of quotients (exponent maps add), at the lcm of the levels.
    pub fn mul(&self, other: &Self) -> Self {
        let level = self.level.lcm(&other.level);
        let pairs = self.exponents.iter().chain(&other.exponents).map(|(&d, &r)| (d, r));
        Self::new(level, pairs).expect("divisors of either level divide the lcm")
    }

    pub fn pow(&self, e: i64) -> Self {
        let pairs = self.exponents.iter().map(|(&d, &r)| (d, r * e));
        Self::new(self.level, pairs).expect("same divisors")
    }

    /// `f(tau) -> f(t tau)`.
    pub fn dilate(&self, t: u64) -> Self {
        assert!(t > 0, "dilation factor must be positive");
        let pairs = self.exponents.iter().map(|(&d, &r)| (d * t, r));
        Self::new(self.level * t, pairs).expect("scaled divisors divide the scaled level")
    }
}

impl fmt::Display for EtaQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.exponents.iter().map(|(d, r)| format!("{d}:{r}")).collect();
        f.write_str(&parts.join(","))
    }
}

/// Coefficients of `prod_{j>=1} (1 - q^j)` below `q^len` from the pentagonal
/// number theorem.
pub fn euler_product<T: Scalar>(len: usize) -> Vec<T> {
    let mut out = vec![T::zero(); len];
    for (e, sign) in pentagonal_terms(len) {
        out[e] = if sign > 0 { T::one() } else { -T::one() };
    }
    out
}

/// `(exponent, sign)` of the pentagonal expansion below `q^len`.
fn pentagonal_terms(len: usize) -> Vec<(usize, i8)> {
    let mut terms = Vec::new();
    for k in 0i64.. {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let a = (k * (3 * k - 1) / 2) as usize;
        if a >= len {
            break;
        }
        terms.push((a, sign));
        if k > 0 {
            let b = (k * (3 * k + 1) / 2) as usize;
            if b < len {
                terms.push((b, sign));
            }
        }
    }
    terms.sort_unstable();
    terms
}

/// `eta(tau) = q^(1/24) prod_{j<order} (1 - q^j)`, known below `q^(order + 1/24)`.
pub fn eta_expand<T: Scalar>(order: i64) -> Series<T> {
    assert!(order >= 1, "order must be at least 1");
    Series::from_coeffs(euler_product(order as usize)).shift24(1)
}

/// `prod_j (1 - q^{d j})^r` below `q^len` using the power recurrence
/// `n b_n = sum_i ((r+1) i - n) a_i b_{n-i}` on the sparse pentagonal series.
fn euler_power<T: Scalar>(d: usize, r: i64, len: usize) -> Vec<T> {
    let base: Vec<(usize, T)> = pentagonal_terms(len.div_ceil(d))
        .into_iter()
        .skip(1)
        .map(|(e, s)| (e * d, if s > 0 { T::one() } else { -T::one() }))
        .filter(|(e, _)| *e < len)
        .collect();
    let mut b = vec![T::zero(); len];
    if len == 0 {
        return b;
    }
    b[0] = T::one();
    for n in 1..len {
        let mut acc = T::zero();
        for (i, a) in &base {
            if *i > n {
                break;
            }
            let w = T::from_i64((r + 1) * *i as i64 - n as i64).expect("small integer");
            let mut term = a.clone() * &b[n - i];
            term *= &w;
            acc += &term;
        }
        b[n] = acc / T::from_i64(n as i64).expect("small integer");
    }
    b
}

fn ceil_div24(n: i64) -> usize {
    ((n + 23) / 24) as usize
}

/// Expansion of an eta quotient, known below `q^order`.
pub fn quotient_expand<T: Scalar>(f: &EtaQuotient, order: i64) -> Series<T> {
    let prefactor = f.prefactor24();
    let len = ceil_div24((24 * order - prefactor).max(0));
    let mut product = Series::from_coeffs({
        let mut one = vec![T::zero(); len];
        if len > 0 {
            one[0] = T::one();
        }
        one
    });
    for (&d, &r) in f.exponents() {
        let factor = Series::from_coeffs(euler_power::<T>(d as usize, r, len));
        product = product.mul_series(&factor);
    }
    product.shift24(prefactor).truncate24(24 * order)
}

/// Outcome of the two congruence conditions plus the attached character.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub level: u64,
    pub sum_d_rd_mod24: i64,
    pub sum_nd_rd_mod24: i64,
    pub weight_integral: bool,
    pub passes: bool,
    /// `prod d^{r_d}` as an exact rational.
    pub character_s: String,
    /// Squarefree kernel of `(-1)^k s`; `1` means trivial character.
    /// Absent when the weight is not an integer.
    pub character_discriminant: Option<i64>,
}

impl fmt::Display for ConditionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "sum d*r_d = {} (mod 24), sum (N/d)*r_d = {} (mod 24), integral weight: {}",
            self.sum_d_rd_mod24, self.sum_nd_rd_mod24, self.weight_integral
        )
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn valuation(mut n: u64, p: u64) -> i64 {
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

pub fn check_gamma0_conditions(f: &EtaQuotient) -> ConditionReport {
    let n = f.level();
    let sum_d = f.prefactor24();
    let sum_nd: i64 = f.exponents().iter().map(|(&d, &r)| (n / d) as i64 * r).sum();
    let weight_integral = f.weight_twice() % 2 == 0;
    let mut s = Rational::one();
    for (&d, &r) in f.exponents() {
        let base = Rational::from_integer(BigInt::from(d));
        s *= base.pow(r as i32);
    }
    let character_discriminant = weight_integral.then(|| {
        let sign = if (f.weight_twice() / 2) % 2 == 0 { 1 } else { -1 };
        let kernel: i64 = prime_factors(n)
            .into_iter()
            .filter(|&p| {
                let e: i64 = f.exponents().iter().map(|(&d, &r)| valuation(d, p) * r).sum();
                e % 2 != 0
            })
            .map(|p| p as i64)
            .product();
        sign * kernel
    });
    let sum_d_rd_mod24 = sum_d.rem_euclid(24);
    let sum_nd_rd_mod24 = sum_nd.rem_euclid(24);
    ConditionReport {
        level: n,
        sum_d_rd_mod24,
        sum_nd_rd_mod24,
        weight_integral,
        passes: weight_integral && sum_d_rd_mod24 == 0 && sum_nd_rd_mod24 == 0,
        character_s: s.to_string(),
        character_discriminant,
    }
}

/// A cusp `a/c` of `Gamma_0(N)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CuspLabel {
    a: i64,
    c: u64,
    level: u64,
}

impl CuspLabel {
    pub fn new(a: i64, c: u64, level: u64) -> Result<Self, EtaError> {
        if c == 0 || level == 0 || level % c != 0 || a.gcd(&(c as i64)) != 1 {
            return Err(EtaError::InvalidCusp { a, c, level });
        }
        Ok(CuspLabel { a, c, level })
    }

    /// Parse `"a/c"`.
    pub fn parse(s: &str, level: u64) -> Result<Self, EtaError> {
        let (a, c) = s.split_once('/').ok_or_else(|| EtaError::CuspParse(s.to_string()))?;
        let a: i64 = a.parse().map_err(|_| EtaError::CuspParse(s.to_string()))?;
        let c: u64 = c.parse().map_err(|_| EtaError::CuspParse(s.to_string()))?;
        Self::new(a, c, level)
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn c(&self) -> u64 {
        self.c
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn width(&self) -> u64 {
        cusp_width(self.c, self.level)
    }
}

impl fmt::Display for CuspLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.a, self.c)
    }
}

/// `N / gcd(c^2, N)`.
pub fn cusp_width(c: u64, level: u64) -> u64 {
    assert!(c > 0 && level % c == 0, "cusp denominator {c} must divide {level}");
    level / (c * c).gcd(&level)
}

/// Order of vanishing at `a/c`:
/// `N/24 * sum_d gcd(c,d)^2 r_d / (gcd(c, N/c) c d)`.
pub fn ligozat_order(f: &EtaQuotient, cusp: &CuspLabel) -> Result<Rational, EtaError> {
    let f = f.with_level(cusp.level())?;
    let report = check_gamma0_conditions(&f);
    if !report.passes {
        return Err(EtaError::ConditionsNotMet {
            quotient: f.to_string(),
            level: f.level(),
            report: report.to_string(),
        });
    }
    let n = f.level();
    let c = cusp.c();
    let g = c.gcd(&(n / c));
    let mut sum = Rational::zero();
    for (&d, &r) in f.exponents() {
        let num = BigInt::from(c.gcd(&d).pow(2)) * BigInt::from(r);
        let den = BigInt::from(g * c * d);
        sum += Rational::new(num, den);
    }
    Ok(sum * Rational::new(BigInt::from(n), BigInt::from(24)))
}

impl FromStr for EtaQuotient {
    type Err = EtaError;

    /// Parses at the lcm of the listed divisors.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(Self::from_exponents(parse_pairs(s)?))
    }
}

fn parse_pairs(s: &str) -> Result<Vec<(u64, i64)>, EtaError> {
    let err = || EtaError::Parse(s.to_string());
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    let mut pairs: Vec<(u64, i64)> = Vec::new();
    for part in s.split(',') {
        let (d, r) = part.split_once(':').ok_or_else(err)?;
        let magnitude = r.strip_prefix('-').unwrap_or(r);
        if !digits(d) || !digits(magnitude) {
            return Err(err());
        }
        let d: u64 = d.parse().map_err(|_| err())?;
        let r: i64 = r.parse().map_err(|_| err())?;
        if pairs.last().is_some_and(|&(last, _)| last >= d) {
            return Err(err());
        }
        pairs.push((d, r));
    }
    Ok(pairs)
}

/// Divisors of the level with their exponents, including zeros.
pub fn exponent_table(f: &EtaQuotient) -> Vec<(u64, i64)> {
    divisors(f.level()).into_iter().map(|d| (d, f.exponent(d))).collect()
}

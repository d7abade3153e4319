//! Kronecker symbols, divisor sums and Bernoulli numbers.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Pow, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::Series;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("unsupported character: only (-4/.) and (-2/.) are available, got discriminant {0}")]
    UnsupportedCharacter(i64),
}

/// Kronecker symbol `(d/n)` for arbitrary integers.
pub fn kronecker(d: i64, n: i64) -> i32 {
    if n == 0 {
        return i32::from(d.abs() == 1);
    }
    let mut result = 1;
    let mut n = n;
    if n < 0 {
        n = -n;
        if d < 0 {
            result = -result;
        }
    }
    let twos = n.trailing_zeros();
    if twos > 0 {
        if d % 2 == 0 {
            return 0;
        }
        n >>= twos;
        if twos % 2 == 1 && matches!(d.rem_euclid(8), 3 | 5) {
            result = -result;
        }
    }
    result * jacobi(d.rem_euclid(n), n)
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
fn jacobi(a: i64, n: i64) -> i32 {
    debug_assert!(n > 0 && n % 2 == 1);
    let (mut a, mut n) = (a.rem_euclid(n), n);
    let mut result = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// One of the two odd quadratic characters used throughout: `(-4/.)` mod 4
/// and `(-2/.)` mod 8.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CharacterId {
    Minus4,
    Minus2,
}

impl CharacterId {
    pub fn from_discriminant(d: i64) -> Result<Self, ArithError> {
        match d {
            -4 => Ok(CharacterId::Minus4),
            -2 => Ok(CharacterId::Minus2),
            other => Err(ArithError::UnsupportedCharacter(other)),
        }
    }

    pub fn discriminant(self) -> i64 {
        match self {
            CharacterId::Minus4 => -4,
            CharacterId::Minus2 => -2,
        }
    }

    pub fn modulus(self) -> u64 {
        match self {
            CharacterId::Minus4 => 4,
            CharacterId::Minus2 => 8,
        }
    }

    pub fn value(self, n: i64) -> i32 {
        kronecker(self.discriminant(), n)
    }
}

impl fmt::Display for CharacterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chi={}", self.discriminant())
    }
}

/// The three divisor functions: `sigma_k`, `sigma^inf_{k,chi}` (character on
/// the divisor) and `sigma^0_{k,chi}` (character on the codivisor).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DivisorSumKind {
    Plain { weight: u32 },
    TwistedInf { weight: u32, character: CharacterId },
    TwistedZero { weight: u32, character: CharacterId },
}

impl DivisorSumKind {
    pub fn weight(self) -> u32 {
        match self {
            DivisorSumKind::Plain { weight }
            | DivisorSumKind::TwistedInf { weight, .. }
            | DivisorSumKind::TwistedZero { weight, .. } => weight,
        }
    }

    pub fn character(self) -> Option<CharacterId> {
        match self {
            DivisorSumKind::Plain { .. } => None,
            DivisorSumKind::TwistedInf { character, .. }
            | DivisorSumKind::TwistedZero { character, .. } => Some(character),
        }
    }

    /// Short tag used in the JSON formula schema.
    pub fn tag(self) -> &'static str {
        match self {
            DivisorSumKind::Plain { .. } => "sigma",
            DivisorSumKind::TwistedInf { .. } => "sigma_inf",
            DivisorSumKind::TwistedZero { .. } => "sigma_0",
        }
    }

    /// Weight-zero sums with the character on the codivisor coincide with
    /// the divisor-twisted ones (re-index `d -> n/d`).
    pub fn canonical(self) -> Self {
        match self {
            DivisorSumKind::TwistedZero { weight: 0, character } => {
                DivisorSumKind::TwistedInf { weight: 0, character }
            }
            other => other,
        }
    }
}

impl fmt::Display for DivisorSumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            DivisorSumKind::Plain { weight } => write!(f, "sigma_{weight}"),
            DivisorSumKind::TwistedInf { weight, character } => {
                write!(f, "sigma_inf_{weight}[{character}]")
            }
            DivisorSumKind::TwistedZero { weight, character } => {
                write!(f, "sigma_0_{weight}[{character}]")
            }
        }
    }
}

/// Positive divisors of `n` in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Divisor sum at a positive integer argument.
pub fn divisor_sum_at(kind: DivisorSumKind, n: u64) -> BigInt {
    if n == 0 {
        return BigInt::zero();
    }
    let weight = kind.weight();
    divisors(n)
        .into_iter()
        .map(|d| {
            let chi = match kind {
                DivisorSumKind::Plain { .. } => 1,
                DivisorSumKind::TwistedInf { character, .. } => character.value(d as i64),
                DivisorSumKind::TwistedZero { character, .. } => character.value((n / d) as i64),
            };
            match chi {
                0 => BigInt::zero(),
                c => BigInt::from(c) * BigInt::from(d).pow(weight),
            }
        })
        .sum()
}

/// Divisor sum at a rational argument; zero unless `n` is a positive integer.
pub fn divisor_sum(kind: DivisorSumKind, n: &Rational) -> BigInt {
    if !n.is_integer() || !n.is_positive() {
        return BigInt::zero();
    }
    match u64::try_from(n.to_integer()) {
        Ok(n) => divisor_sum_at(kind, n),
        Err(_) => panic!("divisor sum argument {n} exceeds u64"),
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

/// `k!` times the `t^k` coefficient of `t/(e^{f t} - 1) * sum_j w_j e^{j t}`.
fn egf_coefficient(k: u32, f: u64, weights: &[(u64, i32)]) -> Rational {
    let len = k as usize + 1;
    let fb = BigInt::from(f);
    // (e^{ft} - 1)/t = sum_n f^{n+1} t^n / (n+1)!
    let denominator: Vec<Rational> = (0..len as u32)
        .map(|n| Rational::new(fb.clone().pow(n + 1), factorial(n + 1)))
        .collect();
    let numerator: Vec<Rational> = (0..len as u32)
        .map(|n| {
            let s: BigInt = weights
                .iter()
                .map(|&(j, w)| BigInt::from(w) * BigInt::from(j).pow(n))
                .sum();
            Rational::new(s, factorial(n))
        })
        .collect();
    let quotient = Series::from_coeffs(denominator)
        .inverse()
        .expect("(e^{ft}-1)/t has constant term f")
        .mul_series(&Series::from_coeffs(numerator));
    let c = quotient.coefficient(k as i64).expect("within truncation");
    c * Rational::from_integer(factorial(k))
}

/// Ordinary Bernoulli number from `t/(e^t - 1)` (so `B_1 = -1/2`).
pub fn bernoulli(k: u32) -> Rational {
    egf_coefficient(k, 1, &[(0, 1)])
}

/// Generalized Bernoulli number `B_{k,f}` from
/// `t/(e^{f t} - 1) * sum_{j=1}^{f} chi(j) e^{j t}` with `f` the modulus of `chi`.
pub fn gen_bernoulli(k: u32, character: CharacterId) -> Rational {
    let f = character.modulus();
    let weights: Vec<(u64, i32)> = (1..=f).map(|j| (j, character.value(j as i64))).collect();
    egf_coefficient(k, f, &weights)
}

/// `gen_bernoulli` addressed by discriminant.
pub fn gen_bernoulli_by_discriminant(k: u32, d: i64) -> Result<Rational, ArithError> {
    CharacterId::from_discriminant(d).map(|chi| gen_bernoulli(k, chi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(-4, 5), 1);
        assert_eq!(kronecker(-4, 2), 0);
        assert_eq!(kronecker(-2, 5), -1);
        assert_eq!(kronecker(-2, 0), 0);
        assert_eq!(kronecker(1, 0), 1);
        assert_eq!(kronecker(-4, -1), -1);
        assert_eq!(kronecker(-2, 3), 1);
        assert_eq!(kronecker(-2, 7), -1);
    }

    /// Euler's criterion for odd primes.
    #[test]
    fn kronecker_matches_euler_criterion() {
        for p in [3i64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43] {
            for d in [-4i64, -2, 2, 3, 5, -3] {
                let a = d.rem_euclid(p);
                let mut r = 1i64;
                for _ in 0..(p - 1) / 2 {
                    r = r * a % p;
                }
                let expect = match r {
                    0 => 0,
                    1 => 1,
                    _ => -1,
                };
                assert_eq!(kronecker(d, p), expect, "({d}/{p})");
            }
        }
    }

    #[test]
    fn characters_are_odd_and_periodic() {
        for chi in [CharacterId::Minus4, CharacterId::Minus2] {
            assert_eq!(chi.value(-1), -1);
            let f = chi.modulus() as i64;
            for n in (1..=1000).step_by(2) {
                assert_eq!(chi.value(n), chi.value(n + f));
            }
            for n in (0..100).step_by(2) {
                assert_eq!(chi.value(n), 0);
            }
        }
        assert_eq!(CharacterId::from_discriminant(-3), Err(ArithError::UnsupportedCharacter(-3)));
    }

    #[test]
    fn divisor_sum_examples() {
        assert_eq!(divisor_sum(DivisorSumKind::Plain { weight: 1 }, &q(6, 1)), 12.into());
        assert_eq!(divisor_sum(DivisorSumKind::Plain { weight: 3 }, &q(7, 2)), 0.into());
        let inf = DivisorSumKind::TwistedInf { weight: 0, character: CharacterId::Minus4 };
        assert_eq!(divisor_sum(inf, &q(5, 1)), 2.into());
        assert_eq!(divisor_sum(inf, &q(0, 1)), 0.into());
        assert_eq!(divisor_sum(inf, &q(-5, 1)), 0.into());
    }

    #[test]
    fn divisors_sorted() {
        assert_eq!(divisors(36), vec![1, 2, 3, 4, 6, 9, 12, 18, 36]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(13), vec![1, 13]);
    }

    #[test]
    fn divisor_sum_double_loop_oracle() {
        let mut kinds = vec![];
        for weight in 0..4 {
            kinds.push(DivisorSumKind::Plain { weight });
            for character in [CharacterId::Minus4, CharacterId::Minus2] {
                kinds.push(DivisorSumKind::TwistedInf { weight, character });
                kinds.push(DivisorSumKind::TwistedZero { weight, character });
            }
        }
        for kind in kinds {
            for n in 1..=200i64 {
                let mut expect = 0i64;
                for d in 1..=n {
                    for e in 1..=n {
                        if d * e != n {
                            continue;
                        }
                        let chi = match kind {
                            DivisorSumKind::Plain { .. } => 1,
                            DivisorSumKind::TwistedInf { character, .. } => character.value(d),
                            DivisorSumKind::TwistedZero { character, .. } => character.value(e),
                        };
                        expect += i64::from(chi) * d.pow(kind.weight());
                    }
                }
                assert_eq!(divisor_sum_at(kind, n as u64), expect.into(), "{kind} at {n}");
            }
        }
    }

    #[test]
    fn weight_zero_twists_agree() {
        for character in [CharacterId::Minus4, CharacterId::Minus2] {
            for n in 1..=500 {
                assert_eq!(
                    divisor_sum_at(DivisorSumKind::TwistedInf { weight: 0, character }, n),
                    divisor_sum_at(DivisorSumKind::TwistedZero { weight: 0, character }, n)
                );
            }
        }
    }

    /// Independent route: `sum_{j<=m} C(m+1, j) B_j = 0`.
    fn bernoulli_recurrence(max: usize) -> Vec<Rational> {
        let mut b = vec![Rational::one()];
        for m in 1..=max {
            let mut s = Rational::zero();
            let mut binom = BigInt::one();
            for (j, bj) in b.iter().enumerate() {
                s += Rational::from_integer(binom.clone()) * bj;
                binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
            }
            b.push(-s / Rational::from_integer(BigInt::from(m + 1)));
        }
        b
    }

    /// Independent route: `B_{k,chi} = f^{k-1} sum_a chi(a) B_k(a/f)`.
    fn gen_bernoulli_polynomial(k: usize, chi: CharacterId) -> Rational {
        let b = bernoulli_recurrence(k);
        let f = chi.modulus() as i64;
        let mut total = Rational::zero();
        for a in 1..=f {
            let x = q(a, f);
            let mut poly = Rational::zero();
            let mut binom = BigInt::one();
            for (j, bj) in b.iter().enumerate().take(k + 1) {
                poly += Rational::from_integer(binom.clone()) * bj * x.clone().pow((k - j) as i32);
                binom = binom * BigInt::from(k - j) / BigInt::from(j + 1);
            }
            total += Rational::from_integer(chi.value(a).into()) * poly;
        }
        total * Rational::from_integer(BigInt::from(f)).pow(k as i32 - 1)
    }

    #[test]
    fn bernoulli_examples() {
        assert_eq!(bernoulli(0), q(1, 1));
        assert_eq!(bernoulli(1), q(-1, 2));
        assert_eq!(bernoulli(2), q(1, 6));
        assert_eq!(bernoulli(4), q(-1, 30));
        let oracle = bernoulli_recurrence(20);
        for (k, b) in oracle.iter().enumerate() {
            assert_eq!(&bernoulli(k as u32), b, "B_{k}");
        }
    }

    #[test]
    fn gen_bernoulli_examples() {
        assert_eq!(gen_bernoulli(1, CharacterId::Minus4), q(-1, 2));
        assert_eq!(gen_bernoulli(1, CharacterId::Minus2), q(-1, 1));
        assert_eq!(gen_bernoulli(3, CharacterId::Minus4), q(3, 2));
        assert_eq!(gen_bernoulli(3, CharacterId::Minus2), q(9, 1));
        assert!(gen_bernoulli_by_discriminant(1, 5).is_err());
        for chi in [CharacterId::Minus4, CharacterId::Minus2] {
            for k in 0..=12 {
                assert_eq!(gen_bernoulli(k, chi), gen_bernoulli_polynomial(k as usize, chi));
            }
        }
    }

    #[test]
    fn gen_bernoulli_even_weights_vanish() {
        for chi in [CharacterId::Minus4, CharacterId::Minus2] {
            for k in (0..=10).step_by(2) {
                assert!(gen_bernoulli(k, chi).is_zero(), "B_{{{k},{chi}}} should vanish");
            }
        }
    }

    proptest! {
        #[test]
        fn kronecker_completely_multiplicative(m in -2000i64..2000, n in -2000i64..2000) {
            for d in [-4i64, -2] {
                prop_assert_eq!(kronecker(d, m * n), kronecker(d, m) * kronecker(d, n));
            }
        }
    }
}

//! Eisenstein series `E_k`, `E^inf_{k,chi}`, `E^0_{k,chi}` and the weight-k
//! combinations `F_{k,m}` whose coefficients give the divisor-function part
//! of each representation formula.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};
use thiserror::Error;

use crate::arith::{bernoulli, divisor_sum_at, gen_bernoulli, CharacterId, DivisorSumKind};
use crate::repcount::Multiplier;
use crate::series::Series;
use crate::{to_rational, QSeries, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EisensteinError {
    #[error("weight {weight} does not match the parity of the {family} family")]
    ParityMismatch { family: EisensteinFamily, weight: u32 },
    #[error("weight {0} is too small for the level one family (need k >= 2)")]
    WeightTooSmall(u32),
    #[error("the {0} family needs a character")]
    MissingCharacter(EisensteinFamily),
    #[error("the level one family takes no character")]
    UnexpectedCharacter,
    #[error("dilation must be positive")]
    ZeroDilation,
    #[error("weight must be positive")]
    ZeroWeight,
    #[error("truncation order {0} is below the minimum of 8")]
    OrderTooSmall(i64),
    #[error("F_{{{k},{m}}} has constant term {constant}, expected 1")]
    ConstantTermNotOne { m: u32, k: u32, constant: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EisensteinFamily {
    LevelOne,
    TwistedInf,
    TwistedZero,
}

impl fmt::Display for EisensteinFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EisensteinFamily::LevelOne => "level one",
            EisensteinFamily::TwistedInf => "E^inf",
            EisensteinFamily::TwistedZero => "E^0",
        })
    }
}

/// One Eisenstein series `E(t tau)`; only valid combinations can be built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EisensteinSpec {
    family: EisensteinFamily,
    weight: u32,
    character: Option<CharacterId>,
    dilation: u32,
}

impl EisensteinSpec {
    pub fn new(
        family: EisensteinFamily,
        weight: u32,
        character: Option<CharacterId>,
        dilation: u32,
    ) -> Result<Self, EisensteinError> {
        if dilation == 0 {
            return Err(EisensteinError::ZeroDilation);
        }
        if weight == 0 {
            return Err(EisensteinError::ZeroWeight);
        }
        match family {
            EisensteinFamily::LevelOne => {
                if character.is_some() {
                    return Err(EisensteinError::UnexpectedCharacter);
                }
                if weight % 2 == 1 {
                    return Err(EisensteinError::ParityMismatch { family, weight });
                }
                if weight < 2 {
                    return Err(EisensteinError::WeightTooSmall(weight));
                }
            }
            EisensteinFamily::TwistedInf | EisensteinFamily::TwistedZero => {
                if character.is_none() {
                    return Err(EisensteinError::MissingCharacter(family));
                }
                // Both supported characters are odd.
                if weight % 2 == 0 {
                    return Err(EisensteinError::ParityMismatch { family, weight });
                }
            }
        }
        Ok(EisensteinSpec { family, weight, character, dilation })
    }

    pub fn level_one(weight: u32) -> Result<Self, EisensteinError> {
        Self::new(EisensteinFamily::LevelOne, weight, None, 1)
    }

    pub fn twisted_inf(weight: u32, character: CharacterId) -> Result<Self, EisensteinError> {
        Self::new(EisensteinFamily::TwistedInf, weight, Some(character), 1)
    }

    pub fn twisted_zero(weight: u32, character: CharacterId) -> Result<Self, EisensteinError> {
        Self::new(EisensteinFamily::TwistedZero, weight, Some(character), 1)
    }

    /// The same series at `t tau` (dilations compose).
    pub fn dilated(self, t: u32) -> Self {
        assert!(t > 0, "dilation must be positive");
        EisensteinSpec { dilation: self.dilation * t, ..self }
    }

    pub fn family(&self) -> EisensteinFamily {
        self.family
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn character(&self) -> Option<CharacterId> {
        self.character
    }

    pub fn dilation(&self) -> u32 {
        self.dilation
    }

    /// Divisor function multiplying `q^n` for `n >= 1` (before dilation).
    pub fn divisor_kind(&self) -> DivisorSumKind {
        let weight = self.weight - 1;
        match (self.family, self.character) {
            (EisensteinFamily::LevelOne, _) => DivisorSumKind::Plain { weight },
            (EisensteinFamily::TwistedInf, Some(character)) => {
                DivisorSumKind::TwistedInf { weight, character }
            }
            (EisensteinFamily::TwistedZero, Some(character)) => {
                DivisorSumKind::TwistedZero { weight, character }
            }
            _ => unreachable!("validated at construction"),
        }
    }

    /// `-2k / B`, with `B` the ordinary or generalized Bernoulli number.
    pub fn normalizer(&self) -> Rational {
        let b = match self.character {
            None => bernoulli(self.weight),
            Some(chi) => gen_bernoulli(self.weight, chi),
        };
        -Rational::from_integer(BigInt::from(2 * self.weight)) / b
    }

    /// `1` for `E_k` and `E^inf`, `delta_{k,1}` for `E^0`.
    pub fn constant_term(&self) -> Rational {
        match self.family {
            EisensteinFamily::TwistedZero if self.weight != 1 => Rational::zero(),
            _ => Rational::one(),
        }
    }
}

impl fmt::Display for EisensteinSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match (self.family, self.character) {
            (EisensteinFamily::LevelOne, _) => format!("E_{}", self.weight),
            (EisensteinFamily::TwistedInf, Some(c)) => format!("E^inf_{{{},{}}}", self.weight, c),
            (EisensteinFamily::TwistedZero, Some(c)) => format!("E^0_{{{},{}}}", self.weight, c),
            _ => unreachable!(),
        };
        match self.dilation {
            1 => write!(f, "{name}(tau)"),
            t => write!(f, "{name}({t}tau)"),
        }
    }
}

/// q-expansion of the spec, known below `q^order`.
pub fn eisenstein_series(spec: &EisensteinSpec, order: i64) -> QSeries {
    let len = order.max(0) as usize;
    let t = spec.dilation() as usize;
    let scale = spec.normalizer();
    let kind = spec.divisor_kind();
    let mut coeffs = vec![Rational::zero(); len];
    if len > 0 {
        coeffs[0] = spec.constant_term();
    }
    for n in (t..len).step_by(t) {
        let sigma = divisor_sum_at(kind, (n / t) as u64);
        if !sigma.is_zero() {
            coeffs[n] = &scale * to_rational(&sigma);
        }
    }
    Series::from_coeffs(coeffs)
}

/// Check `E(tau + 1/2)` against its stated combination of dilates.
pub fn check_half_period(spec: &EisensteinSpec, order: i64) -> Result<bool, EisensteinError> {
    if order < 8 {
        return Err(EisensteinError::OrderTooSmall(order));
    }
    let base = EisensteinSpec { dilation: 1, ..*spec };
    let e = |t: u32| eisenstein_series(&base.dilated(t), order);
    let lhs = e(1).half_shift().expect("Eisenstein series are integral");
    let two_k = Rational::from_integer(BigInt::from(2).pow(base.weight()));
    let int = |n: i64| Rational::from_integer(n.into());
    let rhs = match base.family() {
        EisensteinFamily::LevelOne => {
            &(&(-&e(1)) + &e(2).scale(&(&two_k + int(2)))) - &e(4).scale(&two_k)
        }
        EisensteinFamily::TwistedInf => &(-&e(1)) + &e(2).scale(&int(2)),
        EisensteinFamily::TwistedZero => &(-&e(1)) + &e(2).scale(&two_k),
    };
    Ok(lhs == rhs)
}

/// `F_{k,m} = normalization * sum coeff_i E_i`, with constant term 1.
#[derive(Debug, Clone, PartialEq)]
pub struct FCombination {
    pub m: Multiplier,
    pub k: u32,
    pub terms: Vec<(Rational, EisensteinSpec)>,
    pub normalization: Rational,
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn pow2(e: u32) -> Rational {
    Rational::from_integer(BigInt::from(2).pow(e))
}

fn sign(e: u32) -> Rational {
    if e % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

impl FCombination {
    pub fn new(m: Multiplier, k: u32) -> Result<Self, EisensteinError> {
        if k == 0 {
            return Err(EisensteinError::ZeroWeight);
        }
        let delta = if k == 1 { int(2) } else { int(1) };
        let odd = k % 2 == 1;
        let (terms, normalization) = match (m, odd) {
            (Multiplier::One, false) => {
                let e = EisensteinSpec::level_one(k)?;
                let s = sign(k / 2);
                let terms = vec![
                    (s.clone(), e),
                    (-(int(1) + &s), e.dilated(2)),
                    (pow2(k), e.dilated(4)),
                ];
                (terms, (pow2(k) - int(1)).recip())
            }
            (Multiplier::One, true) => {
                let chi = CharacterId::Minus4;
                let terms = vec![
                    (int(1), EisensteinSpec::twisted_inf(k, chi)?),
                    (sign((k - 1) / 2) * pow2(k - 1), EisensteinSpec::twisted_zero(k, chi)?),
                ];
                (terms, delta.recip())
            }
            (Multiplier::Two, true) => {
                let chi = CharacterId::Minus2;
                let minus8 = Rational::from_integer(BigInt::from(-8).pow((k - 1) / 2));
                let terms = vec![
                    (int(1), EisensteinSpec::twisted_inf(k, chi)?),
                    (minus8, EisensteinSpec::twisted_zero(k, chi)?),
                ];
                (terms, delta.recip())
            }
            (Multiplier::Two, false) => {
                let e = EisensteinSpec::level_one(k)?;
                let s = sign(k / 2);
                let terms = vec![
                    (s.clone(), e),
                    (-s, e.dilated(2)),
                    (-pow2(k / 2), e.dilated(4)),
                    (Rational::from_integer(BigInt::from(8).pow(k / 2)), e.dilated(8)),
                ];
                (terms, (pow2(k / 2) * (pow2(k) - int(1))).recip())
            }
            (Multiplier::Four, true) if k == 1 => {
                let e = EisensteinSpec::twisted_inf(1, CharacterId::Minus4)?;
                let terms = vec![(int(1), e), (int(-1), e.dilated(2)), (int(2), e.dilated(4))];
                (terms, int(2).recip())
            }
            (Multiplier::Four, true) => {
                let chi = CharacterId::Minus4;
                let inf = EisensteinSpec::twisted_inf(k, chi)?;
                let zero = EisensteinSpec::twisted_zero(k, chi)?;
                let s = sign(k.div_ceil(2));
                let terms = vec![
                    (s.clone(), inf),
                    (-s.clone(), inf.dilated(2)),
                    (int(2), inf.dilated(4)),
                    (-s, zero),
                    (pow2(k - 1), zero.dilated(2)),
                    (-pow2(2 * k - 1), zero.dilated(4)),
                ];
                (terms, int(2).recip())
            }
            (Multiplier::Four, false) => {
                let e = EisensteinSpec::level_one(k)?;
                let s = sign(k / 2);
                let terms = vec![
                    (s.clone(), e),
                    (-s, e.dilated(2)),
                    (-pow2(k), e.dilated(8)),
                    (pow2(2 * k), e.dilated(16)),
                ];
                (terms, (pow2(k) * (pow2(k) - int(1))).recip())
            }
        };
        Ok(FCombination { m, k, terms, normalization })
    }

    pub fn constant_term(&self) -> Rational {
        let sum: Rational = self.terms.iter().map(|(c, e)| c * e.constant_term()).sum();
        sum * &self.normalization
    }

    pub fn expand(&self, order: i64) -> QSeries {
        let mut acc = Series::zero(order);
        for (c, e) in &self.terms {
            acc = &acc + &eisenstein_series(e, order).scale(&(c * &self.normalization));
        }
        acc
    }

    /// Coefficient of `q^n` for `n >= 1` as `sum alpha * sigma(n / t)`:
    /// `(alpha, divisor kind, t)` with `alpha` folding in the normalization
    /// and the `-2k/B` prefactor.
    pub fn divisor_terms(&self) -> Vec<(Rational, DivisorSumKind, u32)> {
        self.terms
            .iter()
            .map(|(c, e)| (c * &self.normalization * e.normalizer(), e.divisor_kind(), e.dilation()))
            .collect()
    }
}

impl fmt::Display for FCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{{{},{}}} = ({}) * [", self.k, self.m.value(), self.normalization)?;
        for (i, (c, e)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if mag.is_one() {
                write!(f, "{e}")?;
            } else {
                write!(f, "{mag}*{e}")?;
            }
        }
        write!(f, "]")
    }
}

/// Build `F_{k,m}` and its expansion below `q^order`; refuses any
/// combination whose constant term is not exactly 1.
pub fn build_f(m: Multiplier, k: u32, order: i64) -> Result<(FCombination, QSeries), EisensteinError> {
    let comb = FCombination::new(m, k)?;
    let constant = comb.constant_term();
    if !constant.is_one() {
        return Err(EisensteinError::ConstantTermNotOne { m: m.value(), k, constant: constant.to_string() });
    }
    let series = comb.expand(order);
    if order > 0 && !series.coefficient(0).expect("order > 0").is_one() {
        return Err(EisensteinError::ConstantTermNotOne {
            m: m.value(),
            k,
            constant: series.coefficient(0).expect("order > 0").to_string(),
        });
    }
    Ok((comb, series))
}

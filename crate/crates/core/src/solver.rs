//! Correction coefficients `c_{j,k,m}`, the closed-form [`RepFormula`], its
//! evaluation at a given `n`, and full verification of
//! `(theta theta_m)^k = F_{k,m} + (theta theta_m)^k sum_j c_j x_m^j`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{divisor_sum, CharacterId, DivisorSumKind};
use crate::eisenstein::{build_f, EisensteinError, FCombination};
use crate::repcount::{gen_series, x_series, FormSpec, Multiplier};
use crate::series::Series;
use crate::{to_rational, IntSeries, QSeries, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("order {order} too small for {spec}: need more than {needed}")]
    OrderTooSmall { spec: FormSpec, order: i64, needed: i64 },
    #[error("{spec}: residual nonzero at n = {first_n}")]
    ResidualNonzero { spec: FormSpec, first_n: i64 },
    #[error("{spec}: a_{i}({j}) breaks unit-triangularity")]
    NotUnitriangular { spec: FormSpec, i: usize, j: usize },
    #[error(transparent)]
    Eisenstein(#[from] EisensteinError),
    #[error("formula value at n = {n} is not an integer: {value}")]
    NonIntegerResult { n: u64, value: String },
    #[error("no value of a_{j} at n = {n}")]
    MissingCorrection { j: u32, n: u64 },
    #[error("malformed formula: {0}")]
    Malformed(String),
}

/// Number of correction terms `ell_m(k)`; the odd `m = 4` case is clamped at 0.
pub fn ell(spec: FormSpec) -> usize {
    let k = spec.k() as usize;
    match spec.m() {
        Multiplier::One => (k - 1) / 4,
        Multiplier::Two => (k - 1) / 2,
        Multiplier::Four if k % 2 == 1 => k.saturating_sub(2),
        Multiplier::Four => k - 1,
    }
}

/// Every series the solver and verifier need, expanded once.
#[derive(Debug, Clone)]
pub struct Workspace {
    pub spec: FormSpec,
    pub order: i64,
    pub ell: usize,
    pub g: QSeries,
    pub g_int: IntSeries,
    pub f: QSeries,
    pub combination: FCombination,
    pub x: QSeries,
    pub x_int: IntSeries,
    /// `a[j-1] = a_{j,k,m}`.
    pub a: Vec<QSeries>,
}

fn rational_series(s: &IntSeries) -> QSeries {
    s.map(to_rational)
}

impl Workspace {
    pub fn new(spec: FormSpec, order: i64) -> Result<Self, SolverError> {
        let ell = ell(spec);
        if order <= ell as i64 + 10 {
            return Err(SolverError::OrderTooSmall { spec, order, needed: ell as i64 + 10 });
        }
        let g_int: IntSeries = gen_series(spec, order);
        let x_int: IntSeries = x_series(spec.m(), order);
        let mut a = Vec::with_capacity(ell);
        let mut current = g_int.clone();
        for _ in 0..ell {
            current = current.mul_series(&x_int).truncate(order);
            a.push(rational_series(&current));
        }
        let (combination, f) = build_f(spec.m(), spec.k(), order)?;
        Ok(Workspace {
            spec,
            order,
            ell,
            g: rational_series(&g_int),
            g_int,
            f,
            combination,
            x: rational_series(&x_int),
            x_int,
            a,
        })
    }

    fn coeff(s: &QSeries, n: i64) -> Rational {
        s.coefficient(n).expect("within truncation")
    }

    /// `a_i(j) = 0` for `j < i` and `a_i(i) = 1`, for `1 <= i, j <= ell`.
    pub fn check_unitriangular(&self) -> Result<(), SolverError> {
        for i in 1..=self.ell {
            for j in 1..=i {
                let v = Self::coeff(&self.a[i - 1], j as i64);
                let ok = if j == i { v.is_one() } else { v.is_zero() };
                if !ok {
                    return Err(SolverError::NotUnitriangular { spec: self.spec, i, j });
                }
            }
        }
        Ok(())
    }

    /// `D = G - F`.
    pub fn difference(&self) -> QSeries {
        &self.g - &self.f
    }

    /// Forward substitution `c_j = D[j] - sum_{i<j} c_i a_i[j]`.
    pub fn solve_triangular(&self) -> Vec<Rational> {
        let d = self.difference();
        let mut c: Vec<Rational> = Vec::with_capacity(self.ell);
        for j in 1..=self.ell {
            let mut v = Self::coeff(&d, j as i64);
            for (i, ci) in c.iter().enumerate() {
                v -= ci * Self::coeff(&self.a[i], j as i64);
            }
            c.push(v);
        }
        c
    }

    /// `D - sum_j c_j a_j`.
    pub fn residual(&self, c: &[Rational]) -> QSeries {
        let mut r = self.difference();
        for (cj, aj) in c.iter().zip(&self.a) {
            r = &r - &aj.scale(cj);
        }
        r
    }

    pub fn solve(&self) -> Result<Vec<Rational>, SolverError> {
        self.check_unitriangular()?;
        let c = self.solve_triangular();
        if let Some(e24) = self.residual(&c).first_difference(&Series::zero(self.order)) {
            return Err(SolverError::ResidualNonzero { spec: self.spec, first_n: e24 / 24 });
        }
        Ok(c)
    }

    /// Right-hand side `F + G * x (c_1 + x (c_2 + ...))`, built without the `a_j`.
    /// The polynomial is evaluated over the integers after clearing denominators.
    pub fn right_side(&self, c: &[Rational]) -> QSeries {
        let den = c.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let mut poly: IntSeries = Series::zero(self.order);
        for cj in c.iter().rev() {
            let cj = (cj * to_rational(&den)).to_integer();
            poly = (&poly + &Series::constant(cj, self.order)).mul_series(&self.x_int).truncate(self.order);
        }
        let product = self.g_int.mul_series(&poly).truncate(self.order);
        let inv = Rational::new(BigInt::one(), den);
        &self.f + &rational_series(&product).scale(&inv)
    }

    pub fn verify_with(&self, c: &[Rational]) -> VerifyReport {
        let rhs = self.right_side(c);
        let first_mismatch = self.g.first_difference(&rhs).map(|e24| e24 / 24);
        VerifyReport {
            k: self.spec.k(),
            m: self.spec.m().value(),
            order: self.order,
            ell: self.ell,
            ok: first_mismatch.is_none(),
            first_mismatch,
            coefficients: c.to_vec(),
        }
    }
}

/// Unique correction coefficients, checked against the whole truncation.
pub fn solve_c(spec: FormSpec, order: i64) -> Result<Vec<Rational>, SolverError> {
    Workspace::new(spec, order)?.solve()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub k: u32,
    pub m: u32,
    pub order: i64,
    pub ell: usize,
    pub ok: bool,
    pub first_mismatch: Option<i64>,
    pub coefficients: Vec<Rational>,
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={} m={} order={} ", self.k, self.m, self.order)?;
        match self.first_mismatch {
            None => write!(f, "ok")?,
            Some(n) => write!(f, "MISMATCH at n={n}")?,
        }
        let c: Vec<String> = self.coefficients.iter().map(|c| c.to_string()).collect();
        write!(f, " c=[{}]", c.join(", "))?;
        if self.ell == 0 {
            write!(f, " (ell=0, no corrections)")?;
        }
        Ok(())
    }
}

/// Solve with the triangular system, then compare both sides of the identity
/// coefficient by coefficient below `order`.
pub fn verify_identity(spec: FormSpec, order: i64) -> Result<VerifyReport, SolverError> {
    let ws = Workspace::new(spec, order)?;
    let c = ws.solve_triangular();
    Ok(ws.verify_with(&c))
}

pub fn verify_with_coefficients(spec: FormSpec, order: i64, c: &[Rational]) -> Result<VerifyReport, SolverError> {
    Ok(Workspace::new(spec, order)?.verify_with(c))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EisensteinTerm {
    pub coeff: Rational,
    pub kind: DivisorSumKind,
    pub scale: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Correction {
    pub j: u32,
    pub c: Rational,
}

/// `r(n) = sum coeff * sigma_kind(n / scale) + sum c_j a_j(n)` for `n >= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepFormula {
    pub k: u32,
    pub m: u32,
    pub ell: usize,
    pub eisenstein_terms: Vec<EisensteinTerm>,
    pub corrections: Vec<Correction>,
}

/// Merge terms with the same canonical kind and scale, drop zeros, and sort.
fn merge_terms(raw: Vec<(Rational, DivisorSumKind, u32)>) -> Vec<EisensteinTerm> {
    let mut out: Vec<EisensteinTerm> = Vec::new();
    for (coeff, kind, scale) in raw {
        let kind = kind.canonical();
        match out.iter_mut().find(|t| t.kind == kind && t.scale == scale) {
            Some(t) => t.coeff += coeff,
            None => out.push(EisensteinTerm { coeff, kind, scale }),
        }
    }
    out.retain(|t| !t.coeff.is_zero());
    out.sort_by(|a, b| (a.kind, a.scale).cmp(&(b.kind, b.scale)));
    out
}

pub fn emit_formula(spec: FormSpec, order: i64) -> Result<RepFormula, SolverError> {
    let ws = Workspace::new(spec, order)?;
    let c = ws.solve()?;
    Ok(RepFormula {
        k: spec.k(),
        m: spec.m().value(),
        ell: ws.ell,
        eisenstein_terms: merge_terms(ws.combination.divisor_terms()),
        corrections: c.into_iter().enumerate().map(|(i, c)| Correction { j: i as u32 + 1, c }).collect(),
    })
}

/// Source of `a_{j,k,m}(n)`.
pub trait CorrectionValues {
    fn correction(&self, j: u32, n: u64) -> Option<BigInt>;
}

/// Precomputed `a_j(n)` for `j = 1..=ell`, `n < order`.
#[derive(Debug, Clone)]
pub struct CorrectionTable {
    series: Vec<IntSeries>,
}

impl CorrectionTable {
    pub fn new(spec: FormSpec, order: i64) -> Self {
        let x: IntSeries = x_series(spec.m(), order);
        let mut current: IntSeries = gen_series(spec, order);
        let series = (0..ell(spec))
            .map(|_| {
                current = current.mul_series(&x).truncate(order);
                current.clone()
            })
            .collect();
        CorrectionTable { series }
    }
}

impl CorrectionValues for CorrectionTable {
    fn correction(&self, j: u32, n: u64) -> Option<BigInt> {
        let s = self.series.get((j as usize).checked_sub(1)?)?;
        s.coefficient(n as i64).ok()
    }
}

pub fn evaluate_formula(
    formula: &RepFormula,
    n: u64,
    values: &impl CorrectionValues,
) -> Result<BigInt, SolverError> {
    if n == 0 {
        return Ok(BigInt::one());
    }
    let arg = Rational::from_integer(BigInt::from(n));
    let mut total = Rational::zero();
    for t in &formula.eisenstein_terms {
        let s = divisor_sum(t.kind, &(&arg / Rational::from_integer(BigInt::from(t.scale))));
        if !s.is_zero() {
            total += &t.coeff * to_rational(&s);
        }
    }
    for corr in &formula.corrections {
        if corr.c.is_zero() {
            continue;
        }
        let a = values.correction(corr.j, n).ok_or(SolverError::MissingCorrection { j: corr.j, n })?;
        total += &corr.c * to_rational(&a);
    }
    if !total.is_integer() {
        return Err(SolverError::NonIntegerResult { n, value: total.to_string() });
    }
    Ok(total.to_integer())
}

fn write_signed(f: &mut fmt::Formatter<'_>, first: bool, c: &Rational, body: &str) -> fmt::Result {
    match (first, c.is_negative()) {
        (true, true) => write!(f, "-")?,
        (true, false) => {}
        (false, true) => write!(f, " - ")?,
        (false, false) => write!(f, " + ")?,
    }
    let mag = c.abs();
    if mag.is_one() {
        write!(f, "{body}")
    } else {
        write!(f, "{mag}*{body}")
    }
}

impl fmt::Display for RepFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for t in &self.eisenstein_terms {
            let arg = match t.scale {
                1 => "n".to_string(),
                s => format!("n/{s}"),
            };
            write_signed(f, first, &t.coeff, &format!("{}({arg})", t.kind))?;
            first = false;
        }
        for c in &self.corrections {
            write_signed(f, first, &c.c, &format!("a({})", c.j))?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    coeff: String,
    kind: String,
    weight: u32,
    character: Option<i64>,
    scale: u32,
}

#[derive(Serialize, Deserialize)]
struct CorrectionJson {
    j: u32,
    c: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FormulaJson {
    k: u32,
    m: u32,
    ell: usize,
    eisenstein_terms: Vec<TermJson>,
    corrections: Vec<CorrectionJson>,
}

fn parse_rational(s: &str) -> Result<Rational, SolverError> {
    Rational::from_str(s).map_err(|_| SolverError::Malformed(format!("bad rational {s:?}")))
}

impl RepFormula {
    pub fn to_json(&self) -> String {
        let repr = FormulaJson {
            k: self.k,
            m: self.m,
            ell: self.ell,
            eisenstein_terms: self
                .eisenstein_terms
                .iter()
                .map(|t| TermJson {
                    coeff: t.coeff.to_string(),
                    kind: t.kind.tag().to_string(),
                    weight: t.kind.weight(),
                    character: t.kind.character().map(CharacterId::discriminant),
                    scale: t.scale,
                })
                .collect(),
            corrections: self
                .corrections
                .iter()
                .map(|c| CorrectionJson { j: c.j, c: c.c.to_string() })
                .collect(),
        };
        serde_json::to_string(&repr).expect("plain data")
    }

    pub fn from_json(s: &str) -> Result<Self, SolverError> {
        let repr: FormulaJson = serde_json::from_str(s).map_err(|e| SolverError::Malformed(e.to_string()))?;
        let mut eisenstein_terms = Vec::with_capacity(repr.eisenstein_terms.len());
        for t in repr.eisenstein_terms {
            let character = t
                .character
                .map(CharacterId::from_discriminant)
                .transpose()
                .map_err(|e| SolverError::Malformed(e.to_string()))?;
            let weight = t.weight;
            let kind = match (t.kind.as_str(), character) {
                ("sigma", None) => DivisorSumKind::Plain { weight },
                ("sigma_inf", Some(character)) => DivisorSumKind::TwistedInf { weight, character },
                ("sigma_0", Some(character)) => DivisorSumKind::TwistedZero { weight, character },
                (kind, _) => {
                    return Err(SolverError::Malformed(format!("bad kind/character pair {kind:?}")))
                }
            };
            if t.scale == 0 {
                return Err(SolverError::Malformed("scale must be positive".into()));
            }
            eisenstein_terms.push(EisensteinTerm { coeff: parse_rational(&t.coeff)?, kind, scale: t.scale });
        }
        let corrections = repr
            .corrections
            .into_iter()
            .map(|c| Ok(Correction { j: c.j, c: parse_rational(&c.c)? }))
            .collect::<Result<Vec<_>, SolverError>>()?;
        if corrections.len() != repr.ell || corrections.iter().enumerate().any(|(i, c)| c.j as usize != i + 1) {
            return Err(SolverError::Malformed("corrections must be j = 1..ell".into()));
        }
        Ok(RepFormula { k: repr.k, m: repr.m, ell: repr.ell, eisenstein_terms, corrections })
    }
}

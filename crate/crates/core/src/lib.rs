//! Exact representation numbers for the quadratic forms
//! `x_1^2 + ... + x_k^2 + m (x_{k+1}^2 + ... + x_{2k}^2)` with `m` in `{1, 2, 4}`.
//!
//! The count `r(1^k m^k; n)` is the `n`-th coefficient of `(theta(tau) theta(m tau))^k`.
//! That series splits into a combination of Eisenstein series plus a short
//! polynomial in an eta quotient `x_m` with uniquely determined rational
//! coefficients; [`solver`] finds those coefficients by unit-triangular
//! elimination and checks the identity to any truncation order.
//!
//! All arithmetic is exact. The series layer is generic over the coefficient
//! ring ([`series::Scalar`]); the aliases below fix the rings used by the rest
//! of the crate.

pub mod arith;
pub mod cli;
pub mod eisenstein;
pub mod eta;
pub mod repcount;
pub mod series;
pub mod solver;

use num_bigint::BigInt;

/// Reduced arbitrary-precision rational.
pub type Rational = num_rational::BigRational;
/// Truncated q-series with rational coefficients.
pub type QSeries = series::Series<Rational>;
/// Truncated q-series with integer coefficients (theta and eta expansions).
pub type IntSeries = series::Series<BigInt>;

pub use arith::{CharacterId, DivisorSumKind};
pub use eisenstein::{EisensteinSpec, FCombination};
pub use eta::{CuspLabel, EtaQuotient};
pub use repcount::{FormSpec, Multiplier};
pub use solver::{RepFormula, VerifyReport};

/// Default truncation order (number of integer exponents).
pub const DEFAULT_ORDER: i64 = 300;

pub(crate) fn to_rational(n: &BigInt) -> Rational {
    Rational::from_integer(n.clone())
}

//! Exact algebra substrate: scalars, polynomials, rational functions,
//! Laurent expansions, divisors, Möbius actions and the Schwarzian
//! derivative.
//!
//! Everything here is exact: equality is decidable, no tolerances anywhere.
//! All values are immutable after construction; operations are pure.

mod json;
mod poly;
mod ratfun;
mod scalar;
mod series;

pub use json::{parse_scalar, rational_function_from_json, rational_function_to_json};
pub use poly::Poly;
pub use ratfun::{
    ambient_discriminant, branch_order, differential_order_at, divisor, divisor_in_domain,
    integrate_rational, mobius, order_at,
    power_map_schwarzian_density, residue_at, schwarzian, DivisorEntry, RationalFunction,
    SpherePoint,
};
pub use scalar::{sqrt_rational, ExactScalar, Rat};
pub use scalar::rat_sqrt_exact;
pub use series::{laurent_at, localize_density, LaurentSeries};
pub(crate) use series::expand_at_zero;

use std::fmt;

/// Rational functions of the formal parameter θ. Same representation as the
/// rational functions in z; the variable is contextual.
pub type ThetaRat = RationalFunction<ExactScalar>;

/// Dense polynomial in θ over the exact scalars.
pub type ThetaPoly = Poly<ExactScalar>;

/// Errors surfaced by exact computations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymError {
    /// Division by an exact zero (scalar, polynomial or rational function).
    DivisionByZero,
    /// The zero function has no order, residue or divisor.
    ZeroFunction,
    /// Schwarzian derivative of a constant map.
    ConstantInput,
    /// Möbius action by a matrix that is not unimodular.
    NonUnimodular,
    /// A radicand too large to reduce to a square-free discriminant.
    UnsupportedRadicand(String),
    /// Integrand has a nonzero residue, so no rational antiderivative exists.
    NonzeroResidue,
    /// Malformed textual or JSON input.
    Parse(String),
    /// Anything that violates a documented precondition.
    Precondition(String),
}

impl fmt::Display for SymError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymError::DivisionByZero => write!(f, "division by zero"),
            SymError::ZeroFunction => write!(f, "zero function has no order/divisor"),
            SymError::ConstantInput => write!(f, "constant input"),
            SymError::NonUnimodular => write!(f, "matrix is not unimodular"),
            SymError::UnsupportedRadicand(s) => write!(f, "unsupported radicand: {s}"),
            SymError::NonzeroResidue => write!(f, "nonzero residue obstructs integration"),
            SymError::Parse(s) => write!(f, "parse error: {s}"),
            SymError::Precondition(s) => write!(f, "precondition violated: {s}"),
        }
    }
}

impl std::error::Error for SymError {}

/// Field operations required of a coefficient domain.
///
/// Implemented by [`ExactScalar`] and, recursively, by
/// [`RationalFunction<K>`], which is how θ-rational coefficients enter the
/// generic polynomial and series code.
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rat(r: &Rat) -> Self;
    fn from_exact(x: &ExactScalar) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, b: &Self) -> Self;
    fn sub(&self, b: &Self) -> Self;
    fn mul(&self, b: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Result<Self, SymError>;

    fn from_int(n: i64) -> Self {
        Self::from_rat(&Rat::from_integer(n.into()))
    }

    fn div(&self, b: &Self) -> Result<Self, SymError> {
        Ok(self.mul(&b.inv()?))
    }

    /// Multiply by an exact rational. Always legal, even for coefficient
    /// domains where general division is restricted.
    fn scale_rat(&self, r: &Rat) -> Self {
        self.mul(&Self::from_rat(r))
    }
}

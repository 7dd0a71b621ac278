//! Coefficient fields: rational functions in q and friends, the rationals,
//! and a single quadratic extension.

pub mod expr;
mod ext;
pub mod poly;
mod scalar;

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

pub use ext::ExtScalar;
pub use poly::{MPoly, Monomial};
pub use scalar::{q_number, ParamSet, QScalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoeffError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at q = 1")]
    PoleAtOne,
    #[error("parameter sets differ: {0} vs {1}")]
    ParamMismatch(String, String),
    #[error("unknown parameter '{name}' at {line}:{col}")]
    UnknownName { name: String, line: usize, col: usize },
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("quadratic extensions with different discriminants")]
    ExtMismatch,
}

/// The operations every coefficient domain must provide.
///
/// Values are immutable; all operations return fresh values.
pub trait Field: Clone + PartialEq + Eq + Hash + Debug + Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(r: BigRational) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Result<Self, CoeffError>;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
    fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn div(&self, other: &Self) -> Result<Self, CoeffError> {
        Ok(self.mul(&other.inv()?))
    }
    fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
    /// Rough size measure used to pick cheap pivots.
    fn weight(&self) -> usize {
        1
    }
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_rational(r: BigRational) -> Self {
        r
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Result<Self, CoeffError> {
        if Zero::is_zero(self) {
            Err(CoeffError::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }
    fn weight(&self) -> usize {
        (self.numer().bits() + self.denom().bits()) as usize
    }
}

/// Shorthand for an exact rational.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

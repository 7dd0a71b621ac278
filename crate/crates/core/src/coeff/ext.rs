use std::fmt;

use num_rational::BigRational;

use super::scalar::ops;
use super::{CoeffError, Field, QScalar};

/// `u + v·ν` with `ν² = r`. Values with `v = 0` carry no discriminant and
/// coincide with the embedded base element.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExtScalar {
    u: QScalar,
    v: QScalar,
    r: Option<QScalar>,
}

impl ExtScalar {
    pub fn new(u: QScalar, v: QScalar, r: QScalar) -> Self {
        if v.is_zero() {
            ExtScalar { u, v, r: None }
        } else {
            ExtScalar { u, v, r: Some(r) }
        }
    }

    /// The adjoined root ν itself.
    pub fn root(r: QScalar) -> Self {
        Self::new(QScalar::zero(), QScalar::one(), r)
    }

    pub fn embed(u: QScalar) -> Self {
        ExtScalar { u, v: QScalar::zero(), r: None }
    }

    pub fn parts(&self) -> (&QScalar, &QScalar) {
        (&self.u, &self.v)
    }

    pub fn discriminant(&self) -> Option<&QScalar> {
        self.r.as_ref()
    }

    /// The base-field value, if the ν-part vanishes.
    pub fn as_base(&self) -> Option<&QScalar> {
        self.v.is_zero().then_some(&self.u)
    }

    pub fn conjugate(&self) -> Self {
        ExtScalar { u: self.u.clone(), v: self.v.neg(), r: self.r.clone() }
    }

    fn join(&self, other: &Self) -> Result<Option<QScalar>, CoeffError> {
        match (&self.r, &other.r) {
            (None, r) | (r, None) => Ok(r.clone()),
            (Some(a), Some(b)) if a == b => Ok(Some(a.clone())),
            _ => Err(CoeffError::ExtMismatch),
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, CoeffError> {
        let r = self.join(other)?;
        let mut u = self.u.try_mul(&other.u)?;
        if let Some(r) = &r {
            u = u.try_add(&self.v.try_mul(&other.v)?.try_mul(r)?)?;
        }
        let v = self.u.try_mul(&other.v)?.try_add(&self.v.try_mul(&other.u)?)?;
        Ok(match r {
            Some(r) => Self::new(u, v, r),
            None => Self::embed(u),
        })
    }

    /// Norm `u² − r v²` down to the base field.
    pub fn norm(&self) -> QScalar {
        match &self.r {
            None => self.u.mul(&self.u),
            Some(r) => self.u.mul(&self.u).sub(&r.mul(&self.v).mul(&self.v)),
        }
    }
}

impl Field for ExtScalar {
    fn zero() -> Self {
        Self::embed(QScalar::zero())
    }
    fn one() -> Self {
        Self::embed(QScalar::one())
    }
    fn from_rational(r: BigRational) -> Self {
        Self::embed(QScalar::from_rational(r))
    }
    fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        let r = self.join(other).unwrap_or_else(|e| panic!("{e}"));
        let u = self.u.add(&other.u);
        let v = self.v.add(&other.v);
        match r {
            Some(r) => Self::new(u, v, r),
            None => Self::embed(u),
        }
    }
    fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).unwrap_or_else(|e| panic!("{e}"))
    }
    fn neg(&self) -> Self {
        ExtScalar { u: self.u.neg(), v: self.v.neg(), r: self.r.clone() }
    }
    fn inv(&self) -> Result<Self, CoeffError> {
        let n = self.norm();
        if n.is_zero() {
            return Err(CoeffError::DivisionByZero);
        }
        let ni = n.inv()?;
        let c = self.conjugate();
        Ok(match &c.r {
            Some(r) => Self::new(c.u.mul(&ni), c.v.mul(&ni), r.clone()),
            None => Self::embed(c.u.mul(&ni)),
        })
    }
    fn weight(&self) -> usize {
        self.u.weight() + self.v.weight()
    }
}

impl From<QScalar> for ExtScalar {
    fn from(u: QScalar) -> Self {
        Self::embed(u)
    }
}

impl fmt::Display for ExtScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.r {
            None => write!(f, "{}", self.u),
            Some(r) => write!(f, "[{}] + [{}]*nu  (nu^2 = {})", self.u, self.v, r),
        }
    }
}

ops!(ExtScalar);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::ParamSet;

    #[test]
    fn defining_relation_and_inverse() {
        let p = ParamSet::new(&["c"]);
        let r = p.parse("-c*q^2").unwrap();
        let nu = ExtScalar::root(r.clone());
        assert_eq!(&nu * &nu, ExtScalar::embed(r.clone()));
        let x = ExtScalar::new(p.parse("q + 1").unwrap(), p.parse("c").unwrap(), r);
        assert!((&x * &x.inv().unwrap()).is_one());
        assert_eq!(ExtScalar::embed(p.q()).as_base(), Some(&p.q()));
    }
}

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::expr::{self, Interp};
use super::poly::{write_terms, MPoly};
use super::{CoeffError, Field};

/// Ordered list of commuting parameter names; index 0 is always `q`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ParamSet(Arc<[String]>);

impl ParamSet {
    /// `q` followed by `extra` names.
    pub fn new(extra: &[&str]) -> Self {
        let mut v = vec!["q".to_string()];
        for e in extra {
            assert!(*e != "q" && !v.iter().any(|x| x == e), "duplicate parameter {e}");
            v.push(e.to_string());
        }
        ParamSet(v.into())
    }

    pub fn q_only() -> Self {
        Self::new(&[])
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    pub fn var(&self, name: &str) -> QScalar {
        let i = self.index(name).unwrap_or_else(|| panic!("unknown parameter {name}"));
        QScalar::normalized(Some(self.clone()), MPoly::var(i), MPoly::one())
    }

    pub fn q(&self) -> QScalar {
        self.var("q")
    }

    /// Parses a scalar in the expression grammar, with names drawn from this set.
    pub fn parse(&self, src: &str) -> Result<QScalar, CoeffError> {
        self.parse_at(src, 1, 1)
    }

    pub fn parse_at(&self, src: &str, line: usize, col: usize) -> Result<QScalar, CoeffError> {
        expr::parse_at(src, line, col)?.eval(&ScalarInterp(self))
    }

    fn describe(&self) -> String {
        format!("{{{}}}", self.0.join(","))
    }
}

struct ScalarInterp<'a>(&'a ParamSet);

impl Interp for ScalarInterp<'_> {
    type Value = QScalar;
    fn int(&self, n: &BigInt) -> QScalar {
        QScalar::from_rational(BigRational::from_integer(n.clone()))
    }
    fn name(&self, name: &str, line: usize, col: usize) -> Result<QScalar, CoeffError> {
        match self.0.index(name) {
            Some(_) => Ok(self.0.var(name)),
            None => Err(CoeffError::UnknownName { name: name.into(), line, col }),
        }
    }
    fn add(&self, a: QScalar, b: QScalar) -> QScalar {
        Field::add(&a, &b)
    }
    fn neg(&self, a: QScalar) -> QScalar {
        Field::neg(&a)
    }
    fn mul(&self, a: QScalar, b: QScalar) -> Result<QScalar, CoeffError> {
        a.try_mul(&b)
    }
    fn div(&self, a: QScalar, b: QScalar) -> Result<QScalar, CoeffError> {
        a.try_mul(&b.inv()?)
    }
    fn pow(&self, a: QScalar, e: i64) -> Result<QScalar, CoeffError> {
        a.powi(e)
    }
}

/// Exact element of Q(params): a reduced fraction of polynomials with a
/// monic denominator. Constants carry no parameter set, so they mix freely
/// with every set; two non-constant values must share their set.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QScalar {
    params: Option<ParamSet>,
    num: MPoly,
    den: MPoly,
}

impl QScalar {
    fn normalized(params: Option<ParamSet>, num: MPoly, den: MPoly) -> QScalar {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return QScalar { params: None, num, den: MPoly::one() };
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = num.gcd(&den);
            if g.is_one() {
                (num, den)
            } else {
                (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
            }
        };
        let lc = den.leading_coeff();
        let (num, den) = if lc.is_one() {
            (num, den)
        } else {
            let inv = lc.recip();
            (num.scale(&inv), den.scale(&inv))
        };
        let params = if num.is_constant() && den.is_constant() { None } else { params };
        QScalar { params, num, den }
    }

    fn join(&self, other: &QScalar) -> Result<Option<ParamSet>, CoeffError> {
        match (&self.params, &other.params) {
            (None, p) | (p, None) => Ok(p.clone()),
            (Some(a), Some(b)) if a == b => Ok(Some(a.clone())),
            (Some(a), Some(b)) => Err(CoeffError::ParamMismatch(a.describe(), b.describe())),
        }
    }

    pub fn params(&self) -> Option<&ParamSet> {
        self.params.as_ref()
    }

    pub fn numerator(&self) -> &MPoly {
        &self.num
    }

    pub fn denominator(&self) -> &MPoly {
        &self.den
    }

    pub fn is_constant(&self) -> bool {
        self.params.is_none()
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        if self.is_constant() {
            Some(self.num.leading_coeff() / self.den.leading_coeff())
        } else {
            None
        }
    }

    pub fn try_add(&self, other: &QScalar) -> Result<QScalar, CoeffError> {
        let p = self.join(other)?;
        if self.num.is_zero() {
            return Ok(other.clone());
        }
        if other.num.is_zero() {
            return Ok(self.clone());
        }
        if self.den == other.den {
            return Ok(Self::normalized(p, self.num.add(&other.num), self.den.clone()));
        }
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        Ok(Self::normalized(p, num, self.den.mul(&other.den)))
    }

    pub fn try_mul(&self, other: &QScalar) -> Result<QScalar, CoeffError> {
        let p = self.join(other)?;
        if self.num.is_zero() || other.num.is_zero() {
            return Ok(QScalar::zero());
        }
        if self.is_constant() {
            let c = self.constant_value().unwrap();
            return Ok(QScalar { params: other.params.clone(), num: other.num.scale(&c), den: other.den.clone() });
        }
        if other.is_constant() {
            return other.try_mul(self);
        }
        // cross-cancel before multiplying to keep degrees small
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = other.den.div_exact(&g1).unwrap();
        let n2 = other.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        let num = n1.mul(&n2);
        let den = d1.mul(&d2);
        let lc = den.leading_coeff();
        let inv = lc.recip();
        let params = if num.is_constant() && den.is_constant() { None } else { p };
        Ok(QScalar { params, num: num.scale(&inv), den: den.scale(&inv) })
    }

    /// Integer power; negative exponents invert.
    pub fn powi(&self, e: i64) -> Result<QScalar, CoeffError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = u32::try_from(e.unsigned_abs()).map_err(|_| CoeffError::Parse {
            line: 0,
            col: 0,
            msg: "exponent too large".into(),
        })?;
        Ok(QScalar {
            params: base.params.clone(),
            num: base.num.pow(k),
            den: base.den.pow(k),
        })
        .map(|s| Self::normalized(s.params, s.num, s.den))
    }

    /// Substitutes a rational value for the named parameter.
    pub fn substitute(&self, name: &str, value: &BigRational) -> Result<QScalar, CoeffError> {
        let Some(p) = &self.params else { return Ok(self.clone()) };
        let Some(i) = p.index(name) else {
            return Err(CoeffError::UnknownName { name: name.into(), line: 0, col: 0 });
        };
        let den = self.den.substitute(i, value);
        if den.is_zero() {
            return Err(CoeffError::DivisionByZero);
        }
        Ok(Self::normalized(self.params.clone(), self.num.substitute(i, value), den))
    }

    /// Substitutes a scalar for the named parameter.
    pub fn substitute_scalar(&self, name: &str, value: &QScalar) -> Result<QScalar, CoeffError> {
        let Some(p) = &self.params else { return Ok(self.clone()) };
        let Some(i) = p.index(name) else {
            return Err(CoeffError::UnknownName { name: name.into(), line: 0, col: 0 });
        };
        let eval = |poly: &MPoly| -> Result<QScalar, CoeffError> {
            let mut acc = QScalar::zero();
            for (m, c) in poly.terms() {
                let mut t = QScalar::from_rational(c.clone());
                for (j, &e) in m.exponents().iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    let base = if j == i { value.clone() } else { p.var(&p.names()[j]) };
                    t = t.try_mul(&base.powi(e as i64)?)?;
                }
                acc = acc.try_add(&t)?;
            }
            Ok(acc)
        };
        let d = eval(&self.den)?;
        eval(&self.num)?.try_mul(&d.inv()?)
    }

    /// Value at q = 1, after substituting `others` (name, value) pairs.
    pub fn classical_limit(&self, others: &[(&str, BigRational)]) -> Result<BigRational, CoeffError> {
        let mut s = self.clone();
        for (name, v) in others {
            s = s.substitute(name, v).map_err(|e| match e {
                CoeffError::DivisionByZero => CoeffError::PoleAtOne,
                e => e,
            })?;
        }
        let s = s.substitute("q", &BigRational::one()).map_err(|e| match e {
            CoeffError::DivisionByZero => CoeffError::PoleAtOne,
            e => e,
        })?;
        s.constant_value().ok_or_else(|| CoeffError::UnknownName {
            name: s.params.as_ref().map(|p| p.names().join(",")).unwrap_or_default(),
            line: 0,
            col: 0,
        })
    }

    /// Value at q = 1 with every other parameter left symbolic.
    pub fn at_q1(&self) -> Result<QScalar, CoeffError> {
        self.substitute("q", &BigRational::one()).map_err(|_| CoeffError::PoleAtOne)
    }

    /// Exact square root in Q(params), if one exists.
    pub fn sqrt(&self) -> Option<QScalar> {
        if self.num.is_zero() {
            return Some(QScalar::zero());
        }
        let n = self.num.sqrt()?;
        let d = self.den.sqrt()?;
        Some(Self::normalized(self.params.clone(), n, d))
    }

    /// Numerator as a Laurent polynomial (exponent vectors may be negative)
    /// together with the non-monomial part of the denominator.
    fn laurent_parts(&self) -> (Vec<(Vec<i64>, BigRational)>, MPoly) {
        let dm = self.den.monomial_content();
        let rest = self.den.div_exact(&MPoly::monomial(dm.clone(), BigRational::one())).unwrap();
        let width = self.num.width().max(dm.width());
        let num = self
            .num
            .terms()
            .iter()
            .map(|(m, c)| {
                let e = (0..width).map(|i| m.exp(i) as i64 - dm.exp(i) as i64).collect();
                (e, c.clone())
            })
            .collect();
        (num, rest)
    }
}

impl Field for QScalar {
    fn zero() -> Self {
        QScalar { params: None, num: MPoly::zero(), den: MPoly::one() }
    }
    fn one() -> Self {
        QScalar { params: None, num: MPoly::one(), den: MPoly::one() }
    }
    fn from_rational(r: BigRational) -> Self {
        QScalar { params: None, num: MPoly::constant(r), den: MPoly::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }
    fn add(&self, other: &Self) -> Self {
        self.try_add(other).unwrap_or_else(|e| panic!("{e}"))
    }
    fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).unwrap_or_else(|e| panic!("{e}"))
    }
    fn neg(&self) -> Self {
        QScalar { params: self.params.clone(), num: self.num.neg(), den: self.den.clone() }
    }
    fn inv(&self) -> Result<Self, CoeffError> {
        if self.num.is_zero() {
            return Err(CoeffError::DivisionByZero);
        }
        Ok(Self::normalized(self.params.clone(), self.den.clone(), self.num.clone()))
    }
    fn pow(&self, e: u32) -> Self {
        self.powi(e as i64).unwrap()
    }
    fn weight(&self) -> usize {
        self.num.terms().len() + self.den.terms().len()
    }
}

/// The q-number n_q = (q^n - q^-n) / (q - q^-1).
pub fn q_number(n: u32, params: &ParamSet) -> QScalar {
    let q = params.q();
    let qi = q.inv().unwrap();
    let mut acc = QScalar::zero();
    // q^{n-1} + q^{n-3} + ... + q^{1-n}
    for k in 0..n {
        let e = n as i64 - 1 - 2 * k as i64;
        let t = if e >= 0 { q.pow(e as u32) } else { qi.pow((-e) as u32) };
        acc = acc.add(&t);
    }
    acc
}

impl fmt::Display for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = |i: usize| -> String {
            self.params.as_ref().map(|p| p.names()[i].clone()).unwrap_or_else(|| format!("x{i}"))
        };
        let (num, rest) = self.laurent_parts();
        if rest.is_one() {
            write_terms(f, num.iter().map(|(e, c)| (e.clone(), c)), &names)
        } else {
            write!(f, "(")?;
            write_terms(f, num.iter().map(|(e, c)| (e.clone(), c)), &names)?;
            write!(f, ") / (")?;
            rest.fmt_with(f, &names)?;
            write!(f, ")")
        }
    }
}

impl Serialize for QScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Deserializes with the parameter set {q}; use [`ParamSet::parse`] for others.
impl<'de> Deserialize<'de> for QScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        ParamSet::q_only().parse(&s).map_err(serde::de::Error::custom)
    }
}

impl From<i64> for QScalar {
    fn from(n: i64) -> Self {
        QScalar::from_int(n)
    }
}

impl From<BigRational> for QScalar {
    fn from(r: BigRational) -> Self {
        QScalar::from_rational(r)
    }
}

macro_rules! ops {
    ($t:ty) => {
        impl std::ops::Add for &$t {
            type Output = $t;
            fn add(self, o: &$t) -> $t {
                Field::add(self, o)
            }
        }
        impl std::ops::Sub for &$t {
            type Output = $t;
            fn sub(self, o: &$t) -> $t {
                Field::sub(self, o)
            }
        }
        impl std::ops::Mul for &$t {
            type Output = $t;
            fn mul(self, o: &$t) -> $t {
                Field::mul(self, o)
            }
        }
        impl std::ops::Div for &$t {
            type Output = $t;
            fn div(self, o: &$t) -> $t {
                Field::div(self, o).expect("division by zero")
            }
        }
        impl std::ops::Neg for &$t {
            type Output = $t;
            fn neg(self) -> $t {
                Field::neg(self)
            }
        }
    };
}
pub(crate) use ops;

ops!(QScalar);

#[cfg(test)]
mod tests {
    use super::*;

    fn ps() -> ParamSet {
        ParamSet::q_only()
    }

    #[test]
    fn q_numbers() {
        let p = ps();
        assert!(q_number(0, &p).is_zero());
        assert_eq!(q_number(2, &p), p.parse("q + q^-1").unwrap());
        assert_eq!(q_number(3, &p), p.parse("q^2 + 1 + q^-2").unwrap());
        let q = p.q();
        let quotient = &(&q.pow(3) - &q.powi(-3).unwrap()) / &(&q - &q.inv().unwrap());
        assert_eq!(quotient, q_number(3, &p));
        for n in 1..8 {
            assert_eq!(q_number(n, &p).classical_limit(&[]).unwrap(), BigRational::from_integer(n.into()));
        }
    }

    #[test]
    fn poles_and_inverses() {
        let p = ps();
        let q = p.q();
        let d = &q - &q.inv().unwrap();
        assert_eq!(d.inv().unwrap().classical_limit(&[]), Err(CoeffError::PoleAtOne));
        assert!((&d / &d).is_one());
        assert_eq!(QScalar::zero().inv(), Err(CoeffError::DivisionByZero));
        assert_eq!(q.inv().unwrap().to_string(), "q^-1");
    }

    #[test]
    fn display_roundtrip() {
        let p = ParamSet::new(&["h"]);
        for src in ["q^2 - 2*h + 1/3", "(q + 1) / (q^2*h - 3)", "-q^-2*h^3", "0", "-7/2"] {
            let s = p.parse(src).unwrap();
            let back = p.parse(&s.to_string()).unwrap();
            assert_eq!(s, back, "{src} -> {s}");
        }
    }

    #[test]
    fn mismatched_sets_are_rejected() {
        let a = ParamSet::new(&["h"]).q();
        let b = ParamSet::new(&["c"]).q();
        assert!(matches!(a.try_add(&b), Err(CoeffError::ParamMismatch(..))));
        // constants mix with anything
        assert!(a.try_add(&QScalar::from_int(2)).is_ok());
    }

    #[test]
    fn sqrt_detects_squares() {
        let p = ps();
        let s = p.parse("(q + q^-1)^2").unwrap();
        assert_eq!(s.sqrt().unwrap(), p.parse("q + q^-1").unwrap());
        assert!(p.parse("q^2 + 1").unwrap().sqrt().is_none());
    }
}

//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Terms are kept sorted in descending graded-lexicographic order with no
//! stored zeros, so structural equality is polynomial equality.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

/// Exponent vector; trailing zero exponents are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(SmallVec<[u32; 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(index: usize, exp: u32) -> Self {
        let mut v: SmallVec<[u32; 4]> = SmallVec::from_elem(0, index + 1);
        v[index] = exp;
        let mut m = Monomial(v);
        m.trim();
        m
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        let mut m = Monomial(exps.iter().copied().collect());
        m.trim();
        m
    }

    fn trim(&mut self) {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
    }

    pub fn exp(&self, var: usize) -> u32 {
        self.0.get(var).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of leading variable slots in use.
    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        let mut v: SmallVec<[u32; 4]> = SmallVec::with_capacity(n);
        for i in 0..n {
            let e = self
                .exp(i)
                .checked_add(other.exp(i))
                .expect("exponent overflow in monomial product");
            v.push(e);
        }
        Monomial(v)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.len() <= other.0.len() && self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming divisibility.
    pub fn div(&self, divisor: &Monomial) -> Option<Monomial> {
        if !divisor.divides(self) {
            return None;
        }
        let mut v = self.0.clone();
        for (i, e) in divisor.0.iter().enumerate() {
            v[i] -= e;
        }
        let mut m = Monomial(v);
        m.trim();
        Some(m)
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().min(other.0.len());
        let mut m = Monomial((0..n).map(|i| self.0[i].min(other.0[i])).collect());
        m.trim();
        m
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        Monomial((0..n).map(|i| self.exp(i).max(other.exp(i))).collect())
    }

    fn without_var(&self, var: usize) -> Monomial {
        let mut v = self.0.clone();
        if var < v.len() {
            v[var] = 0;
        }
        let mut m = Monomial(v);
        m.trim();
        m
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree().cmp(&other.total_degree()).then_with(|| {
            let n = self.0.len().max(other.0.len());
            for i in 0..n {
                match self.exp(i).cmp(&other.exp(i)) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multivariate polynomial over the rationals.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct MPoly {
    // descending monomial order
    terms: Vec<(Monomial, BigRational)>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            MPoly { terms: vec![(Monomial::one(), c)] }
        }
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(c)))
    }

    pub fn var(index: usize) -> Self {
        Self::monomial(Monomial::var(index, 1), BigRational::one())
    }

    pub fn monomial(m: Monomial, c: BigRational) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            MPoly { terms: vec![(m, c)] }
        }
    }

    /// Builds a polynomial from arbitrary (possibly repeated, unsorted) terms.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, BigRational)>) -> Self {
        let mut v: Vec<(Monomial, BigRational)> = terms.into_iter().collect();
        v.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Monomial, BigRational)> = Vec::with_capacity(v.len());
        for (m, c) in v {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        MPoly { terms: out }
    }

    pub fn terms(&self) -> &[(Monomial, BigRational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        if self.is_zero() {
            Some(BigRational::zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    pub fn leading(&self) -> Option<&(Monomial, BigRational)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.terms.first().map(|t| t.1.clone()).unwrap_or_else(BigRational::zero)
    }

    /// Highest variable slot used by any term.
    pub fn width(&self) -> usize {
        self.terms.iter().map(|(m, _)| m.width()).max().unwrap_or(0)
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.exp(var) > 0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exp(var)).max().unwrap_or(0)
    }

    pub fn neg(&self) -> MPoly {
        MPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, c: &BigRational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly { terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> MPoly {
        MPoly { terms: self.terms.iter().map(|(m, c)| (m.mul(mono), c.clone())).collect() }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &a[i].1 + &b[j].1;
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        MPoly { terms: out }
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        if self.is_zero() || other.is_zero() {
            return MPoly::zero();
        }
        if other.is_constant() {
            return self.scale(&other.terms[0].1);
        }
        if self.is_constant() {
            return other.scale(&self.terms[0].1);
        }
        let mut acc: Vec<(Monomial, BigRational)> =
            Vec::with_capacity(self.terms.len() * other.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                acc.push((m1.mul(m2), c1 * c2));
            }
        }
        MPoly::from_terms(acc)
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut result = MPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Exact division; `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &MPoly) -> Option<MPoly> {
        if divisor.is_zero() {
            return None;
        }
        if divisor.is_constant() {
            return Some(self.scale(&divisor.terms[0].1.recip()));
        }
        if divisor.is_monomial() {
            let (dm, dc) = &divisor.terms[0];
            let inv = dc.recip();
            let mut terms = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                terms.push((m.div(dm)?, c * &inv));
            }
            // dividing by a monomial preserves the relative order
            return Some(MPoly { terms });
        }
        let (lm, lc) = divisor.terms[0].clone();
        let inv = lc.recip();
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.terms.first().cloned() {
            let qm = m.div(&lm)?;
            let qc = &c * &inv;
            rem = rem.sub(&divisor.mul_monomial(&qm).scale(&qc));
            quot.push((qm, qc));
        }
        Some(MPoly::from_terms(quot))
    }

    /// Scales so the leading coefficient is one.
    pub fn monic(&self) -> MPoly {
        match self.terms.first() {
            None => MPoly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    /// Greatest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        match it.next() {
            None => Monomial::one(),
            Some((m, _)) => it.fold(m.clone(), |acc, (m, _)| acc.gcd(m)),
        }
    }

    /// Substitutes a rational value for one variable.
    pub fn substitute(&self, var: usize, value: &BigRational) -> MPoly {
        let terms = self.terms.iter().map(|(m, c)| {
            let e = m.exp(var);
            let factor = pow_rational(value, e);
            (m.without_var(var), c * factor)
        });
        MPoly::from_terms(terms)
    }

    /// Substitutes a polynomial for one variable.
    pub fn compose(&self, var: usize, value: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        let mut powers: Vec<MPoly> = vec![MPoly::one()];
        for (m, c) in &self.terms {
            let e = m.exp(var) as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap().mul(value);
                powers.push(next);
            }
            out = out.add(&powers[e].mul_monomial(&m.without_var(var)).scale(c));
        }
        out
    }

    /// Coefficient list in `var`, index = exponent of `var`.
    fn coeffs_in(&self, var: usize) -> Vec<MPoly> {
        let deg = self.degree_in(var) as usize;
        let mut buckets: Vec<Vec<(Monomial, BigRational)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            buckets[m.exp(var) as usize].push((m.without_var(var), c.clone()));
        }
        buckets.into_iter().map(MPoly::from_terms).collect()
    }

    fn from_coeffs_in(var: usize, coeffs: &[MPoly]) -> MPoly {
        let mut terms = Vec::new();
        for (e, c) in coeffs.iter().enumerate() {
            let vm = Monomial::var(var, e as u32);
            for (m, x) in &c.terms {
                terms.push((m.mul(&vm), x.clone()));
            }
        }
        MPoly::from_terms(terms)
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, other: &MPoly) -> MPoly {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        if self.is_constant() || other.is_constant() {
            return MPoly::one();
        }
        if self.is_monomial() || other.is_monomial() {
            let m = self.monomial_content().gcd(&other.monomial_content());
            return MPoly::monomial(m, BigRational::one());
        }
        if self == other {
            return self.monic();
        }
        let width = self.width().max(other.width());
        let var = (0..width).rev().find(|&v| self.uses_var(v) || other.uses_var(v)).unwrap();
        let in_a = self.uses_var(var);
        let in_b = other.uses_var(var);
        if !in_a {
            return self.gcd(&content(&other.coeffs_in(var)));
        }
        if !in_b {
            return other.gcd(&content(&self.coeffs_in(var)));
        }
        let only_var = (0..width).all(|v| v == var || (!self.uses_var(v) && !other.uses_var(v)));
        if only_var {
            return univariate_gcd(self, other, var);
        }
        let ua = self.coeffs_in(var);
        let ub = other.coeffs_in(var);
        let ca = content(&ua);
        let cb = content(&ub);
        let g = ca.gcd(&cb);
        let mut r0 = primitive(&ua, &ca);
        let mut r1 = primitive(&ub, &cb);
        if r0.len() < r1.len() {
            std::mem::swap(&mut r0, &mut r1);
        }
        loop {
            let r = prem(&r0, &r1);
            if r.is_empty() {
                break;
            }
            if r.len() == 1 {
                // constant in `var`: primitive gcd is trivial
                return g.monic();
            }
            let c = content(&r);
            r0 = r1;
            r1 = primitive(&r, &c);
        }
        let h = MPoly::from_coeffs_in(var, &r1);
        g.mul(&h).monic()
    }

    /// Evaluates at a full rational point; variables past `point.len()` must be absent.
    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t *= pow_rational(&point[i], e);
                }
            }
            acc += t;
        }
        acc
    }

    /// Exact square root, if one exists over the rationals.
    pub fn sqrt(&self) -> Option<MPoly> {
        if self.is_zero() {
            return Some(MPoly::zero());
        }
        let (lm, lc) = self.terms[0].clone();
        let root_c = rational_sqrt(&lc)?;
        let mut half = SmallVec::<[u32; 4]>::new();
        for &e in lm.exponents() {
            if e % 2 != 0 {
                return None;
            }
            half.push(e / 2);
        }
        let lead = MPoly::monomial(Monomial(half), root_c);
        let mut root = lead.clone();
        let two_lead = lead.scale(&BigRational::from_integer(BigInt::from(2)));
        let (tlm, tlc) = two_lead.terms[0].clone();
        for _ in 0..=self.terms.len() * 4 + 4 {
            let rem = self.sub(&root.mul(&root));
            if rem.is_zero() {
                return Some(root);
            }
            let (rm, rc) = rem.terms[0].clone();
            let qm = rm.div(&tlm)?;
            if qm >= tlm {
                return None;
            }
            let next = MPoly::monomial(qm, rc / &tlc);
            root = root.add(&next);
            if root.terms.last().map(|t| t.0.total_degree()).unwrap_or(0) * 2
                < self.terms.last().map(|t| t.0.total_degree()).unwrap_or(0)
            {
                return None;
            }
        }
        None
    }

    pub fn fmt_with(&self, f: &mut fmt::Formatter<'_>, names: &dyn Fn(usize) -> String) -> fmt::Result {
        write_terms(f, self.terms.iter().map(|(m, c)| (laurent_of(m), c)), names)
    }
}

fn laurent_of(m: &Monomial) -> Vec<i64> {
    m.exponents().iter().map(|&e| e as i64).collect()
}

/// Writes `c * x^e * ...` terms; exponent vectors may carry negative entries.
pub(crate) fn write_terms<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (Vec<i64>, &'a BigRational)>,
    names: &dyn Fn(usize) -> String,
) -> fmt::Result {
    let mut first = true;
    for (exps, c) in terms {
        let neg = c.is_negative();
        let abs = c.abs();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { "-" } else { "+" })?;
        }
        first = false;
        let mut factors: Vec<String> = Vec::new();
        for (i, &e) in exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if e == 1 {
                factors.push(names(i));
            } else {
                factors.push(format!("{}^{}", names(i), e));
            }
        }
        if factors.is_empty() {
            write!(f, "{}", abs)?;
        } else if abs.is_one() {
            write!(f, "{}", factors.join("*"))?;
        } else {
            write!(f, "{}*{}", abs, factors.join("*"))?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

pub(crate) fn pow_rational(x: &BigRational, e: u32) -> BigRational {
    num_traits::pow::pow(x.clone(), e as usize)
}

fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

fn content(coeffs: &[MPoly]) -> MPoly {
    let mut g = MPoly::zero();
    for c in coeffs {
        if c.is_zero() {
            continue;
        }
        g = if g.is_zero() { c.monic() } else { g.gcd(c) };
        if g.is_one() {
            break;
        }
    }
    g
}

fn primitive(coeffs: &[MPoly], content: &MPoly) -> Vec<MPoly> {
    let mut out: Vec<MPoly> = coeffs
        .iter()
        .map(|c| c.div_exact(content).expect("content divides every coefficient"))
        .collect();
    // clear rational denominators to keep pseudo-remainders small
    let rc = out
        .iter()
        .flat_map(|c| c.terms.iter().map(|t| t.1.clone()))
        .fold(None::<(BigInt, BigInt)>, |acc, c| match acc {
            None => Some((c.numer().clone(), c.denom().clone())),
            Some((n, d)) => Some((n.gcd(c.numer()), d.lcm(c.denom()))),
        });
    if let Some((n, d)) = rc {
        if !n.is_zero() {
            let s = BigRational::new(d, n);
            for c in out.iter_mut() {
                *c = c.scale(&s);
            }
        }
    }
    while out.last().map(|c| c.is_zero()).unwrap_or(false) {
        out.pop();
    }
    out
}

/// Pseudo-remainder of univariate polynomials with polynomial coefficients.
fn prem(a: &[MPoly], b: &[MPoly]) -> Vec<MPoly> {
    let mut r: Vec<MPoly> = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = c.mul(lb);
        }
        for (i, bc) in b.iter().enumerate() {
            let t = bc.mul(&lr);
            r[i + shift] = r[i + shift].sub(&t);
        }
        while r.last().map(|c| c.is_zero()).unwrap_or(false) {
            r.pop();
        }
    }
    r
}

fn univariate_gcd(a: &MPoly, b: &MPoly, var: usize) -> MPoly {
    let to_dense = |p: &MPoly| -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); p.degree_in(var) as usize + 1];
        for (m, c) in &p.terms {
            v[m.exp(var) as usize] = c.clone();
        }
        v
    };
    let mut r0 = to_dense(a);
    let mut r1 = to_dense(b);
    if r0.len() < r1.len() {
        std::mem::swap(&mut r0, &mut r1);
    }
    while !(r1.len() == 1 && r1[0].is_zero()) && !r1.is_empty() {
        let rem = dense_rem(&r0, &r1);
        r0 = r1;
        r1 = rem;
    }
    let lc = r0.last().unwrap().clone();
    let terms = r0
        .into_iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(e, c)| (Monomial::var(var, e as u32), c / &lc));
    MPoly::from_terms(terms)
}

fn dense_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let inv = b[db].recip();
    while r.len() > db {
        let dr = r.len() - 1;
        let f = &r[dr] * &inv;
        if !f.is_zero() {
            for (i, bc) in b.iter().enumerate() {
                r[i + dr - db] -= &f * bc;
            }
        }
        r.pop();
    }
    while r.last().map(|c| c.is_zero()).unwrap_or(false) {
        r.pop();
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> MPoly {
        MPoly::var(0)
    }
    fn x() -> MPoly {
        MPoly::var(1)
    }
    fn c(v: i64) -> MPoly {
        MPoly::from_int(v)
    }

    #[test]
    fn univariate_gcd_cancels_common_factor() {
        // (q^2 - 1)(q + 2) and (q - 1)(q + 5)
        let a = q().mul(&q()).sub(&c(1)).mul(&q().add(&c(2)));
        let b = q().sub(&c(1)).mul(&q().add(&c(5)));
        assert_eq!(a.gcd(&b), q().sub(&c(1)));
    }

    #[test]
    fn multivariate_gcd() {
        let f = q().mul(&x()).add(&c(1));
        let a = f.mul(&q().add(&x()));
        let b = f.mul(&q().sub(&c(3)));
        assert_eq!(a.gcd(&b), f.monic());
        assert!(a.gcd(&q().add(&c(7))).is_one());
    }

    #[test]
    fn exact_division_roundtrip() {
        let a = q().add(&x()).pow(3);
        let b = q().add(&x());
        assert_eq!(a.div_exact(&b).unwrap(), b.pow(2));
        assert!(a.div_exact(&q().sub(&x())).is_none());
    }

    #[test]
    fn square_roots() {
        let s = q().mul(&q()).add(&c(1)).add(&q().scale(&BigRational::from_integer(3.into())));
        assert_eq!(s.mul(&s).sqrt().unwrap(), s);
        assert!(q().add(&c(1)).sqrt().is_none());
        assert!(c(2).sqrt().is_none());
    }
}

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;

use crate::coeff::Field;

pub type Letters = SmallVec<[u16; 8]>;

/// A word over generator indices, carrying its total weight so that the
/// derived order is weight first, then lexicographic by generator position.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word {
    weight: u32,
    letters: Letters,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn new(letters: &[u16], weights: &[u32]) -> Self {
        let weight = letters.iter().map(|&l| weights[l as usize]).sum();
        Word { weight, letters: letters.iter().copied().collect() }
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn letters(&self) -> &[u16] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { weight: self.weight + other.weight, letters }
    }

    /// Subword `[i, j)`; its weight is recomputed from `weights`.
    pub fn slice(&self, i: usize, j: usize, weights: &[u32]) -> Word {
        Word::new(&self.letters[i..j], weights)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight.cmp(&other.weight).then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Noncommutative polynomial: words mapped to nonzero coefficients, iterated
/// in increasing term order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct NCPoly<K> {
    terms: BTreeMap<Word, K>,
}

impl<K: Field> Default for NCPoly<K> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<K: Field> NCPoly<K> {
    pub fn zero() -> Self {
        NCPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(K::one())
    }

    pub fn constant(c: K) -> Self {
        Self::term(Word::empty(), c)
    }

    pub fn term(w: Word, c: K) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        NCPoly { terms }
    }

    pub fn word(w: Word) -> Self {
        Self::term(w, K::one())
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Word, K)>) -> Self {
        let mut p = Self::zero();
        for (w, c) in it {
            p.add_term(w, c);
        }
        p
    }

    pub fn add_term(&mut self, w: Word, c: K) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(v) => {
                *v = v.add(&c);
                if v.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &K)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Word, K> {
        self.terms
    }

    pub fn from_map(terms: BTreeMap<Word, K>) -> Self {
        debug_assert!(terms.values().all(|c| !c.is_zero()));
        NCPoly { terms }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> K {
        self.terms.get(w).cloned().unwrap_or_else(K::zero)
    }

    /// Largest term in the term order.
    pub fn leading(&self) -> Option<(&Word, &K)> {
        self.terms.iter().next_back()
    }

    pub fn degree(&self) -> u32 {
        self.leading().map(|(w, _)| w.weight()).unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|w| w.is_empty())
    }

    pub fn constant_part(&self) -> K {
        self.coeff(&Word::empty())
    }

    pub fn add(&self, o: &Self) -> Self {
        let (mut big, small) = if self.len() >= o.len() { (self.clone(), o) } else { (o.clone(), self) };
        for (w, c) in &small.terms {
            big.add_term(w.clone(), c.clone());
        }
        big
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(w.clone(), c.neg());
        }
        out
    }

    pub fn neg(&self) -> Self {
        NCPoly { terms: self.terms.iter().map(|(w, c)| (w.clone(), c.neg())).collect() }
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        NCPoly { terms: self.terms.iter().map(|(w, x)| (w.clone(), x.mul(c))).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &o.terms {
                out.add_term(w1.concat(w2), c1.mul(c2));
            }
        }
        out
    }

    /// `left · self · right` for words.
    pub fn sandwich(&self, left: &Word, right: &Word) -> Self {
        NCPoly {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (left.concat(w).concat(right), c.clone()))
                .collect(),
        }
    }

    /// Scales so the leading coefficient is one.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some((_, c)) => self.scale(&c.inv().unwrap()),
        }
    }

    pub fn map_coeffs<L: Field>(&self, f: impl Fn(&K) -> L) -> NCPoly<L> {
        NCPoly::from_terms(self.terms.iter().map(|(w, c)| (w.clone(), f(c))))
    }

    pub fn try_map_coeffs<L: Field, E>(&self, f: impl Fn(&K) -> Result<L, E>) -> Result<NCPoly<L>, E> {
        let mut out = NCPoly::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c)?);
        }
        Ok(out)
    }

    /// Substitutes a polynomial for every generator (an algebra map on words).
    pub fn substitute(&self, images: &[NCPoly<K>]) -> NCPoly<K> {
        let mut out = NCPoly::zero();
        for (w, c) in &self.terms {
            let mut t = NCPoly::constant(c.clone());
            for &l in w.letters() {
                t = t.mul(&images[l as usize]);
            }
            out = out.add(&t);
        }
        out
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> DisplayPoly<'a, K> {
        DisplayPoly { p: self, names }
    }
}

pub struct DisplayPoly<'a, K> {
    p: &'a NCPoly<K>,
    names: &'a [String],
}

impl<K: Field> fmt::Display for DisplayPoly<'_, K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in self.p.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let word: Vec<&str> = w.letters().iter().map(|&l| self.names[l as usize].as_str()).collect();
            if w.is_empty() {
                write!(f, "({c})")?;
            } else if c.is_one() {
                write!(f, "{}", word.join("*"))?;
            } else {
                write!(f, "({c})*{}", word.join("*"))?;
            }
        }
        Ok(())
    }
}

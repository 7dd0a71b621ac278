use std::collections::{HashMap, HashSet};
use std::sync::{Arc, RwLock};

use crate::coeff::Field;

use super::poly::{Letters, NCPoly, Word};
use super::NcError;

/// Generator names and weights; shared by every polynomial of an algebra.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Generators {
    names: Vec<String>,
    weights: Vec<u32>,
}

impl Generators {
    pub fn new(names: Vec<String>, weights: Vec<u32>) -> Result<Self, NcError> {
        assert_eq!(names.len(), weights.len());
        let mut seen = HashSet::new();
        for n in &names {
            if !seen.insert(n) {
                return Err(NcError::DuplicateGenerator(n.clone()));
            }
        }
        if weights.iter().any(|&w| w == 0) {
            return Err(NcError::ZeroWeight);
        }
        Ok(Generators { names, weights })
    }

    pub fn uniform(names: &[&str]) -> Self {
        Self::new(names.iter().map(|s| s.to_string()).collect(), vec![1; names.len()]).unwrap()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn word(&self, letters: &[u16]) -> Word {
        Word::new(letters, &self.weights)
    }

    pub fn gen<K: Field>(&self, i: usize) -> NCPoly<K> {
        NCPoly::word(self.word(&[i as u16]))
    }

    pub fn by_name<K: Field>(&self, name: &str) -> Option<NCPoly<K>> {
        self.index(name).map(|i| self.gen(i))
    }
}

/// Generators plus defining relations (each understood as `= 0`).
#[derive(Clone, Debug)]
pub struct Presentation<K> {
    pub gens: Arc<Generators>,
    pub relations: Vec<NCPoly<K>>,
}

impl<K: Field> Presentation<K> {
    pub fn new(gens: Generators) -> Self {
        Presentation { gens: Arc::new(gens), relations: Vec::new() }
    }

    pub fn with_relations(gens: Arc<Generators>, relations: Vec<NCPoly<K>>) -> Self {
        let relations = relations.into_iter().filter(|r| !r.is_zero()).collect();
        Presentation { gens, relations }
    }

    pub fn gen(&self, i: usize) -> NCPoly<K> {
        self.gens.gen(i)
    }

    pub fn max_relation_degree(&self) -> u32 {
        self.relations.iter().map(|r| r.degree()).max().unwrap_or(0)
    }
}

/// Resource limits for completion; exceeding one reports divergence.
#[derive(Clone, Copy, Debug)]
pub struct CompletionLimits {
    pub max_rules: usize,
    pub max_terms_per_rule: usize,
}

impl Default for CompletionLimits {
    fn default() -> Self {
        CompletionLimits { max_rules: 5000, max_terms_per_rule: 20000 }
    }
}

/// Oriented rules `lead → rhs`, confluent on overlaps up to `degree`.
#[derive(Debug)]
pub struct RewriteSystem<K> {
    gens: Arc<Generators>,
    rules: HashMap<Letters, NCPoly<K>>,
    lead_lens: Vec<usize>,
    degree: u32,
    fully_confluent: bool,
    cache: RwLock<HashMap<Word, NCPoly<K>>>,
}

impl<K: Field> Clone for RewriteSystem<K> {
    fn clone(&self) -> Self {
        RewriteSystem {
            gens: self.gens.clone(),
            rules: self.rules.clone(),
            lead_lens: self.lead_lens.clone(),
            degree: self.degree,
            fully_confluent: self.fully_confluent,
            cache: RwLock::new(HashMap::new()),
        }
    }
}

impl<K: Field> RewriteSystem<K> {
    fn empty(gens: Arc<Generators>, degree: u32) -> Self {
        RewriteSystem {
            gens,
            rules: HashMap::new(),
            lead_lens: Vec::new(),
            degree,
            fully_confluent: false,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn gens(&self) -> &Arc<Generators> {
        &self.gens
    }

    pub fn names(&self) -> &[String] {
        self.gens.names()
    }

    pub fn completion_degree(&self) -> u32 {
        self.degree
    }

    /// True when every overlap, of any degree, resolves: the rules form a
    /// finite complete system and normal forms are valid in all degrees.
    pub fn is_fully_confluent(&self) -> bool {
        self.fully_confluent
    }

    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    /// Rules as `(lead word, rhs)`, sorted by lead.
    pub fn rules(&self) -> Vec<(Word, NCPoly<K>)> {
        let mut v: Vec<(Word, NCPoly<K>)> = self
            .rules
            .iter()
            .map(|(l, r)| (Word::new(l, self.gens.weights()), r.clone()))
            .collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    pub fn max_rule_degree(&self) -> u32 {
        self.rules().iter().map(|(w, _)| w.weight()).max().unwrap_or(0)
    }

    /// Rules as relations `lead − rhs`.
    pub fn rule_relations(&self) -> Vec<NCPoly<K>> {
        self.rules().into_iter().map(|(w, r)| NCPoly::word(w).sub(&r)).collect()
    }

    fn find_redex(&self, w: &Word) -> Option<(usize, usize, &NCPoly<K>)> {
        let l = w.letters();
        for i in 0..l.len() {
            for &len in &self.lead_lens {
                if i + len > l.len() {
                    break;
                }
                if let Some(rhs) = self.rules.get(&l[i..i + len]) {
                    return Some((i, i + len, rhs));
                }
            }
        }
        None
    }

    pub fn is_irreducible(&self, w: &Word) -> bool {
        self.find_redex(w).is_none()
    }

    fn nf_word(&self, w: &Word) -> NCPoly<K> {
        if let Some(p) = self.cache.read().unwrap().get(w) {
            return p.clone();
        }
        let result = match self.find_redex(w) {
            None => NCPoly::word(w.clone()),
            Some((i, j, rhs)) => {
                let weights = self.gens.weights();
                let pre = w.slice(0, i, weights);
                let suf = w.slice(j, w.len(), weights);
                let mut acc: std::collections::BTreeMap<Word, K> = Default::default();
                for (rw, rc) in rhs.terms() {
                    let sub = self.nf_word(&pre.concat(rw).concat(&suf));
                    for (x, c) in sub.terms() {
                        let e = acc.entry(x.clone()).or_insert_with(K::zero);
                        *e = e.add(&c.mul(rc));
                    }
                }
                acc.retain(|_, c| !c.is_zero());
                NCPoly::from_map(acc)
            }
        };
        self.cache.write().unwrap().insert(w.clone(), result.clone());
        result
    }

    /// Reduces without checking the degree bound.
    pub fn reduce(&self, f: &NCPoly<K>) -> NCPoly<K> {
        let mut acc: std::collections::BTreeMap<Word, K> = Default::default();
        for (w, c) in f.terms() {
            let sub = self.nf_word(w);
            for (x, d) in sub.terms() {
                let e = acc.entry(x.clone()).or_insert_with(K::zero);
                *e = e.add(&c.mul(d));
            }
        }
        acc.retain(|_, c| !c.is_zero());
        NCPoly::from_map(acc)
    }

    fn check_degree(&self, d: u32) -> Result<(), NcError> {
        if d > self.degree && !self.fully_confluent {
            Err(NcError::DegreeExceeded { degree: d, bound: self.degree })
        } else {
            Ok(())
        }
    }

    /// Unique normal form of `f` modulo the ideal.
    pub fn normal_form(&self, f: &NCPoly<K>) -> Result<NCPoly<K>, NcError> {
        self.check_degree(f.degree())?;
        Ok(self.reduce(f))
    }

    /// Normal form of a product, reducing the factors first.
    pub fn mul(&self, a: &NCPoly<K>, b: &NCPoly<K>) -> NCPoly<K> {
        self.reduce(&a.mul(b))
    }

    /// Irreducible words of weight exactly `d`, in increasing order.
    pub fn irreducible_words_of_weight(&self, d: u32) -> Result<Vec<Word>, NcError> {
        self.check_degree(d)?;
        let mut out = Vec::new();
        let mut stack = vec![Word::empty()];
        while let Some(w) = stack.pop() {
            if w.weight() == d {
                out.push(w);
                continue;
            }
            for g in 0..self.gens.len() {
                let nw = w.concat(&self.gens.word(&[g as u16]));
                if nw.weight() > d {
                    continue;
                }
                // only suffixes can be new redexes
                let l = nw.letters();
                let reducible = self
                    .lead_lens
                    .iter()
                    .any(|&len| len <= l.len() && self.rules.contains_key(&l[l.len() - len..]));
                if !reducible {
                    stack.push(nw);
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// Irreducible words of weight at most `d`, in increasing order.
    pub fn irreducible_words(&self, d: u32) -> Result<Vec<Word>, NcError> {
        let mut out = Vec::new();
        for e in 0..=d {
            out.extend(self.irreducible_words_of_weight(e)?);
        }
        Ok(out)
    }

    /// Number of irreducible words of weight `d` (graded component dimension).
    pub fn graded_dimension(&self, d: u32) -> Result<usize, NcError> {
        Ok(self.irreducible_words_of_weight(d)?.len())
    }

    /// Dimension of the filtration level `≤ d`.
    pub fn filtered_dimension(&self, d: u32) -> Result<usize, NcError> {
        let mut n = 0;
        for e in 0..=d {
            n += self.graded_dimension(e)?;
        }
        Ok(n)
    }

    fn insert_rule(&mut self, lead: Word, rhs: NCPoly<K>) {
        self.rules.insert(lead.letters().iter().copied().collect(), rhs);
        let mut lens: Vec<usize> = self.rules.keys().map(|k| k.len()).collect();
        lens.sort_unstable();
        lens.dedup();
        self.lead_lens = lens;
        self.cache.write().unwrap().clear();
    }

    fn remove_rule(&mut self, lead: &[u16]) -> Option<NCPoly<K>> {
        let r = self.rules.remove(lead);
        let mut lens: Vec<usize> = self.rules.keys().map(|k| k.len()).collect();
        lens.sort_unstable();
        lens.dedup();
        self.lead_lens = lens;
        self.cache.write().unwrap().clear();
        r
    }

    /// All overlap ambiguities `a = xy, b = yz` as (overlap word xyz, s-poly).
    fn overlaps(&self, restrict: Option<&HashSet<Letters>>, bound: Option<u32>) -> Vec<(Word, NCPoly<K>)> {
        let weights = self.gens.weights();
        let mut leads: Vec<&Letters> = self.rules.keys().collect();
        leads.sort();
        let mut out = Vec::new();
        for a in &leads {
            for b in &leads {
                if let Some(r) = restrict {
                    if !r.contains(*a) && !r.contains(*b) {
                        continue;
                    }
                }
                for k in 1..a.len().min(b.len()) {
                    if a[a.len() - k..] != b[..k] {
                        continue;
                    }
                    let mut letters: Letters = (*a).clone();
                    letters.extend_from_slice(&b[k..]);
                    let ow = Word::new(&letters, weights);
                    if bound.is_some_and(|d| ow.weight() > d) {
                        continue;
                    }
                    let suffix = Word::new(&b[k..], weights);
                    let prefix = Word::new(&a[..a.len() - k], weights);
                    let s = self.rules[*a]
                        .sandwich(&Word::empty(), &suffix)
                        .sub(&self.rules[*b].sandwich(&prefix, &Word::empty()));
                    out.push((ow, s));
                }
            }
        }
        out.sort_by(|x, y| x.0.cmp(&y.0));
        out
    }

    /// Knuth–Bendix style completion up to weight `degree`.
    pub fn complete(p: &Presentation<K>, degree: u32, limits: CompletionLimits) -> Result<Self, NcError> {
        let mut sys = Self::empty(p.gens.clone(), degree);
        sys.run_completion(p.relations.clone(), limits)?;
        Ok(sys)
    }

    /// Completion of this system with extra relations added.
    pub fn extend(&self, extra: &[NCPoly<K>], degree: u32, limits: CompletionLimits) -> Result<Self, NcError> {
        let mut sys = self.clone();
        sys.degree = degree;
        sys.fully_confluent = false;
        sys.run_completion(extra.to_vec(), limits)?;
        Ok(sys)
    }

    fn run_completion(&mut self, mut pending: Vec<NCPoly<K>>, limits: CompletionLimits) -> Result<(), NcError> {
        let mut fresh: HashSet<Letters> = self.rules.keys().cloned().collect();
        loop {
            pending.sort_by(|a, b| a.leading().map(|t| t.0).cmp(&b.leading().map(|t| t.0)));
            pending.reverse();
            while let Some(p) = pending.pop() {
                let r = self.reduce(&p);
                let Some((lead, lc)) = r.leading().map(|(w, c)| (w.clone(), c.clone())) else {
                    continue;
                };
                if lead.is_empty() {
                    return Err(NcError::TrivialQuotient);
                }
                let inv = lc.inv().expect("nonzero leading coefficient");
                let mut rhs = r.scale(&inv.neg());
                rhs.add_term(lead.clone(), K::one());
                if rhs.len() > limits.max_terms_per_rule {
                    return Err(NcError::CompletionDiverged {
                        rules: self.rules.len(),
                        reason: format!("rule with {} terms", rhs.len()),
                    });
                }
                // rules whose lead contains the new lead go back to pending
                let l = lead.letters();
                let stale: Vec<Letters> = self
                    .rules
                    .keys()
                    .filter(|k| k.len() > l.len() && k.windows(l.len()).any(|win| win == l))
                    .cloned()
                    .collect();
                for k in stale {
                    let old = self.remove_rule(&k).unwrap();
                    fresh.remove(&k);
                    let w = Word::new(&k, self.gens.weights());
                    pending.push(NCPoly::word(w).sub(&old));
                }
                self.insert_rule(lead.clone(), rhs);
                fresh.insert(lead.letters().iter().copied().collect());
                if self.rules.len() > limits.max_rules {
                    return Err(NcError::CompletionDiverged {
                        rules: self.rules.len(),
                        reason: "rule limit reached".into(),
                    });
                }
                // keep the queue ordered by leading word
                pending.sort_by(|a, b| b.leading().map(|t| t.0).cmp(&a.leading().map(|t| t.0)));
            }
            let spolys: Vec<NCPoly<K>> = self
                .overlaps(Some(&fresh), Some(self.degree))
                .into_iter()
                .map(|(_, s)| self.reduce(&s))
                .filter(|s| !s.is_zero())
                .collect();
            fresh.clear();
            if spolys.is_empty() {
                break;
            }
            pending = spolys;
        }
        self.interreduce();
        self.fully_confluent = self
            .overlaps(None, None)
            .into_iter()
            .all(|(_, s)| self.reduce(&s).is_zero());
        Ok(())
    }

    fn interreduce(&mut self) {
        let leads: Vec<Letters> = self.rules.keys().cloned().collect();
        let mut reduced = Vec::with_capacity(leads.len());
        for l in &leads {
            reduced.push(self.reduce(&self.rules[l]));
        }
        for (l, r) in leads.into_iter().zip(reduced) {
            self.rules.insert(l, r);
        }
        self.cache.write().unwrap().clear();
    }

    /// Map coefficients into another field (e.g. specialize q) and re-complete.
    pub fn specialize<L: Field>(
        &self,
        f: impl Fn(&K) -> Result<L, NcError>,
        limits: CompletionLimits,
    ) -> Result<RewriteSystem<L>, NcError> {
        let rels = self
            .rule_relations()
            .iter()
            .map(|r| r.try_map_coeffs(&f))
            .collect::<Result<Vec<_>, _>>()?;
        let p = Presentation::with_relations(self.gens.clone(), rels);
        RewriteSystem::complete(&p, self.degree, limits)
    }
}

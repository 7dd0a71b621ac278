//! The reflection-equation algebra, its ℏ-shifted deformation, the quantum
//! trace and the Cayley–Hamilton identity.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::coeff::{Field, ParamSet, QScalar};
use crate::hecke::HeckeSymmetry;
use crate::linalg::{Echelon, Matrix};
use crate::ncalg::{
    solve_linear, AlgMatrix, CompletionLimits, Generators, NCPoly, NcError, Presentation, RewriteSystem, Word,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReError {
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("solution not unique: {0}-dimensional family")]
    SolutionNotUnique(usize),
    #[error(transparent)]
    Nc(#[from] NcError),
}

/// Generator names `l{i}{j}` for the entries `L[i][j] = l_i^j` (1-based).
pub fn l_names(n: usize, prefix: &str) -> Vec<String> {
    let mut v = Vec::with_capacity(n * n);
    for i in 1..=n {
        for j in 1..=n {
            v.push(format!("{prefix}{i}{j}"));
        }
    }
    v
}

/// The free algebra on `gens`, as a (rule-free) rewrite system.
pub fn free_system<K: Field>(gens: &Arc<Generators>, degree: u32) -> Arc<RewriteSystem<K>> {
    let p = Presentation::with_relations(gens.clone(), vec![]);
    Arc::new(RewriteSystem::complete(&p, degree, CompletionLimits::default()).expect("free algebra"))
}

/// `n×n` matrix whose `(i, j)` entry is generator `offset + i·n + j`.
pub fn generator_matrix<K: Field>(ambient: &Arc<RewriteSystem<K>>, n: usize, offset: usize) -> AlgMatrix<K> {
    let g = ambient.gens().clone();
    AlgMatrix::from_fn(ambient, n, n, |i, j| g.gen(offset + i * n + j))
}

/// Entries of `R L₁ R L₁ − L₁ R L₁ R − ℏ (R L₁ − L₁ R)` over `ambient`, with
/// `L₁ = L ⊗ id`.
pub fn re_relation_matrix<K: Field>(
    r: &Matrix<K>,
    l: &AlgMatrix<K>,
    hbar: &K,
) -> Result<AlgMatrix<K>, NcError> {
    let n = l.rows();
    let amb = l.ambient();
    let rm = AlgMatrix::from_scalars(amb, r);
    let l1 = l.kron_identity(n);
    let rl = rm.mul(&l1)?;
    let lr = l1.mul(&rm)?;
    let lhs = rl.mul(&rl)?;
    let rhs = lr.mul(&lr)?;
    let mut out = lhs.sub(&rhs)?;
    if !hbar.is_zero() {
        out = out.sub(&rl.sub(&lr)?.scale(hbar))?;
    }
    Ok(out)
}

/// Linearly independent subset of `rels`, found by exact elimination.
pub fn independent_relations<K: Field>(rels: &[NCPoly<K>]) -> Vec<NCPoly<K>> {
    let mut ech: Echelon<Word, K> = Echelon::new();
    let mut out = Vec::new();
    for r in rels {
        let row: BTreeMap<Word, K> = r.terms().map(|(w, c)| (w.clone(), c.clone())).collect();
        if let Some(red) = ech.insert(row) {
            out.push(NCPoly::from_map(red));
        }
    }
    out
}

/// Per-degree comparison of a dimension sequence against its oracle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlatnessReport {
    pub filtered: bool,
    pub dims: Vec<usize>,
    pub expected: Vec<usize>,
    pub mismatches: Vec<usize>,
}

impl FlatnessReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// The diagonal matrix `D` of the quantum trace `Tr(D·L)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceForm<K: Field> {
    pub diagonal: Vec<K>,
    pub normalization: &'static str,
}

/// Central Cayley–Hamilton coefficients `σ(1..p)`.
#[derive(Clone, Debug)]
pub struct CHData<K: Field> {
    pub p: usize,
    /// `sigma[i]` is σ(i); `sigma[0] = 1`.
    pub sigma: Vec<NCPoly<K>>,
    pub central: bool,
    pub side: &'static str,
}

/// Result of a centrality test: the first generator that fails to commute.
pub fn central_witness<K: Field>(sys: &RewriteSystem<K>, f: &NCPoly<K>) -> Option<usize> {
    (0..sys.gens().len()).find(|&g| {
        let x = sys.gens().gen::<K>(g);
        !sys.reduce(&f.mul(&x).sub(&x.mul(f))).is_zero()
    })
}

/// The reflection-equation algebra of a Hecke symmetry, optionally
/// ℏ-shifted.
#[derive(Clone, Debug)]
pub struct REAlgebra<K: Field> {
    symmetry: HeckeSymmetry<K>,
    hbar: K,
    presentation: Presentation<K>,
    system: Arc<RewriteSystem<K>>,
    l: AlgMatrix<K>,
}

impl<K: Field> REAlgebra<K> {
    /// `R L₁ R L₁ = L₁ R L₁ R`, completed to `degree`.
    pub fn build(r: &HeckeSymmetry<K>, degree: u32) -> Result<Self, NcError> {
        Self::build_shifted(r, K::zero(), degree)
    }

    /// `R L₁ R L₁ − L₁ R L₁ R = ℏ (R L₁ − L₁ R)`, completed to `degree`.
    pub fn build_shifted(r: &HeckeSymmetry<K>, hbar: K, degree: u32) -> Result<Self, NcError> {
        let p = Self::presentation_for(r, &hbar, degree)?;
        Self::from_presentation(r.clone(), hbar, p, degree)
    }

    /// The deduplicated defining relations, without completing.
    pub fn presentation_for(r: &HeckeSymmetry<K>, hbar: &K, degree: u32) -> Result<Presentation<K>, NcError> {
        let n = r.n();
        let names = l_names(n, "l");
        let gens = Arc::new(Generators::new(names, vec![1; n * n])?);
        let free = free_system::<K>(&gens, degree);
        let l = generator_matrix(&free, n, 0);
        let rels = re_relation_matrix(r.matrix(), &l, hbar)?;
        Ok(Presentation::with_relations(gens, independent_relations(rels.entries())))
    }

    /// Completes an arbitrary presentation on the `l` generators (used for
    /// negative controls with corrupted relations).
    pub fn from_presentation(
        symmetry: HeckeSymmetry<K>,
        hbar: K,
        presentation: Presentation<K>,
        degree: u32,
    ) -> Result<Self, NcError> {
        let n = symmetry.n();
        let system = Arc::new(RewriteSystem::complete(&presentation, degree, CompletionLimits::default())?);
        let l = generator_matrix(&system, n, 0);
        Ok(REAlgebra { symmetry, hbar, presentation, system, l })
    }

    pub fn n(&self) -> usize {
        self.symmetry.n()
    }

    pub fn symmetry(&self) -> &HeckeSymmetry<K> {
        &self.symmetry
    }

    pub fn hbar(&self) -> &K {
        &self.hbar
    }

    pub fn is_shifted(&self) -> bool {
        !self.hbar.is_zero()
    }

    pub fn presentation(&self) -> &Presentation<K> {
        &self.presentation
    }

    pub fn system(&self) -> &Arc<RewriteSystem<K>> {
        &self.system
    }

    pub fn l(&self) -> &AlgMatrix<K> {
        &self.l
    }

    pub fn gen(&self, i: usize, j: usize) -> NCPoly<K> {
        self.system.gens().gen(i * self.n() + j)
    }

    /// Graded (or, when shifted, filtered) dimensions against the
    /// commutative oracle `C(n² + d − 1, d)`.
    pub fn check_flatness(&self, dmax: u32) -> Result<FlatnessReport, NcError> {
        let m = (self.n() * self.n()) as u64;
        let filtered = self.is_shifted();
        let mut dims = Vec::new();
        let mut expected = Vec::new();
        let mut cum = 0u64;
        for d in 0..=dmax {
            let graded = binomial(m + d as u64 - 1, d as u64);
            cum += graded;
            if filtered {
                dims.push(self.system.filtered_dimension(d)?);
                expected.push(cum as usize);
            } else {
                dims.push(self.system.graded_dimension(d)?);
                expected.push(graded as usize);
            }
        }
        let mismatches = (0..dims.len()).filter(|&d| dims[d] != expected[d]).collect();
        Ok(FlatnessReport { filtered, dims, expected, mismatches })
    }

    /// `Tr(D·L) = Σ d_i l_i^i`.
    pub fn trace_with(&self, d: &[K]) -> NCPoly<K> {
        (0..self.n()).fold(NCPoly::zero(), |acc, i| acc.add(&self.gen(i, i).scale(&d[i])))
    }

    /// Solves for the diagonal `D` making `Tr(D·L)` central; unique up to
    /// scalar, normalized by `d_1 = 1`.
    pub fn quantum_trace_matrix(&self) -> Result<TraceForm<K>, ReError> {
        let n = self.n();
        let ngen = n * n;
        let base = vec![NCPoly::zero(); ngen];
        let unknowns: Vec<Vec<NCPoly<K>>> = (0..n)
            .map(|i| {
                let lii = self.gen(i, i);
                (0..ngen)
                    .map(|g| {
                        let x = self.system.gens().gen::<K>(g);
                        lii.mul(&x).sub(&x.mul(&lii))
                    })
                    .collect()
            })
            .collect();
        let sol = solve_linear(&self.system, &base, &unknowns)
            .ok_or_else(|| ReError::NoSolution("trace form".into()))?;
        match sol.kernel.len() {
            0 => Err(ReError::NoSolution("only D = 0 is central".into())),
            1 => {
                let v = &sol.kernel[0];
                let s = v[0].inv().map_err(|_| ReError::NoSolution("first entry vanishes".into()))?;
                Ok(TraceForm { diagonal: v.iter().map(|x| x.mul(&s)).collect(), normalization: "d_1 = 1" })
            }
            k => Err(ReError::SolutionNotUnique(k)),
        }
    }

    /// The quantum trace `Tr_q(L)`.
    pub fn quantum_trace(&self) -> Result<NCPoly<K>, ReError> {
        Ok(self.trace_with(&self.quantum_trace_matrix()?.diagonal))
    }

    /// Solves `Σ_{i=0}^{p} (−1)^i σ(i)·L^{p−i} = 0` (σ(0) = 1, σ(i) of
    /// filtration degree ≤ i, written on the left) and checks centrality.
    pub fn ch_coefficients(&self, p: usize) -> Result<CHData<K>, ReError> {
        let powers: Vec<AlgMatrix<K>> = (0..=p).map(|k| self.l.pow(k as u32)).collect::<Result<_, _>>()?;
        let entries = |m: &AlgMatrix<K>| -> Vec<NCPoly<K>> { m.entries().to_vec() };
        let base = entries(&powers[p]);
        let mut unknowns = Vec::new();
        let mut labels: Vec<(usize, Word)> = Vec::new();
        for i in 1..=p {
            let words = if self.is_shifted() {
                self.system.irreducible_words(i as u32)?
            } else {
                self.system.irreducible_words_of_weight(i as u32)?
            };
            let sign = if i % 2 == 1 { K::one().neg() } else { K::one() };
            for w in words {
                let c = NCPoly::word(w.clone()).scale(&sign);
                unknowns.push(entries(&powers[p - i].left_mul_poly(&c)));
                labels.push((i, w));
            }
        }
        let sol = solve_linear(&self.system, &base, &unknowns)
            .ok_or_else(|| ReError::NoSolution("Cayley-Hamilton identity".into()))?;
        if !sol.kernel.is_empty() {
            return Err(ReError::SolutionNotUnique(sol.kernel.len()));
        }
        let mut sigma = vec![NCPoly::one()];
        sigma.resize(p + 1, NCPoly::zero());
        for ((i, w), x) in labels.into_iter().zip(sol.particular) {
            sigma[i].add_term(w, x);
        }
        let central = sigma[1..].iter().all(|s| central_witness(&self.system, s).is_none());
        Ok(CHData { p, sigma, central, side: "left" })
    }

    /// The matrix `Σ_{i} (−1)^i σ(i)·L^{p−i}`; zero iff the identity holds.
    pub fn ch_residual(&self, ch: &CHData<K>) -> Result<AlgMatrix<K>, NcError> {
        let p = ch.p;
        let mut coeffs = vec![NCPoly::zero(); p + 1];
        for i in 0..=p {
            let s = if i % 2 == 1 { ch.sigma[i].neg() } else { ch.sigma[i].clone() };
            coeffs[p - i] = s;
        }
        self.l.mat_poly(&coeffs)
    }
}

/// Outcome of the shift identity check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftCheck {
    pub holds: bool,
    pub witness: Option<(usize, usize)>,
}

/// Substitutes `L ↦ L − h·id` into the unshifted relations and compares, as
/// an identity in the free algebra, with the shifted relations at
/// `ℏ = h (q − q⁻¹)`.
pub fn shift_check<K: Field>(r: &HeckeSymmetry<K>, h: &K) -> Result<ShiftCheck, NcError> {
    let q = r.q();
    shift_check_with(r, h, &h.mul(&q.sub(&q.inv()?)))
}

/// As [`shift_check`] but with an explicit `ℏ` on the shifted side.
pub fn shift_check_with<K: Field>(r: &HeckeSymmetry<K>, h: &K, hbar: &K) -> Result<ShiftCheck, NcError> {
    let n = r.n();
    let gens = Arc::new(Generators::new(l_names(n, "l"), vec![1; n * n])?);
    let free = free_system::<K>(&gens, 4);
    let l = generator_matrix(&free, n, 0);
    let shifted = l.sub(&AlgMatrix::identity(&free, n).scale(h))?;
    let lhs = re_relation_matrix(r.matrix(), &shifted, &K::zero())?;
    let rhs = re_relation_matrix(r.matrix(), &l, hbar)?;
    let diff = lhs.sub(&rhs)?;
    Ok(ShiftCheck { holds: diff.is_zero(), witness: diff.first_nonzero() })
}

/// Parameter set `{q, h}` used by the symbolic shift identity.
pub fn shift_params() -> ParamSet {
    ParamSet::new(&["h"])
}

/// Convenience: the shift check for the standard symmetry with symbolic `h`.
pub fn standard_shift_check(n: usize) -> Result<ShiftCheck, NcError> {
    let p = shift_params();
    let r = crate::hecke::standard_r(n, &p);
    shift_check::<QScalar>(&r, &p.var("h"))
}

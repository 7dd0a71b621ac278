//! The RTT algebra for `n = 2` localized at the quantum determinant, its
//! antipode, and the coaction on the reflection-equation algebra.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::coeff::Field;
use crate::hecke::HeckeSymmetry;
use crate::ncalg::{
    solve_linear, AlgMatrix, CompletionLimits, Generators, NCPoly, NcError, Presentation, RewriteSystem,
};
use crate::realg::{free_system, generator_matrix, independent_relations, l_names, FlatnessReport, REAlgebra};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RttError {
    #[error("only n = 2 is supported, got n = {0}")]
    Unsupported(usize),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("{0}-dimensional solution family where one was expected")]
    NotUnique(usize),
    #[error(transparent)]
    Nc(#[from] NcError),
}

/// Outcome of an entrywise identity check between algebra-valued matrices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatrixCheck {
    pub holds: bool,
    pub witness: Option<(usize, usize)>,
}

impl MatrixCheck {
    fn of<K: Field>(diff: &AlgMatrix<K>) -> Self {
        let witness = diff.first_nonzero();
        MatrixCheck { holds: witness.is_none(), witness }
    }
}

// generator layout of the localized algebra
const DET: usize = 0;
const DINV: usize = 1;
const T0: usize = 2;

/// `T₁ = T ⊗ id` and `T₂ = id ⊗ T`.
fn legs<K: Field>(t: &AlgMatrix<K>) -> (AlgMatrix<K>, AlgMatrix<K>) {
    let n = t.rows();
    let amb = t.ambient();
    let t1 = t.kron_identity(n);
    let t2 = AlgMatrix::from_fn(amb, n * n, n * n, |a, b| {
        if a / n == b / n {
            t.get(a % n, b % n).clone()
        } else {
            NCPoly::zero()
        }
    });
    (t1, t2)
}

/// Entries of `R T₁ T₂ − T₁ T₂ R`.
pub fn rtt_relation_matrix<K: Field>(r: &HeckeSymmetry<K>, t: &AlgMatrix<K>) -> Result<AlgMatrix<K>, NcError> {
    let (t1, t2) = legs(t);
    let rm = AlgMatrix::from_scalars(t.ambient(), r.matrix());
    let tt = t1.mul(&t2)?;
    rm.mul(&tt)?.sub(&tt.mul(&rm)?)
}

/// The quadratic algebra on `t_i^j` alone (before localization).
pub fn t_subalgebra<K: Field>(r: &HeckeSymmetry<K>, degree: u32) -> Result<RewriteSystem<K>, RttError> {
    let n = r.n();
    let gens = Arc::new(Generators::new(l_names(n, "t"), vec![1; n * n])?);
    let free = free_system::<K>(&gens, degree);
    let t = generator_matrix(&free, n, 0);
    let rels = independent_relations(rtt_relation_matrix(r, &t)?.entries());
    Ok(RewriteSystem::complete(&Presentation::with_relations(gens, rels), degree, CompletionLimits::default())?)
}

/// The degree-2 central element of the `t`-algebra, unique up to scalar,
/// normalized so that `t11·t22` has coefficient one. Returned in the letters
/// of the `t`-algebra.
pub fn solve_quantum_det<K: Field>(tsys: &RewriteSystem<K>) -> Result<NCPoly<K>, RttError> {
    let ng = tsys.gens().len();
    let words = tsys.irreducible_words_of_weight(2)?;
    let gens: Vec<NCPoly<K>> = (0..ng).map(|g| tsys.gens().gen(g)).collect();
    let unknowns: Vec<Vec<NCPoly<K>>> = words
        .iter()
        .map(|w| {
            let f = NCPoly::word(w.clone());
            gens.iter().map(|x| f.mul(x).sub(&x.mul(&f))).collect()
        })
        .collect();
    let sol = solve_linear(tsys, &vec![NCPoly::zero(); ng], &unknowns)
        .ok_or_else(|| RttError::NoSolution("central quadratic element".into()))?;
    if sol.kernel.len() != 1 {
        return Err(RttError::NotUnique(sol.kernel.len()));
    }
    let det = NCPoly::from_terms(words.into_iter().zip(sol.kernel[0].iter().cloned()));
    // normalize on the classical monomial t11·t22
    let g = tsys.gens();
    let t11t22 = tsys.reduce(&g.gen::<K>(0).mul(&g.gen(3)));
    let c = words_pairing(&det, &t11t22);
    let c = c.inv().map_err(|_| RttError::NoSolution("determinant misses t11·t22".into()))?;
    Ok(det.scale(&c))
}

// coefficient of `b`'s leading word in `a`, divided by `b`'s leading coefficient
fn words_pairing<K: Field>(a: &NCPoly<K>, b: &NCPoly<K>) -> K {
    match b.leading() {
        Some((w, c)) => a.coeff(w).div(c).unwrap_or_else(|_| K::zero()),
        None => K::zero(),
    }
}

/// `𝒯_q(R)[det_q⁻¹]` for `n = 2`: generators `det` (weight 2), `dinv`, and
/// `t11 … t22`.
#[derive(Clone, Debug)]
pub struct RTTAlgebra<K: Field> {
    symmetry: HeckeSymmetry<K>,
    tsys: Arc<RewriteSystem<K>>,
    det_poly: NCPoly<K>,
    system: Arc<RewriteSystem<K>>,
    t: AlgMatrix<K>,
}

impl<K: Field> RTTAlgebra<K> {
    pub fn build(r: &HeckeSymmetry<K>, degree: u32) -> Result<Self, RttError> {
        let n = r.n();
        if n != 2 {
            return Err(RttError::Unsupported(n));
        }
        let tsys = Arc::new(t_subalgebra(r, degree)?);
        let det_t = solve_quantum_det(&tsys)?;

        let mut names = vec!["det".to_string(), "dinv".to_string()];
        names.extend(l_names(n, "t"));
        let mut weights = vec![2, 1];
        weights.extend(vec![1; n * n]);
        let gens = Arc::new(Generators::new(names, weights)?);
        let embed: Vec<NCPoly<K>> = (0..n * n).map(|g| gens.gen(T0 + g)).collect();
        let mut rels: Vec<NCPoly<K>> = tsys.rule_relations().iter().map(|f| f.substitute(&embed)).collect();
        let det = gens.gen::<K>(DET);
        let dinv = gens.gen::<K>(DINV);
        rels.push(det_t.substitute(&embed).sub(&det));
        for g in T0..T0 + n * n {
            let x = gens.gen::<K>(g);
            rels.push(x.mul(&det).sub(&det.mul(&x)));
            rels.push(x.mul(&dinv).sub(&dinv.mul(&x)));
        }
        rels.push(dinv.mul(&det).sub(&det.mul(&dinv)));
        rels.push(det.mul(&dinv).sub(&NCPoly::one()));
        let system = Arc::new(RewriteSystem::complete(
            &Presentation::with_relations(gens, rels),
            degree,
            CompletionLimits::default(),
        )?);
        let t = generator_matrix(&system, n, T0);
        Ok(RTTAlgebra { symmetry: r.clone(), tsys, det_poly: det_t, system, t })
    }

    pub fn symmetry(&self) -> &HeckeSymmetry<K> {
        &self.symmetry
    }

    pub fn system(&self) -> &Arc<RewriteSystem<K>> {
        &self.system
    }

    pub fn t_system(&self) -> &Arc<RewriteSystem<K>> {
        &self.tsys
    }

    pub fn t(&self) -> &AlgMatrix<K> {
        &self.t
    }

    /// Graded dimensions of the `t`-algebra against `C(n² + d − 1, d)`.
    pub fn check_flatness(&self, dmax: u32) -> Result<FlatnessReport, NcError> {
        let mut dims = Vec::new();
        let mut expected = Vec::new();
        for d in 0..=dmax {
            dims.push(self.tsys.graded_dimension(d)?);
            expected.push((1..=d as usize).fold(1usize, |acc, i| acc * (3 + i) / i));
        }
        let mismatches = (0..dims.len()).filter(|&d| dims[d] != expected[d]).collect();
        Ok(FlatnessReport { filtered: false, dims, expected, mismatches })
    }

    /// `det_q(T)` in the `t`-letters of the `t`-algebra.
    pub fn quantum_det_t(&self) -> &NCPoly<K> {
        &self.det_poly
    }

    /// `det_q(T)` as a polynomial in the localized algebra.
    pub fn quantum_det(&self) -> NCPoly<K> {
        let embed: Vec<NCPoly<K>> = (0..4).map(|g| self.system.gens().gen(T0 + g)).collect();
        self.det_poly.substitute(&embed)
    }

    pub fn det_generator(&self) -> NCPoly<K> {
        self.system.gens().gen(DET)
    }

    pub fn det_inverse(&self) -> NCPoly<K> {
        self.system.gens().gen(DINV)
    }

    /// First `t`-generator failing to commute with `det_q(T)`.
    pub fn det_commutator_witness(&self) -> Option<usize> {
        let d = self.quantum_det();
        (T0..T0 + 4).find(|&g| {
            let x = self.system.gens().gen::<K>(g);
            !self.system.reduce(&d.mul(&x).sub(&x.mul(&d))).is_zero()
        })
    }

    /// Solves for `S(T) = det⁻¹ · A` with `A_i^j` a scalar multiple of the
    /// generator in the transposed-opposite slot, subject to `S(T)·T = id`.
    pub fn antipode(&self) -> Result<AlgMatrix<K>, RttError> {
        let gens = self.system.gens();
        let dinv = self.det_inverse();
        // slot (i, j) of the adjugate carries t_{1−j}^{1−i}
        let slot = |i: usize, j: usize| T0 + (1 - j) * 2 + (1 - i);
        let mut unknowns = Vec::new();
        for i in 0..2 {
            for j in 0..2 {
                let s = AlgMatrix::from_fn(&self.system, 2, 2, |a, b| {
                    if (a, b) == (i, j) {
                        dinv.mul(&gens.gen(slot(i, j)))
                    } else {
                        NCPoly::zero()
                    }
                });
                unknowns.push(s.mul(&self.t)?.entries().to_vec());
            }
        }
        let base = AlgMatrix::identity(&self.system, 2).scale(&K::one().neg()).entries().to_vec();
        let sol = solve_linear(&self.system, &base, &unknowns)
            .ok_or_else(|| RttError::NoSolution("antipode".into()))?;
        if !sol.kernel.is_empty() {
            return Err(RttError::NotUnique(sol.kernel.len()));
        }
        let x = sol.particular;
        Ok(AlgMatrix::from_fn(&self.system, 2, 2, |i, j| {
            dinv.mul(&gens.gen(slot(i, j))).scale(&x[i * 2 + j])
        }))
    }

    /// `det⁻¹ · [[t22, −t12], [−t21, t11]]`, the classical inverse formula.
    pub fn classical_antipode(&self) -> AlgMatrix<K> {
        let gens = self.system.gens();
        let dinv = self.det_inverse();
        let m1 = K::one().neg();
        AlgMatrix::from_fn(&self.system, 2, 2, |i, j| {
            let g = dinv.mul(&gens.gen(T0 + (1 - j) * 2 + (1 - i)));
            if i == j {
                g
            } else {
                g.scale(&m1)
            }
        })
    }

    /// `S·T = id` and `T·S = id`.
    pub fn check_antipode(&self, s: &AlgMatrix<K>) -> Result<(MatrixCheck, MatrixCheck), NcError> {
        let id = AlgMatrix::identity(&self.system, 2);
        Ok((MatrixCheck::of(&s.mul(&self.t)?.sub(&id)?), MatrixCheck::of(&self.t.mul(s)?.sub(&id)?)))
    }
}

/// Which transformation law the coaction uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CoactionLaw {
    /// `L ↦ T·L·S(T)`.
    Adjoint,
    /// `L ↦ T·L` (no antipode); a negative control.
    LeftOnly,
}

/// The coaction `δ(L) = T·L·S(T)` with values in `𝒯 ⊗ ℒ`, where the two
/// factors commute elementwise.
#[derive(Clone, Debug)]
pub struct Coaction<K: Field> {
    law: CoactionLaw,
    combined: Arc<RewriteSystem<K>>,
    /// images of `l_i^j` indexed by `i·n + j`
    images: Vec<NCPoly<K>>,
    /// embeddings of the RTT and RE generators into the combined algebra
    rtt_embed: Vec<NCPoly<K>>,
    re_embed: Vec<NCPoly<K>>,
    t: AlgMatrix<K>,
    s: AlgMatrix<K>,
}

/// Outcome of a coaction check: indices of relations (or entries) whose
/// image does not vanish.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoactionCheck {
    pub holds: bool,
    pub checked: usize,
    pub failing: Vec<usize>,
}

impl<K: Field> Coaction<K> {
    pub fn new(rtt: &RTTAlgebra<K>, re: &REAlgebra<K>, law: CoactionLaw, degree: u32) -> Result<Self, RttError> {
        let n = re.n();
        let rg = rtt.system().gens();
        let lg = re.system().gens();
        let nr = rg.len();
        let mut names: Vec<String> = rg.names().to_vec();
        names.extend(lg.names().iter().cloned());
        let mut weights: Vec<u32> = rg.weights().to_vec();
        weights.extend(lg.weights().iter().copied());
        let gens = Arc::new(Generators::new(names, weights)?);
        let rtt_embed: Vec<NCPoly<K>> = (0..nr).map(|g| gens.gen(g)).collect();
        let re_embed: Vec<NCPoly<K>> = (0..lg.len()).map(|g| gens.gen(nr + g)).collect();
        let mut rels: Vec<NCPoly<K>> = rtt.system().rule_relations().iter().map(|f| f.substitute(&rtt_embed)).collect();
        rels.extend(re.system().rule_relations().iter().map(|f| f.substitute(&re_embed)));
        for l in &re_embed {
            for t in &rtt_embed {
                rels.push(l.mul(t).sub(&t.mul(l)));
            }
        }
        let combined = Arc::new(RewriteSystem::complete(
            &Presentation::with_relations(gens, rels),
            degree,
            CompletionLimits::default(),
        )?);
        let s_rtt = match law {
            CoactionLaw::Adjoint => rtt.antipode()?,
            CoactionLaw::LeftOnly => AlgMatrix::identity(rtt.system(), n),
        };
        let t = embed_matrix(rtt.t(), &combined, &rtt_embed);
        let s = embed_matrix(&s_rtt, &combined, &rtt_embed);
        let mut images = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut f = NCPoly::zero();
                for k in 0..n {
                    for p in 0..n {
                        let ts = t.get(i, k).mul(s.get(p, j));
                        f = f.add(&ts.mul(&re_embed[k * n + p]));
                    }
                }
                images.push(combined.reduce(&f));
            }
        }
        Ok(Coaction { law, combined, images, rtt_embed, re_embed, t, s })
    }

    pub fn law(&self) -> CoactionLaw {
        self.law
    }

    pub fn combined(&self) -> &Arc<RewriteSystem<K>> {
        &self.combined
    }

    pub fn images(&self) -> &[NCPoly<K>] {
        &self.images
    }

    pub fn embed_rtt(&self, f: &NCPoly<K>) -> NCPoly<K> {
        f.substitute(&self.rtt_embed)
    }

    pub fn embed_re(&self, f: &NCPoly<K>) -> NCPoly<K> {
        f.substitute(&self.re_embed)
    }

    /// `δ` extended multiplicatively to a polynomial in the RE generators.
    pub fn apply(&self, f: &NCPoly<K>) -> NCPoly<K> {
        let mut out = NCPoly::zero();
        for (w, c) in f.terms() {
            let mut t = NCPoly::constant(c.clone());
            for &l in w.letters() {
                t = self.combined.reduce(&t.mul(&self.images[l as usize]));
            }
            out = out.add(&t);
        }
        self.combined.reduce(&out)
    }

    /// `δ(rel) = 0` for every defining relation of `re`.
    pub fn check_preserves_ideal(&self, re: &REAlgebra<K>) -> CoactionCheck {
        use rayon::prelude::*;
        let rels = &re.presentation().relations;
        let failing: Vec<usize> =
            (0..rels.len()).into_par_iter().filter(|&i| !self.apply(&rels[i]).is_zero()).collect();
        CoactionCheck { holds: failing.is_empty(), checked: rels.len(), failing }
    }

    /// `δ((L^k)_i^j) = Σ t_i^m S(t)_p^j (L^k)_m^p` in normal form.
    pub fn check_power_equivariance(&self, re: &REAlgebra<K>, k: u32) -> Result<CoactionCheck, NcError> {
        use rayon::prelude::*;
        let n = re.n();
        let lk = re.l().pow(k)?;
        let lk_c: Vec<NCPoly<K>> = lk.entries().iter().map(|f| self.embed_re(f)).collect();
        let failing: Vec<usize> = (0..n * n)
            .into_par_iter()
            .filter(|&e| {
                let (i, j) = (e / n, e % n);
                let lhs = self.apply(lk.get(i, j));
                let mut rhs = NCPoly::zero();
                for m in 0..n {
                    for p in 0..n {
                        rhs = rhs.add(&self.t.get(i, m).mul(self.s.get(p, j)).mul(&lk_c[m * n + p]));
                    }
                }
                !self.combined.reduce(&lhs.sub(&rhs)).is_zero()
            })
            .collect();
        Ok(CoactionCheck { holds: failing.is_empty(), checked: n * n, failing })
    }

    /// `δ(f) = 1 ⊗ f`.
    pub fn is_invariant(&self, f: &NCPoly<K>) -> bool {
        self.combined.reduce(&self.apply(f).sub(&self.embed_re(f))).is_zero()
    }
}

fn embed_matrix<K: Field>(m: &AlgMatrix<K>, to: &Arc<RewriteSystem<K>>, embed: &[NCPoly<K>]) -> AlgMatrix<K> {
    AlgMatrix::from_fn(to, m.rows(), m.cols(), |i, j| m.get(i, j).substitute(embed))
}

//! U_q(sl(2)) modules, the tensor-algebra realization of the quantum
//! sphere, the form modules Ω¹ and Ω², and their truncated cohomology.
//!
//! Conventions, used everywhere below: a spin-j module has weight basis
//! `w_k`, `k = 0..2j`, with
//!
//! ```text
//! K w_k = q^{2j−2k} w_k,   F w_k = [k+1] w_{k+1},   E w_k = [2j−k+1] w_{k−1},
//! Δ(E) = E⊗K + 1⊗E,   Δ(F) = F⊗1 + K⁻¹⊗F,   Δ(K) = K⊗K,
//! ```
//!
//! so `K E K⁻¹ = q² E` and `EF − FE = (K − K⁻¹)/(q − q⁻¹)`. Weights are
//! stored as the integer exponent of `q` in the `K`-eigenvalue.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::coeff::{rat, Field, QScalar};
use crate::linalg::{Echelon, Matrix};
use crate::ncalg::{solve_linear, CompletionLimits, Generators, NCPoly, NcError, Presentation, RewriteSystem, Word};
use crate::realg::FlatnessReport;
use crate::sphere::OrbitAlgebra;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormsError {
    #[error("degenerate Casimir spectrum")]
    DegenerateSpectrum,
    #[error("quotient is not flat: dims {dims:?}, expected {expected:?}")]
    NonFlat { dims: Vec<usize>, expected: Vec<usize> },
    #[error("no admissible differential: {0}")]
    NoAdmissibleDifferential(String),
    #[error("no isomorphism found: {0}")]
    NoIsomorphismFound(String),
    #[error("morphism V⊗V → V is not unique: {0}-dimensional")]
    AlphaNotUnique(usize),
    #[error(transparent)]
    Nc(#[from] NcError),
}

impl From<crate::coeff::CoeffError> for FormsError {
    fn from(e: crate::coeff::CoeffError) -> Self {
        FormsError::Nc(NcError::Coeff(e))
    }
}

/// `[n] = q^{n−1} + q^{n−3} + … + q^{1−n}`, valid at `q = 1`.
pub fn qint<K: Field>(n: i64, q: &K) -> K {
    if n == 0 {
        return K::zero();
    }
    let qi = q.inv().expect("q invertible");
    let mut acc = K::zero();
    for i in 0..n.abs() {
        let e = n.abs() - 1 - 2 * i;
        acc = acc.add(&qpow(q, &qi, e));
    }
    if n < 0 {
        acc.neg()
    } else {
        acc
    }
}

fn qpow<K: Field>(q: &K, qi: &K, e: i64) -> K {
    if e >= 0 {
        q.pow(e as u32)
    } else {
        qi.pow((-e) as u32)
    }
}

/// A finite-dimensional representation by its `E`, `F`, `K`, `K⁻¹`
/// matrices; columns are images (`X w_a = Σ_b X[b][a] w_b`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UqRep<K: Field> {
    pub q: K,
    pub e: Matrix<K>,
    pub f: Matrix<K>,
    pub k: Matrix<K>,
    pub kinv: Matrix<K>,
    /// `K`-weights (exponents of `q`) when the basis is a weight basis.
    pub weights: Option<Vec<i64>>,
}

/// The relations of U_q(sl(2)) evaluated on a representation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub k_e: bool,
    pub k_f: bool,
    pub bracket: bool,
    pub k_inverse: bool,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.k_e && self.k_f && self.bracket && self.k_inverse
    }
}

impl<K: Field> UqRep<K> {
    pub fn dim(&self) -> usize {
        self.e.rows()
    }

    /// `KEK⁻¹ = q²E`, `KFK⁻¹ = q⁻²F`, `KK⁻¹ = 1` and the bracket relation
    /// in the cleared form `(q − q⁻¹)(EF − FE) = K − K⁻¹`.
    pub fn check_relations(&self) -> RelationReport {
        let q = &self.q;
        let qi = q.inv().expect("q invertible");
        let q2 = q.mul(q);
        let qm2 = qi.mul(&qi);
        let conj = |m: &Matrix<K>| self.k.mul(m).mul(&self.kinv);
        let ef = self.e.mul(&self.f).sub(&self.f.mul(&self.e));
        RelationReport {
            k_e: conj(&self.e) == self.e.scale(&q2),
            k_f: conj(&self.f) == self.f.scale(&qm2),
            bracket: ef.scale(&q.sub(&qi)) == self.k.sub(&self.kinv),
            k_inverse: self.k.mul(&self.kinv) == Matrix::identity(self.dim()),
        }
    }

    /// `A ⊗ B` through the coproduct; basis `(a, b) ↦ a·dim B + b`.
    pub fn tensor(&self, o: &Self) -> Self {
        let (ia, ib) = (Matrix::identity(self.dim()), Matrix::identity(o.dim()));
        let weights = match (&self.weights, &o.weights) {
            (Some(x), Some(y)) => Some(x.iter().flat_map(|a| y.iter().map(move |b| a + b)).collect()),
            _ => None,
        };
        UqRep {
            q: self.q.clone(),
            e: self.e.kron(&o.k).add(&ia.kron(&o.e)),
            f: self.f.kron(&ib).add(&self.kinv.kron(&o.f)),
            k: self.k.kron(&o.k),
            kinv: self.kinv.kron(&o.kinv),
            weights,
        }
    }

    /// `C = FE + (qK + q⁻¹K⁻¹ − q − q⁻¹)/(q − q⁻¹)²`, acting as `[j][j+1]`
    /// on spin `j`. Requires `q² ≠ 1`.
    pub fn casimir(&self) -> Result<Matrix<K>, FormsError> {
        let q = &self.q;
        let qi = q.inv()?;
        let d = q.sub(&qi);
        let d2 = d.mul(&d).inv()?;
        let id = Matrix::identity(self.dim());
        let inner = self.k.scale(q).add(&self.kinv.scale(&qi)).sub(&id.scale(&q.add(&qi)));
        Ok(self.f.mul(&self.e).add(&inner.scale(&d2)))
    }

    /// Multiplicity of each spin (as `2j`) by highest-weight counting.
    pub fn multiplicities(&self) -> BTreeMap<u32, usize> {
        let w = self.weights.as_ref().expect("weight basis");
        let mut out = BTreeMap::new();
        let top: BTreeSet<i64> = w.iter().copied().filter(|&x| x >= 0).collect();
        for lam in top {
            let cols: Vec<usize> = (0..w.len()).filter(|&i| w[i] == lam).collect();
            let rows: Vec<usize> = (0..w.len()).filter(|&i| w[i] == lam + 2).collect();
            let m = Matrix::from_fn(rows.len(), cols.len(), |r, c| self.e.get(rows[r], cols[c]).clone());
            let k = cols.len() - if rows.is_empty() { 0 } else { m.rank() };
            if k > 0 {
                out.insert(lam as u32, k);
            }
        }
        out
    }
}

/// Eigenvalue of the Casimir on spin `j2/2`.
pub fn casimir_value<K: Field>(j2: u32, q: &K) -> Result<K, FormsError> {
    let qi = q.inv()?;
    let d = q.sub(&qi);
    let num = qpow(q, &qi, j2 as i64 + 1).add(&qpow(q, &qi, -(j2 as i64) - 1)).sub(&q.add(&qi));
    Ok(num.div(&d.mul(&d))?)
}

/// The spin-`j2/2` module in the weight basis.
pub fn spin_module<K: Field>(j2: u32, q: &K) -> UqRep<K> {
    let n = j2 as usize + 1;
    let qi = q.inv().expect("q invertible");
    let j2i = j2 as i64;
    let weights: Vec<i64> = (0..n as i64).map(|k| j2i - 2 * k).collect();
    UqRep {
        q: q.clone(),
        e: Matrix::from_fn(n, n, |b, a| if a >= 1 && b == a - 1 { qint(j2i - a as i64 + 1, q) } else { K::zero() }),
        f: Matrix::from_fn(n, n, |b, a| if b == a + 1 { qint(a as i64 + 1, q) } else { K::zero() }),
        k: Matrix::diagonal(&weights.iter().map(|&w| qpow(q, &qi, w)).collect::<Vec<_>>()),
        kinv: Matrix::diagonal(&weights.iter().map(|&w| qpow(q, &qi, -w)).collect::<Vec<_>>()),
        weights: Some(weights),
    }
}

/// Basis of the highest-weight vectors of weight `j2` (kernel of `E` on
/// that weight space), as full coordinate vectors. Valid at `q = 1`.
pub fn highest_weight_space<K: Field>(rep: &UqRep<K>, j2: i64) -> Vec<Vec<K>> {
    let w = rep.weights.as_ref().expect("weight basis");
    let cols: Vec<usize> = (0..w.len()).filter(|&i| w[i] == j2).collect();
    let rows: Vec<usize> = (0..w.len()).filter(|&i| w[i] == j2 + 2).collect();
    let ns = if rows.is_empty() {
        Matrix::identity(cols.len())
    } else {
        Matrix::from_fn(rows.len(), cols.len(), |r, c| rep.e.get(rows[r], cols[c]).clone()).nullspace()
    };
    (0..ns.cols())
        .map(|k| {
            let mut v = vec![K::zero(); w.len()];
            for (i, &c) in cols.iter().enumerate() {
                v[c] = ns.get(i, k).clone();
            }
            v
        })
        .collect()
}

/// One isotypic component of a representation.
#[derive(Clone, Debug)]
pub struct Isotypic<K: Field> {
    pub j2: u32,
    pub multiplicity: usize,
    pub projector: Matrix<K>,
}

#[derive(Clone, Debug)]
pub struct IsotypicDecomposition<K: Field> {
    pub components: Vec<Isotypic<K>>,
    pub report: DecompositionReport,
}

/// Certificates for a family of isotypic projectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionReport {
    pub idempotent: bool,
    pub orthogonal: bool,
    pub complete: bool,
    pub equivariant: bool,
    pub dimension_count: bool,
}

impl DecompositionReport {
    pub fn passed(&self) -> bool {
        self.idempotent && self.orthogonal && self.complete && self.equivariant && self.dimension_count
    }
}

/// Splits `A ⊗ B` (spins `a2/2`, `b2/2`) by Lagrange interpolation in the
/// Casimir: `P_j = Π_{o ≠ j} (C − c_o)/(c_j − c_o)`.
pub fn decompose_tensor<K: Field>(a2: u32, b2: u32, q: &K) -> Result<IsotypicDecomposition<K>, FormsError> {
    let rep = spin_module(a2, q).tensor(&spin_module(b2, q));
    let c = rep.casimir()?;
    let n = rep.dim();
    let spins: Vec<u32> = (a2.abs_diff(b2)..=a2 + b2).step_by(2).collect();
    let vals: Vec<K> = spins.iter().map(|&j| casimir_value(j, q)).collect::<Result<_, _>>()?;
    let id = Matrix::identity(n);
    let mut components = Vec::new();
    for (i, &j) in spins.iter().enumerate() {
        let mut p = id.clone();
        for (o, v) in vals.iter().enumerate() {
            if o != i {
                let den = vals[i].sub(v);
                if den.is_zero() {
                    return Err(FormsError::DegenerateSpectrum);
                }
                p = p.mul(&c.sub(&id.scale(v))).scale(&den.inv()?);
            }
        }
        let rank = p.rank();
        components.push(Isotypic { j2: j, multiplicity: rank / (j as usize + 1), projector: p });
    }
    let ps: Vec<&Matrix<K>> = components.iter().map(|c| &c.projector).collect();
    let idempotent = ps.iter().all(|p| p.mul(p) == **p);
    let orthogonal = (0..ps.len()).all(|i| (0..ps.len()).all(|k| i == k || ps[i].mul(ps[k]).is_zero()));
    let complete = ps.iter().fold(Matrix::zeros(n, n), |acc, p| acc.add(p)) == id;
    let equivariant = ps.iter().all(|p| {
        [&rep.e, &rep.f, &rep.k].iter().all(|x| p.mul(x) == x.mul(p))
    });
    let dimension_count = components.iter().map(|c| c.multiplicity * (c.j2 as usize + 1)).sum::<usize>() == n;
    Ok(IsotypicDecomposition {
        components,
        report: DecompositionReport { idempotent, orthogonal, complete, equivariant, dimension_count },
    })
}

/// A U_q(sl(2)) action on a quotient of a free algebra, by its values on
/// generators, extended through the coproduct:
/// `E(ab) = E(a)·K(b) + a·E(b)`, `F(ab) = F(a)·b + K⁻¹(a)·F(b)`.
#[derive(Clone, Debug)]
pub struct ModuleAlgebraAction<K: Field> {
    pub q: K,
    pub weights: Vec<i64>,
    pub e: Vec<NCPoly<K>>,
    pub f: Vec<NCPoly<K>>,
}

impl<K: Field> ModuleAlgebraAction<K> {
    /// Generators transforming as the representation `v` (generator `a` is
    /// the basis vector `w_a`).
    pub fn from_rep(v: &UqRep<K>, gens: &Generators, offset: usize) -> Self {
        let n = v.dim();
        let lin = |m: &Matrix<K>, a: usize| {
            (0..n).fold(NCPoly::zero(), |acc, b| acc.add(&gens.gen::<K>(offset + b).scale(m.get(b, a))))
        };
        ModuleAlgebraAction {
            q: v.q.clone(),
            weights: v.weights.clone().expect("weight basis"),
            e: (0..n).map(|a| lin(&v.e, a)).collect(),
            f: (0..n).map(|a| lin(&v.f, a)).collect(),
        }
    }

    fn qp(&self, e: i64) -> K {
        qpow(&self.q, &self.q.inv().expect("q invertible"), e)
    }

    pub fn word_weight(&self, w: &Word) -> i64 {
        w.letters().iter().map(|&l| self.weights[l as usize]).sum()
    }

    fn act_word(&self, w: &Word, raise: bool, gens: &Generators) -> NCPoly<K> {
        let letters = w.letters();
        let word = |ls: &[u16]| NCPoly::word(gens.word(ls));
        let mut out = NCPoly::zero();
        for i in 0..letters.len() {
            let (pre, mid, post) = (&letters[..i], letters[i] as usize, &letters[i + 1..]);
            let term = if raise {
                let wt: i64 = post.iter().map(|&l| self.weights[l as usize]).sum();
                word(pre).mul(&self.e[mid]).mul(&word(post)).scale(&self.qp(wt))
            } else {
                let wt: i64 = pre.iter().map(|&l| self.weights[l as usize]).sum();
                word(pre).mul(&self.f[mid]).mul(&word(post)).scale(&self.qp(-wt))
            };
            out = out.add(&term);
        }
        out
    }

    /// `E` raises and `F` lowers the `K`-weight of each generator by 2.
    pub fn is_weight_compatible(&self) -> bool {
        let ok = |img: &NCPoly<K>, w: i64| img.terms().all(|(x, _)| self.word_weight(x) == w);
        (0..self.weights.len()).all(|a| ok(&self.e[a], self.weights[a] + 2) && ok(&self.f[a], self.weights[a] - 2))
    }

    pub fn raise(&self, p: &NCPoly<K>, gens: &Generators) -> NCPoly<K> {
        p.terms().fold(NCPoly::zero(), |acc, (w, c)| acc.add(&self.act_word(w, true, gens).scale(c)))
    }

    pub fn lower(&self, p: &NCPoly<K>, gens: &Generators) -> NCPoly<K> {
        p.terms().fold(NCPoly::zero(), |acc, (w, c)| acc.add(&self.act_word(w, false, gens).scale(c)))
    }

    /// Every relation is weight-homogeneous and `E`, `F` map it into the
    /// ideal: the action descends to the quotient.
    pub fn preserves(&self, sys: &RewriteSystem<K>, rels: &[NCPoly<K>]) -> bool {
        let g = sys.gens();
        if !self.is_weight_compatible() {
            return false;
        }
        rels.iter().all(|r| {
            let ws: BTreeSet<i64> = r.terms().filter(|(w, _)| !w.is_empty()).map(|(w, _)| self.word_weight(w)).collect();
            let homogeneous = ws.len() <= 1
                && (r.constant_part().is_zero() || ws.iter().all(|&x| x == 0));
            homogeneous
                && sys.reduce(&self.raise(r, g)).is_zero()
                && sys.reduce(&self.lower(r, g)).is_zero()
        })
    }
}

/// The adjoint action on the entries of an `n = 2` matrix of generators,
/// `X ▷ L = ρ(S(X₍₁₎)) L ρ(X₍₂₎)` with `ρ` spin ½ (this order makes the
/// entrywise action a left action).
pub fn adjoint_action<K: Field>(q: &K, gens: &Generators, offset: usize) -> ModuleAlgebraAction<K> {
    let rho = spin_module::<K>(1, q);
    let g = |i: usize, j: usize| gens.gen::<K>(offset + i * 2 + j);
    // (M L N)_{ij} for scalar matrices M, N
    let sand = |m: &Matrix<K>, nn: &Matrix<K>, i: usize, j: usize| {
        let mut acc = NCPoly::zero();
        for k in 0..2 {
            for p in 0..2 {
                let c = m.get(i, k).mul(nn.get(p, j));
                if !c.is_zero() {
                    acc = acc.add(&g(k, p).scale(&c));
                }
            }
        }
        acc
    };
    let id = Matrix::identity(2);
    let mut e = Vec::new();
    let mut f = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            // E ▷ L = L·ρE − ρE·ρK⁻¹·L·ρK
            e.push(sand(&id, &rho.e, i, j).sub(&sand(&rho.e.mul(&rho.kinv), &rho.k, i, j)));
            // F ▷ L = ρK·L·ρF − ρK·ρF·L
            f.push(sand(&rho.k, &rho.f, i, j).sub(&sand(&rho.k.mul(&rho.f), &id, i, j)));
        }
    }
    let s = [1i64, -1];
    let weights = (0..4).map(|x| s[x % 2] - s[x / 2]).collect();
    ModuleAlgebraAction { q: q.clone(), weights, e, f }
}

fn poly_from_vector<K: Field>(v: &[K], gens: &Generators) -> NCPoly<K> {
    let n = gens.len();
    let mut p = NCPoly::zero();
    for (idx, c) in v.iter().enumerate() {
        p.add_term(gens.word(&[(idx / n) as u16, (idx % n) as u16]), c.clone());
    }
    p
}

/// Data of the tensor-algebra sphere `T(V)/{V₁ − ℏα(V₁), v₀ − c}`, `V`
/// spin 1 with generators `x0, x1, x2`.
#[derive(Clone, Debug)]
pub struct TensorSphere<K: Field> {
    pub q: K,
    pub c: K,
    pub hbar: K,
    pub v: UqRep<K>,
    /// `α : V ⊗ V → V`, normalized by `α(w₀ ⊗ w₁)₀ = 1`.
    pub alpha: Matrix<K>,
    /// Spin-0 vector of `V ⊗ V`, normalized by its `w₀ ⊗ w₂` entry being 1.
    pub v0: Vec<K>,
    /// Weight basis of the spin-1 component of `V ⊗ V`.
    pub spin1: Vec<Vec<K>>,
    pub relations: Vec<NCPoly<K>>,
    pub system: Arc<RewriteSystem<K>>,
    pub action: ModuleAlgebraAction<K>,
}

/// The unique (up to scale) morphism `V ⊗ V → V` for `V` spin `j2/2`, as a
/// `dim V × (dim V)²` matrix.
pub fn alpha_morphism<K: Field>(v: &UqRep<K>) -> Result<Matrix<K>, FormsError> {
    let vv = v.tensor(v);
    let (n, m) = (v.dim(), vv.dim());
    // unknown A (n × m), row-major index a·m + b; equations A X_vv − X_v A = 0
    let idx = |a: usize, b: usize| a * m + b;
    let mut rows: Vec<Vec<K>> = Vec::new();
    for (xv, xvv) in [(&v.e, &vv.e), (&v.f, &vv.f), (&v.k, &vv.k)] {
        for i in 0..n {
            for j in 0..m {
                let mut row = vec![K::zero(); n * m];
                for k in 0..m {
                    let c = xvv.get(k, j);
                    if !c.is_zero() {
                        row[idx(i, k)] = row[idx(i, k)].add(c);
                    }
                }
                for k in 0..n {
                    let c = xv.get(i, k);
                    if !c.is_zero() {
                        row[idx(k, j)] = row[idx(k, j)].sub(c);
                    }
                }
                rows.push(row);
            }
        }
    }
    let sysm = Matrix::from_rows(rows);
    let ns = sysm.nullspace();
    if ns.cols() != 1 {
        return Err(FormsError::AlphaNotUnique(ns.cols()));
    }
    let a = Matrix::from_fn(n, m, |i, j| ns.get(idx(i, j), 0).clone());
    // normalization: α(w₀ ⊗ w₁) has w₀-coefficient 1
    let s = a.get(0, 1).inv()?;
    Ok(a.scale(&s))
}

impl<K: Field> TensorSphere<K> {
    pub fn build(q: &K, c: K, hbar: K, degree: u32) -> Result<Self, FormsError> {
        let v = spin_module::<K>(2, q);
        let gens = Arc::new(Generators::new(vec!["x0".into(), "x1".into(), "x2".into()], vec![1; 3])?);
        let vv = v.tensor(&v);
        let hw0 = highest_weight_space(&vv, 0);
        let hw1 = highest_weight_space(&vv, 2);
        if hw0.len() != 1 || hw1.len() != 1 {
            return Err(FormsError::DegenerateSpectrum);
        }
        let s = hw0[0][2].inv()?;
        let v0: Vec<K> = hw0[0].iter().map(|x| x.mul(&s)).collect();
        // spin-1 weight basis: u, Fu, F²u
        let mut spin1 = vec![hw1[0].clone()];
        for _ in 0..2 {
            let last = spin1.last().unwrap();
            spin1.push((0..9).map(|i| (0..9).fold(K::zero(), |acc, k| acc.add(&vv.f.get(i, k).mul(&last[k])))).collect());
        }
        let alpha = alpha_morphism(&v)?;
        let mut relations = Vec::new();
        for u in &spin1 {
            let mut r = poly_from_vector(u, &gens);
            if !hbar.is_zero() {
                for a in 0..3 {
                    let img = (0..9).fold(K::zero(), |acc, b| acc.add(&alpha.get(a, b).mul(&u[b])));
                    r = r.sub(&gens.gen::<K>(a).scale(&hbar.mul(&img)));
                }
            }
            relations.push(r);
        }
        relations.push(poly_from_vector(&v0, &gens).sub(&NCPoly::constant(c.clone())));
        let system = Arc::new(RewriteSystem::complete(
            &Presentation::with_relations(gens.clone(), relations.clone()),
            degree,
            CompletionLimits::default(),
        )?);
        let action = ModuleAlgebraAction::from_rep(&v, &gens, 0);
        Ok(TensorSphere { q: q.clone(), c, hbar, v, alpha, v0, spin1, relations, system, action })
    }

    pub fn check_flatness(&self, dmax: u32) -> Result<FlatnessReport, NcError> {
        let mut dims = Vec::new();
        let mut expected = Vec::new();
        for d in 0..=dmax {
            dims.push(self.system.filtered_dimension(d)?);
            expected.push(((d + 1) * (d + 1)) as usize);
        }
        let mismatches = (0..dims.len()).filter(|&d| dims[d] != expected[d]).collect();
        Ok(FlatnessReport { filtered: true, dims, expected, mismatches })
    }

    /// The action descends to the quotient.
    pub fn is_equivariant(&self) -> bool {
        self.action.preserves(&self.system, &self.relations)
    }
}

/// Which form module to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FormKind {
    Omega0,
    Omega1,
    Omega2,
    Tangent,
}

/// `(A ⊗ W) / A·span(generators)`, truncated at filtration level `level`
/// (multipliers up to `level + slack`), with the induced U_q(sl(2)) action.
/// Coordinates are keyed by `(word, slot)`.
#[derive(Clone, Debug)]
pub struct FormModule<K: Field> {
    pub kind: FormKind,
    pub level: u32,
    system: Arc<RewriteSystem<K>>,
    action: ModuleAlgebraAction<K>,
    w: UqRep<K>,
    sub: Echelon<(Word, usize), K>,
}

/// Per-level spin multiplicities: `table[d][2j] = m`.
pub type IsotypicTable = Vec<BTreeMap<u32, usize>>;

type ModVec<K> = BTreeMap<(Word, usize), K>;

impl<K: Field> FormModule<K> {
    pub fn new(
        kind: FormKind,
        system: Arc<RewriteSystem<K>>,
        action: ModuleAlgebraAction<K>,
        w: UqRep<K>,
        generators: &[Vec<NCPoly<K>>],
        level: u32,
        slack: u32,
    ) -> Result<Self, NcError> {
        let mut sub = Echelon::new();
        if !generators.is_empty() {
            let words = system.irreducible_words((level + slack).saturating_sub(1))?;
            for g in generators {
                for u in &words {
                    let up = NCPoly::word(u.clone());
                    let mut row = ModVec::new();
                    for (b, gb) in g.iter().enumerate() {
                        for (x, c) in system.reduce(&up.mul(gb)).terms() {
                            row.insert((x.clone(), b), c.clone());
                        }
                    }
                    sub.insert(row);
                }
            }
        }
        Ok(FormModule { kind, level, system, action, w, sub })
    }

    pub fn system(&self) -> &Arc<RewriteSystem<K>> {
        &self.system
    }

    pub fn slots(&self) -> usize {
        self.w.dim()
    }

    /// Canonical representative modulo the submodule.
    pub fn reduce(&self, v: ModVec<K>) -> ModVec<K> {
        self.sub.reduce(v)
    }

    /// `f ⊗ w_b` as a reduced module vector.
    pub fn embed(&self, f: &NCPoly<K>, b: usize) -> ModVec<K> {
        let mut v = ModVec::new();
        for (x, c) in self.system.reduce(f).terms() {
            v.insert((x.clone(), b), c.clone());
        }
        self.reduce(v)
    }

    /// Quotient basis at level `≤ d`: non-pivot keys.
    pub fn basis(&self, d: u32) -> Result<Vec<(Word, usize)>, NcError> {
        let words = self.system.irreducible_words(d)?;
        Ok(words
            .into_iter()
            .flat_map(|u| (0..self.slots()).map(move |b| (u.clone(), b)))
            .filter(|k| !self.sub.is_pivot(k))
            .collect())
    }

    pub fn dims(&self) -> Result<Vec<usize>, NcError> {
        (0..=self.level).map(|d| self.basis(d).map(|b| b.len())).collect()
    }

    fn key_weight(&self, k: &(Word, usize)) -> i64 {
        self.action.word_weight(&k.0) + self.w.weights.as_ref().unwrap()[k.1]
    }

    /// `E` applied to a basis key, reduced.
    pub fn raise_key(&self, k: &(Word, usize)) -> ModVec<K> {
        let g = self.system.gens();
        let (u, b) = k;
        let wb = self.w.weights.as_ref().unwrap()[*b];
        let qi = self.action.q.inv().unwrap();
        let mut out = ModVec::new();
        let push = |out: &mut ModVec<K>, key: (Word, usize), c: K| {
            let e = out.entry(key.clone()).or_insert_with(K::zero);
            *e = e.add(&c);
            if e.is_zero() {
                out.remove(&key);
            }
        };
        let ef = self.system.reduce(&self.action.raise(&NCPoly::word(u.clone()), g));
        let kq = qpow(&self.action.q, &qi, wb);
        for (x, c) in ef.terms() {
            push(&mut out, (x.clone(), *b), c.mul(&kq));
        }
        for b2 in 0..self.slots() {
            let c = self.w.e.get(b2, *b);
            if !c.is_zero() {
                push(&mut out, (u.clone(), b2), c.clone());
            }
        }
        self.reduce(out)
    }

    /// The `E`-map from weight `λ` to `λ + 2` on the level-`d` quotient.
    fn raise_matrix(&self, d: u32, lam: i64) -> Result<(Vec<(Word, usize)>, Matrix<K>), NcError> {
        let basis = self.basis(d)?;
        let cols: Vec<(Word, usize)> = basis.iter().filter(|k| self.key_weight(k) == lam).cloned().collect();
        let rows: Vec<(Word, usize)> = basis.iter().filter(|k| self.key_weight(k) == lam + 2).cloned().collect();
        let images: Vec<ModVec<K>> = cols.iter().map(|k| self.raise_key(k)).collect();
        let m = Matrix::from_fn(rows.len(), cols.len(), |r, c| images[c].get(&rows[r]).cloned().unwrap_or_else(K::zero));
        Ok((cols, m))
    }

    /// Spin multiplicities of the level-`d` quotient.
    pub fn multiplicities(&self, d: u32) -> Result<BTreeMap<u32, usize>, NcError> {
        let basis = self.basis(d)?;
        let lams: BTreeSet<i64> = basis.iter().map(|k| self.key_weight(k)).filter(|&x| x >= 0).collect();
        let mut out = BTreeMap::new();
        for lam in lams {
            let (cols, m) = self.raise_matrix(d, lam)?;
            let k = cols.len() - if m.rows() == 0 { 0 } else { m.rank() };
            if k > 0 {
                out.insert(lam as u32, k);
            }
        }
        Ok(out)
    }

    pub fn isotypic_table(&self) -> Result<IsotypicTable, NcError> {
        (0..=self.level).map(|d| self.multiplicities(d)).collect()
    }

    /// Highest-weight vectors of weight `j2` at level `≤ d`.
    pub fn highest_weight_vectors(&self, d: u32, j2: u32) -> Result<Vec<ModVec<K>>, NcError> {
        let (cols, m) = self.raise_matrix(d, j2 as i64)?;
        let ns = if m.rows() == 0 { Matrix::identity(cols.len()) } else { m.nullspace() };
        Ok((0..ns.cols())
            .map(|k| {
                cols.iter()
                    .enumerate()
                    .filter(|(i, _)| !ns.get(*i, k).is_zero())
                    .map(|(i, key)| (key.clone(), ns.get(i, k).clone()))
                    .collect()
            })
            .collect())
    }
}

/// Builds Ω⁰ (the sphere itself), Ω¹ / tangent (quotient of `A ⊗ V` by the
/// spin-0 part of `V ⊗ V`), or Ω² (quotient of `A ⊗ V` by the spin-1 part).
pub fn build_omega<K: Field>(s: &TensorSphere<K>, kind: FormKind, level: u32) -> Result<FormModule<K>, FormsError> {
    let g = s.system.gens();
    let pair = |u: &[K]| -> Vec<NCPoly<K>> {
        (0..3)
            .map(|b| (0..3).fold(NCPoly::zero(), |acc, a| acc.add(&g.gen::<K>(a).scale(&u[a * 3 + b]))))
            .collect()
    };
    let (w, gens) = match kind {
        FormKind::Omega0 => (spin_module(0, &s.q), vec![]),
        FormKind::Omega1 | FormKind::Tangent => (s.v.clone(), vec![pair(&s.v0)]),
        FormKind::Omega2 => (s.v.clone(), s.spin1.iter().map(|u| pair(u)).collect()),
    };
    Ok(FormModule::new(kind, s.system.clone(), s.action.clone(), w, &gens, level, 1)?)
}

/// Isotypic tables of the three form modules.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormTables {
    pub omega0: IsotypicTable,
    pub omega1: IsotypicTable,
    pub omega2: IsotypicTable,
    pub dims: [Vec<usize>; 3],
}

pub fn form_tables<K: Field>(s: &TensorSphere<K>, level: u32) -> Result<FormTables, FormsError> {
    let mut tables = Vec::new();
    let mut dims = Vec::new();
    for kind in [FormKind::Omega0, FormKind::Omega1, FormKind::Omega2] {
        let m = build_omega(s, kind, level)?;
        tables.push(m.isotypic_table()?);
        dims.push(m.dims()?);
    }
    let omega2 = tables.pop().unwrap();
    let omega1 = tables.pop().unwrap();
    let omega0 = tables.pop().unwrap();
    let d2 = dims.pop().unwrap();
    let d1 = dims.pop().unwrap();
    let d0 = dims.pop().unwrap();
    Ok(FormTables { omega0, omega1, omega2, dims: [d0, d1, d2] })
}

/// The classical (q = 1) de Rham differential on the truncated modules,
/// in the coordinates of the form modules: `d f = Σ ∂_a f ⊗ e_a` and
/// `d(f ⊗ e_b) = Σ ∂_a f ⊗ α(e_a ⊗ e_b)`.
pub struct ClassicalComplex {
    pub sphere: TensorSphere<BigRational>,
    pub omega: [FormModule<BigRational>; 3],
}

fn derivative(w: &Word, a: u16, gens: &Generators) -> NCPoly<BigRational> {
    let ls = w.letters();
    let mut out = NCPoly::zero();
    for i in 0..ls.len() {
        if ls[i] == a {
            let mut rest: Vec<u16> = ls[..i].to_vec();
            rest.extend_from_slice(&ls[i + 1..]);
            out.add_term(gens.word(&rest), rat(1, 1));
        }
    }
    out
}

impl ClassicalComplex {
    pub fn build(c: BigRational, level: u32) -> Result<Self, FormsError> {
        let sphere = TensorSphere::build(&rat(1, 1), c, rat(0, 1), level + 2)?;
        let omega = [
            build_omega(&sphere, FormKind::Omega0, level)?,
            build_omega(&sphere, FormKind::Omega1, level)?,
            build_omega(&sphere, FormKind::Omega2, level)?,
        ];
        Ok(ClassicalComplex { sphere, omega })
    }

    /// `d` on a module vector of Ω^`deg`, landing in Ω^`deg+1`.
    pub fn d(&self, deg: usize, v: &ModVec<BigRational>) -> ModVec<BigRational> {
        let g = self.sphere.system.gens();
        let target = &self.omega[deg + 1];
        let mut out: ModVec<BigRational> = BTreeMap::new();
        let mut acc = |key: (Word, usize), c: BigRational| {
            let e = out.entry(key.clone()).or_insert_with(|| rat(0, 1));
            *e += c;
        };
        for ((w, b), c) in v {
            for a in 0..3u16 {
                let da = self.sphere.system.reduce(&derivative(w, a, g));
                if da.is_zero() {
                    continue;
                }
                let coeffs: Vec<(usize, BigRational)> = if deg == 0 {
                    vec![(a as usize, rat(1, 1))]
                } else {
                    (0..3).map(|o| (o, self.sphere.alpha.get(o, a as usize * 3 + b).clone())).filter(|x| x.1 != rat(0, 1)).collect()
                };
                for (slot, s) in coeffs {
                    for (x, y) in da.terms() {
                        acc((x.clone(), slot), c * y * &s);
                    }
                }
            }
        }
        out.retain(|_, c| *c != rat(0, 1));
        target.reduce(out)
    }
}

/// Per-spin cohomology bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpinComplex {
    pub j2: u32,
    pub mult: [usize; 3],
    pub classical_ranks: [usize; 2],
    pub ranks: [usize; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyReport {
    pub level: u32,
    pub seed: u64,
    pub dims: [usize; 3],
    pub spins: Vec<SpinComplex>,
    pub d_squared_zero: bool,
    pub tables_match_classical: bool,
}

fn coords(v: &ModVec<BigRational>, basis: &[ModVec<BigRational>]) -> Option<Vec<BigRational>> {
    let keys: BTreeSet<&(Word, usize)> = v.keys().chain(basis.iter().flat_map(|b| b.keys())).collect();
    let keys: Vec<&(Word, usize)> = keys.into_iter().collect();
    let m = Matrix::from_fn(keys.len(), basis.len(), |r, c| basis[c].get(keys[r]).cloned().unwrap_or_else(|| rat(0, 1)));
    let rhs: Vec<BigRational> = keys.iter().map(|k| v.get(*k).cloned().unwrap_or_else(|| rat(0, 1))).collect();
    m.solve(&rhs)
}

fn random_nonzero(rng: &mut ChaCha8Rng) -> BigRational {
    loop {
        let n: i64 = rng.gen_range(-9..=9);
        let d: i64 = rng.gen_range(1..=7);
        if n != 0 {
            return rat(n, d);
        }
    }
}

/// Truncated cohomology of Ω⁰ → Ω¹ → Ω² at generic `q`: the quantum tables
/// fix the multiplicity spaces; `d` is one scalar per pair of components,
/// nonzero exactly on the support of the classical differential, subject
/// to `d∘d = 0`; scalars drawn from `seed`. Only spins whose multiplicities
/// have stabilized below the top level are counted.
pub fn cohomology_dims<K: Field + ConstantRational>(s: &TensorSphere<K>, level: u32, seed: u64) -> Result<CohomologyReport, FormsError> {
    let quantum = form_tables(s, level)?;
    let classical = ClassicalComplex::build(s.c.constant_rational().unwrap_or_else(|| rat(1, 1)), level)?;
    let ctables: Vec<IsotypicTable> =
        classical.omega.iter().map(|m| m.isotypic_table()).collect::<Result<_, _>>()?;
    let tables_match_classical =
        ctables[0] == quantum.omega0 && ctables[1] == quantum.omega1 && ctables[2] == quantum.omega2;
    let top = level as usize;
    let qt = [&quantum.omega0, &quantum.omega1, &quantum.omega2];
    let stable: Vec<u32> = (0..=2 * level)
        .step_by(2)
        .filter(|j2| {
            qt.iter().all(|t| t[top].get(j2) == t[top - 1].get(j2))
                && qt.iter().any(|t| t[top].contains_key(j2))
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dims = [0usize; 3];
    let mut spins = Vec::new();
    let mut d_squared_zero = true;
    for j2 in stable {
        let hw: Vec<Vec<ModVec<BigRational>>> = (0..3)
            .map(|i| classical.omega[i].highest_weight_vectors(level, j2))
            .collect::<Result<_, _>>()?;
        let mult = [hw[0].len(), hw[1].len(), hw[2].len()];
        // classical matrices in highest-weight bases
        let mut cm: Vec<Matrix<BigRational>> = Vec::new();
        for deg in 0..2 {
            let (src, dst) = (&hw[deg], &hw[deg + 1]);
            let mut m = Matrix::zeros(dst.len(), src.len());
            for (c, v) in src.iter().enumerate() {
                let img = classical.d(deg, v);
                if img.is_empty() {
                    continue;
                }
                let x = coords(&img, dst).ok_or_else(|| {
                    FormsError::NoAdmissibleDifferential(format!("d image outside highest weights (2j = {j2})"))
                })?;
                for (r, val) in x.into_iter().enumerate() {
                    m.set(r, c, val);
                }
            }
            cm.push(m);
        }
        let classical_ranks = [cm[0].rank(), cm[1].rank()];
        if !cm[1].mul(&cm[0]).is_zero() {
            d_squared_zero = false;
        }
        // admissible draw: θ on the support of d¹, then φ on the support of d²
        let mut d1 = cm[0].clone();
        for r in 0..d1.rows() {
            for c in 0..d1.cols() {
                if d1.get(r, c) != &rat(0, 1) {
                    d1.set(r, c, random_nonzero(&mut rng));
                }
            }
        }
        let support: Vec<(usize, usize)> = (0..cm[1].rows())
            .flat_map(|r| (0..cm[1].cols()).map(move |c| (r, c)))
            .filter(|&(r, c)| cm[1].get(r, c) != &rat(0, 1))
            .collect();
        // constraints (d² d¹)[r][k] = Σ_c φ_{rc} d1[c][k] = 0
        let mut eqs = Vec::new();
        for r in 0..cm[1].rows() {
            for k in 0..d1.cols() {
                eqs.push(support.iter().map(|&(rr, c)| if rr == r { d1.get(c, k).clone() } else { rat(0, 1) }).collect::<Vec<_>>());
            }
        }
        let phi: Vec<BigRational> = if support.is_empty() {
            vec![]
        } else {
            let kernel = if eqs.is_empty() { Matrix::identity(support.len()) } else { Matrix::from_rows(eqs).nullspace() };
            let mut found = None;
            for _ in 0..64 {
                let coef: Vec<BigRational> = (0..kernel.cols()).map(|_| random_nonzero(&mut rng)).collect();
                let v: Vec<BigRational> = (0..support.len())
                    .map(|i| (0..kernel.cols()).fold(rat(0, 1), |acc, k| acc + kernel.get(i, k) * &coef[k]))
                    .collect();
                if v.iter().all(|x| x != &rat(0, 1)) {
                    found = Some(v);
                    break;
                }
            }
            found.ok_or_else(|| FormsError::NoAdmissibleDifferential(format!("2j = {j2}")))?
        };
        let mut d2 = Matrix::zeros(cm[1].rows(), cm[1].cols());
        for (&(r, c), v) in support.iter().zip(phi) {
            d2.set(r, c, v);
        }
        if !d2.mul(&d1).is_zero() {
            d_squared_zero = false;
        }
        let ranks = [d1.rank(), d2.rank()];
        let dim = j2 as usize + 1;
        dims[0] += dim * (mult[0] - ranks[0]);
        dims[1] += dim * (mult[1] - ranks[1] - ranks[0]);
        dims[2] += dim * (mult[2] - ranks[1]);
        spins.push(SpinComplex { j2, mult, classical_ranks, ranks });
    }
    Ok(CohomologyReport { level, seed, dims, spins, d_squared_zero, tables_match_classical })
}

/// The traceless generators of the RE sphere as a spin-1 weight basis:
/// `y₀ = l21` (highest weight), `y₁ = F▷y₀`, `y₂ = F▷y₁ / [2]`.
pub fn spin1_generators(re: &OrbitAlgebra<QScalar>) -> Vec<NCPoly<QScalar>> {
    let sys = re.system();
    let g = sys.gens();
    let act = adjoint_action(re.re().symmetry().q(), g, 0);
    let y0 = g.gen::<QScalar>(2);
    let y1 = sys.reduce(&act.lower(&y0, g));
    let two = qint(2, re.re().symmetry().q());
    let y2 = sys.reduce(&act.lower(&y1, g)).scale(&two.inv().expect("[2] ≠ 0"));
    vec![y0, y1, y2]
}

/// Identification of the tensor sphere with the RE sphere through
/// `φ(x_a) = γ·y_a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossRealization {
    pub images: Vec<String>,
    /// `γ²`, fixed by matching the orbit constants
    pub scale: String,
    /// Tensor-side constant for which `γ = 1`.
    pub unit_c: String,
    pub levels: u32,
    pub surjective: bool,
    pub tensor_table: IsotypicTable,
    pub re_table: IsotypicTable,
    pub tables_agree: bool,
}

impl CrossRealization {
    pub fn passed(&self) -> bool {
        self.surjective && self.tables_agree
    }
}

/// The image of `v₀` under `φ(x_a) = y_a`, which is central and reduces
/// to a constant on the sphere: the tensor-side `c` for `γ = 1`.
pub fn matching_tensor_c(re: &OrbitAlgebra<QScalar>, q: &QScalar) -> Result<QScalar, FormsError> {
    let ts = TensorSphere::build(q, QScalar::one(), QScalar::zero(), 2)?;
    let y = spin1_generators(re);
    let img = re.system().reduce(&poly_from_vector(&ts.v0, ts.system.gens()).substitute(&y));
    if !img.is_constant() {
        return Err(FormsError::NoIsomorphismFound(format!("φ(v₀) is not a constant")));
    }
    Ok(img.constant_part())
}

/// Solves for `φ(x_a) = γ·y_a` mapping every tensor relation into the RE
/// sphere's ideal: quadratic parts scale by `u = γ²`, ℏ-linear parts by
/// `v = γ`, and `v² = u` whenever `v` is determined. Then checks that `φ`
/// is onto at each level `≤ levels` and compares the isotypic tables
/// computed on each side from its own action.
pub fn cross_check_realizations(
    re: &OrbitAlgebra<QScalar>,
    ts: &TensorSphere<QScalar>,
    levels: u32,
) -> Result<CrossRealization, FormsError> {
    let sys = re.system();
    let y = spin1_generators(re);
    let mut base = Vec::new();
    let mut uq = Vec::new();
    let mut ul = Vec::new();
    for r in &ts.relations {
        let (mut p0, mut p1, mut p2) = (NCPoly::zero(), NCPoly::zero(), NCPoly::zero());
        for (w, c) in r.terms() {
            let img = NCPoly::term(w.clone(), c.clone()).substitute(&y);
            match w.len() {
                0 => p0 = p0.add(&img),
                1 => p1 = p1.add(&img),
                _ => p2 = p2.add(&img),
            }
        }
        base.push(p0);
        ul.push(p1);
        uq.push(p2);
    }
    let fail = |m: &str| FormsError::NoIsomorphismFound(m.to_string());
    let sol = solve_linear(sys, &base, &[uq, ul]).ok_or_else(|| fail("no scalars solve the relations"))?;
    let free: BTreeSet<usize> =
        sol.kernel.iter().flat_map(|k| k.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, _)| i)).collect();
    if free.contains(&0) {
        return Err(fail("scale not determined"));
    }
    let (u, v) = (&sol.particular[0], &sol.particular[1]);
    if u.is_zero() {
        return Err(fail("degenerate identification"));
    }
    if !free.contains(&1) && v.mul(v) != *u {
        return Err(fail("linear and quadratic parts need different scales"));
    }
    // surjectivity level by level, for the normalized map γ = 1
    let tw = ts.system.irreducible_words(levels)?;
    let mut ech: Echelon<Word, QScalar> = Echelon::new();
    let mut surjective = true;
    for d in 0..=levels {
        for w in tw.iter().filter(|w| w.weight() == d) {
            ech.insert(sys.reduce(&NCPoly::word(w.clone()).substitute(&y)).into_terms());
        }
        if ech.rank() != sys.filtered_dimension(d)? {
            surjective = false;
        }
    }
    let tensor_table = build_omega(ts, FormKind::Omega0, levels)?.isotypic_table()?;
    let q = re.re().symmetry().q();
    let action = adjoint_action(q, sys.gens(), 0);
    let rmod = FormModule::new(FormKind::Omega0, sys.clone(), action, spin_module(0, q), &[], levels, 0)?;
    let re_table = rmod.isotypic_table()?;
    let tables_agree = tensor_table == re_table;
    Ok(CrossRealization {
        images: y.iter().map(|p| p.display(sys.names()).to_string()).collect(),
        scale: u.to_string(),
        unit_c: matching_tensor_c(re, q)?.to_string(),
        levels,
        surjective,
        tensor_table,
        re_table,
        tables_agree,
    })
}

/// Extracts a rational constant, when the scalar is one.
pub trait ConstantRational {
    fn constant_rational(&self) -> Option<BigRational>;
}

impl ConstantRational for QScalar {
    fn constant_rational(&self) -> Option<BigRational> {
        self.constant_value()
    }
}

impl ConstantRational for BigRational {
    fn constant_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }
}

//! Quantum orbits as quotients of the RE algebra: the sphere, its line
//! bundles, and the q-symmetrized extension `L₊`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::coeff::{rat, ExtScalar, Field, QScalar};
use crate::hecke::{standard_r_with, HeckeError, HeckeSymmetry};
use crate::linalg::{Echelon, Matrix};
use crate::ncalg::{AlgMatrix, CompletionLimits, NCPoly, NcError, RewriteSystem, Word};
use crate::realg::{CHData, FlatnessReport, ReError, REAlgebra};
use crate::rtt::MatrixCheck;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SphereError {
    #[error("the orbit constant must be nonzero")]
    ZeroOrbitConstant,
    #[error("only n = 2 orbits are supported, got n = {0}")]
    Unsupported(usize),
    #[error("degenerate orbit: the numerical polynomial has a double root")]
    DegenerateOrbit,
    #[error("quotient is not flat: dims {dims:?}, expected {expected:?}")]
    NonFlat { dims: Vec<usize>, expected: Vec<usize> },
    #[error("{what} fails at entry {witness:?}")]
    VerificationFailed { what: String, witness: Option<(usize, usize)> },
    #[error(transparent)]
    Re(#[from] ReError),
    #[error(transparent)]
    Nc(#[from] NcError),
    #[error(transparent)]
    Hecke(#[from] HeckeError),
}

impl From<crate::coeff::CoeffError> for SphereError {
    fn from(e: crate::coeff::CoeffError) -> Self {
        SphereError::Nc(e.into())
    }
}

/// The quotient of an RE algebra (possibly ℏ-shifted) by `σ(1) = a`,
/// `σ(2) = b`. The sphere is `a = 0`, `b = c ≠ 0`.
#[derive(Clone, Debug)]
pub struct OrbitAlgebra<K: Field> {
    re: REAlgebra<K>,
    ch: CHData<K>,
    a: K,
    b: K,
    system: Arc<RewriteSystem<K>>,
    l: AlgMatrix<K>,
}

/// The numerical CH polynomial `P̄(t) = t² − a t + b` of an orbit; on the
/// sphere this is `t² + c₂` with `c₂ = b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NumericPoly<K: Field> {
    pub a: K,
    pub b: K,
    pub c2: Option<K>,
}

/// Roots of `P̄`, in the base field when the discriminant is a square.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Roots {
    Base(QScalar, QScalar),
    Ext(ExtScalar, ExtScalar),
}

impl Roots {
    pub fn in_ext(&self) -> (ExtScalar, ExtScalar) {
        match self {
            Roots::Base(x, y) => (ExtScalar::embed(x.clone()), ExtScalar::embed(y.clone())),
            Roots::Ext(x, y) => (x.clone(), y.clone()),
        }
    }

    pub fn is_base(&self) -> bool {
        matches!(self, Roots::Base(..))
    }
}

/// Roots `(a ± √(a² − 4b))/2`, adjoining the square root only if needed.
pub fn orbit_roots(a: &QScalar, b: &QScalar) -> Result<Roots, SphereError> {
    let disc = a.mul(a).sub(&b.mul(&QScalar::from_int(4)));
    if disc.is_zero() {
        return Err(SphereError::DegenerateOrbit);
    }
    let half = QScalar::from_rational(rat(1, 2));
    let u = a.mul(&half);
    Ok(match disc.sqrt() {
        Some(s) => {
            let v = s.mul(&half);
            Roots::Base(u.add(&v), u.sub(&v))
        }
        None => Roots::Ext(
            ExtScalar::new(u.clone(), half.clone(), disc.clone()),
            ExtScalar::new(u, half.neg(), disc),
        ),
    })
}

impl<K: Field> OrbitAlgebra<K> {
    /// The sphere `{Tr_q(L) = 0, σ(2) = c}`.
    pub fn sphere(re: &REAlgebra<K>, c: K, degree: u32) -> Result<Self, SphereError> {
        if c.is_zero() {
            return Err(SphereError::ZeroOrbitConstant);
        }
        Self::orbit(re, K::zero(), c, degree)
    }

    /// The generic orbit `{σ(1) = a, σ(2) = b}`.
    pub fn orbit(re: &REAlgebra<K>, a: K, b: K, degree: u32) -> Result<Self, SphereError> {
        if re.n() != 2 {
            return Err(SphereError::Unsupported(re.n()));
        }
        let ch = re.ch_coefficients(2)?;
        let extra = vec![
            ch.sigma[1].sub(&NCPoly::constant(a.clone())),
            ch.sigma[2].sub(&NCPoly::constant(b.clone())),
        ];
        let system = Arc::new(re.system().extend(&extra, degree, CompletionLimits::default())?);
        let l = re.l().transfer(&system);
        Ok(OrbitAlgebra { re: re.clone(), ch, a, b, system, l })
    }

    pub fn re(&self) -> &REAlgebra<K> {
        &self.re
    }

    pub fn ch(&self) -> &CHData<K> {
        &self.ch
    }

    pub fn system(&self) -> &Arc<RewriteSystem<K>> {
        &self.system
    }

    pub fn l(&self) -> &AlgMatrix<K> {
        &self.l
    }

    pub fn a(&self) -> &K {
        &self.a
    }

    pub fn b(&self) -> &K {
        &self.b
    }

    /// Filtration dimensions against `(d + 1)²`.
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

    pub fn ensure_flat(&self, dmax: u32) -> Result<FlatnessReport, SphereError> {
        let r = self.check_flatness(dmax)?;
        if r.passed() {
            Ok(r)
        } else {
            Err(SphereError::NonFlat { dims: r.dims, expected: r.expected })
        }
    }

    /// `P̄` obtained by substituting the orbit values into the solved CH.
    pub fn numeric_polynomial(&self) -> NumericPoly<K> {
        let c2 = self.a.is_zero().then(|| self.b.clone());
        NumericPoly { a: self.a.clone(), b: self.b.clone(), c2 }
    }

    /// `P̄(L) = L² − a L + b·id`, which must vanish in the quotient.
    pub fn numeric_residual(&self) -> Result<AlgMatrix<K>, NcError> {
        self.l.mat_poly(&[
            NCPoly::constant(self.b.clone()),
            NCPoly::constant(self.a.neg()),
            NCPoly::one(),
        ])
    }

    /// `L₊^{(k)} = P₊^{(k)} L₁ P₊^{(k)}` with `L₁` acting on the first slot.
    pub fn extend_l_plus(&self, k: usize) -> Result<AlgMatrix<K>, SphereError> {
        extend_l_plus(self.re.symmetry(), &self.l, k)
    }

    /// The extended CH identity for `L₊^{(2)}`; see [`ChPlusReport`].
    pub fn verify_ch_plus(&self) -> Result<ChPlusReport<K>, SphereError> {
        let sym = self.re.symmetry();
        let lp = self.extend_l_plus(2)?;
        let p = AlgMatrix::from_scalars(&self.system, &sym.symmetrizer(2)?);
        let id = AlgMatrix::identity(&self.system, 4);
        let q = sym.q();
        let two_q = q.add(&q.inv()?);
        let s = q.inv()?.div(&two_q)?;
        let (a, b) = (&self.a, &self.b);
        let l2 = lp.mul(&lp)?;
        let l3 = l2.mul(&lp)?;
        let c2 = a.mul(&K::one().add(&s)).neg();
        let cubic = |b: &K, unit: &AlgMatrix<K>| -> Result<AlgMatrix<K>, NcError> {
            l3.add(&l2.scale(&c2))?
                .add(&lp.scale(&a.mul(a).mul(&s).add(b)))?
                .sub(&unit.scale(&a.mul(b).mul(&s)))
        };
        // (t − a s)(t² − a t + b), unit P₊
        let corrected = cubic(b, &p)?.check();
        // as printed: (a² s − b) t + a b s · id
        let printed = l3
            .add(&l2.scale(&c2))?
            .add(&lp.scale(&a.mul(a).mul(&s).sub(b)))?
            .add(&id.scale(&a.mul(b).mul(&s)))?;
        let printed = printed.check();
        let commutes = lp.mul(&p)?.sub(&lp)?.is_zero() && p.mul(&lp)?.sub(&lp)?.is_zero();
        let am = AlgMatrix::from_scalars(&self.system, &sym.antisymmetrizer(2)?);
        let kills_antisym = am.mul(&lp)?.is_zero() && lp.mul(&am)?.is_zero();
        Ok(ChPlusReport { a: a.clone(), b: b.clone(), s, corrected, printed, commutes, kills_antisym })
    }

    /// Solves `L₊³ + x L₊² + y L₊ + z P₊ = 0` for scalars; `None` if no
    /// such cubic exists.
    pub fn ch_plus_coefficients(&self) -> Result<Option<[K; 3]>, SphereError> {
        let sym = self.re.symmetry();
        let lp = self.extend_l_plus(2)?;
        let p = AlgMatrix::from_scalars(&self.system, &sym.symmetrizer(2)?);
        let l2 = lp.mul(&lp)?;
        let l3 = l2.mul(&lp)?;
        let unknowns = vec![l2.entries().to_vec(), lp.entries().to_vec(), p.entries().to_vec()];
        Ok(crate::ncalg::solve_linear(&self.system, l3.entries(), &unknowns)
            .filter(|s| s.kernel.is_empty())
            .map(|s| [s.particular[0].clone(), s.particular[1].clone(), s.particular[2].clone()]))
    }
}

impl OrbitAlgebra<QScalar> {
    pub fn roots(&self) -> Result<Roots, SphereError> {
        orbit_roots(&self.a, &self.b)
    }

    /// The quotient system and `L` with coefficients in `Q(q)(√disc)`.
    pub fn to_ext(&self) -> Result<(Arc<RewriteSystem<ExtScalar>>, AlgMatrix<ExtScalar>), SphereError> {
        let sys = Arc::new(self.system.specialize(|c| Ok(ExtScalar::embed(c.clone())), CompletionLimits::default())?);
        let entries = self.l.entries().iter().map(|f| f.map_coeffs(|c| ExtScalar::embed(c.clone()))).collect();
        let l = AlgMatrix::new(&sys, 2, 2, entries);
        Ok((sys, l))
    }
}

/// Outcome of the extended CH check. `corrected` is the cubic
/// `(t − a s)(t² − a t + b)` with the constant term on `P₊`; `printed`
/// flips the sign of `b` in the linear and constant terms and uses `id`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChPlusReport<K: Field> {
    pub a: K,
    pub b: K,
    /// `q⁻¹ / 2_q`
    pub s: K,
    pub corrected: MatrixCheck,
    pub printed: MatrixCheck,
    pub commutes: bool,
    pub kills_antisym: bool,
}

trait CheckOf {
    fn check(&self) -> MatrixCheck;
}

impl<K: Field> CheckOf for AlgMatrix<K> {
    fn check(&self) -> MatrixCheck {
        let witness = self.first_nonzero();
        MatrixCheck { holds: witness.is_none(), witness }
    }
}

/// `L₊^{(k)}` for a given `L` over any ambient.
pub fn extend_l_plus<K: Field>(sym: &HeckeSymmetry<K>, l: &AlgMatrix<K>, k: usize) -> Result<AlgMatrix<K>, SphereError> {
    let n = l.rows();
    if k == 1 {
        return Ok(l.clone());
    }
    let p = AlgMatrix::from_scalars(l.ambient(), &sym.symmetrizer(k)?);
    let l1 = l.kron_identity(n.pow(k as u32 - 1));
    Ok(p.mul(&l1)?.mul(&p)?)
}

/// The line-bundle projectors of an orbit with roots `ν₁ ≠ ν₂`.
#[derive(Clone, Debug)]
pub struct LineBundles<K: Field> {
    pub nu: (K, K),
    pub p1: AlgMatrix<K>,
    pub p2: AlgMatrix<K>,
    pub report: ProjectorReport,
}

/// The identities certifying that `P₁`, `P₂` are complementary projectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProjectorReport {
    pub p1_idempotent: MatrixCheck,
    pub p2_idempotent: MatrixCheck,
    pub sum_is_identity: MatrixCheck,
    pub orthogonal: MatrixCheck,
    /// `ν₂P₁ + ν₁P₂ = L`: `P₁` kills the `ν₁`-eigenline, so it carries `ν₂`.
    pub spectral: MatrixCheck,
    /// `ν₁P₁ + ν₂P₂ = L`, which equals `a·id − L` instead; recorded only.
    pub spectral_same_labels: MatrixCheck,
}

impl ProjectorReport {
    pub fn passed(&self) -> bool {
        [&self.p1_idempotent, &self.p2_idempotent, &self.sum_is_identity, &self.orthogonal, &self.spectral]
            .iter()
            .all(|c| c.holds)
    }
}

/// `P₁ = (L − ν₁)/(ν₂ − ν₁)`, `P₂ = (L − ν₂)/(ν₁ − ν₂)` and their identities.
pub fn projectors<K: Field>(l: &AlgMatrix<K>, nu1: &K, nu2: &K) -> Result<LineBundles<K>, SphereError> {
    if nu1 == nu2 {
        return Err(SphereError::DegenerateOrbit);
    }
    let amb = l.ambient();
    let id = AlgMatrix::identity(amb, l.rows());
    let p1 = l.sub(&id.scale(nu1))?.scale(&nu2.sub(nu1).inv()?);
    let p2 = l.sub(&id.scale(nu2))?.scale(&nu1.sub(nu2).inv()?);
    let report = ProjectorReport {
        p1_idempotent: p1.mul(&p1)?.sub(&p1)?.check(),
        p2_idempotent: p2.mul(&p2)?.sub(&p2)?.check(),
        sum_is_identity: p1.add(&p2)?.sub(&id)?.check(),
        orthogonal: p1.mul(&p2)?.check(),
        spectral: p1.scale(nu2).add(&p2.scale(nu1))?.sub(l)?.check(),
        spectral_same_labels: p1.scale(nu1).add(&p2.scale(nu2))?.sub(l)?.check(),
    };
    Ok(LineBundles { nu: (nu1.clone(), nu2.clone()), p1, p2, report })
}

/// Dimensions of `(M/M_ν)` truncated at filtration levels `0..=level`,
/// where `M = V ⊗ A` is the free right module and `M_ν` is generated by the
/// coordinates `Σ_i v_i ⊗ (l_i^j − ν δ_i^j)`. Multipliers run up to level
/// `level + slack` before intersecting with the truncation.
pub fn quotient_module_dims<K: Field>(
    l: &AlgMatrix<K>,
    nu: &K,
    level: u32,
    slack: u32,
) -> Result<Vec<usize>, NcError> {
    let amb = l.ambient();
    let n = l.rows();
    let words = amb.irreducible_words(level + slack)?;
    // generators g_j as vectors over (word, slot)
    let gens: Vec<Vec<NCPoly<K>>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| {
                    let mut f = l.get(i, j).clone();
                    if i == j {
                        f = f.sub(&NCPoly::constant(nu.clone()));
                    }
                    f
                })
                .collect()
        })
        .collect();
    let mut ech: Echelon<(Word, usize), K> = Echelon::new();
    for g in &gens {
        for w in &words {
            let wp = NCPoly::word(w.clone());
            let mut row: BTreeMap<(Word, usize), K> = BTreeMap::new();
            for (i, gi) in g.iter().enumerate() {
                for (u, c) in amb.reduce(&gi.mul(&wp)).terms() {
                    row.insert((u.clone(), i), c.clone());
                }
            }
            ech.insert(row);
        }
    }
    let mut dims = Vec::new();
    for d in 0..=level {
        let sub = ech.pivot_keys().filter(|(w, _)| w.weight() <= d).count();
        let free = n * amb.filtered_dimension(d)?;
        dims.push(free - sub);
    }
    Ok(dims)
}

/// `M/M_ν` is nonzero at every level `≤ level` (slack one level).
pub fn quotient_module_nontrivial<K: Field>(l: &AlgMatrix<K>, nu: &K, level: u32) -> Result<bool, NcError> {
    Ok(quotient_module_dims(l, nu, level, 1)?.iter().all(|&d| d > 0))
}

/// Classical comparison at `q = 1`: the scalar `λ` with
/// `L₊ = λ · P₊ (L⊗id + id⊗L) P₊`, if one exists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeibnizReport {
    pub scalar: Option<String>,
    pub leibniz_nonzero: bool,
}

/// The classical sphere `{tr L = 0, det L = c}` over `Q`.
pub fn classical_sphere(c: BigRational, degree: u32) -> Result<OrbitAlgebra<BigRational>, SphereError> {
    let one = rat(1, 1);
    let r = HeckeSymmetry::new(standard_r_with(2, one.clone()), one)?;
    let re = REAlgebra::build(&r, degree)?;
    OrbitAlgebra::sphere(&re, c, degree)
}

pub fn classical_leibniz_check(s: &OrbitAlgebra<BigRational>) -> Result<LeibnizReport, SphereError> {
    let amb = s.system();
    let l = s.l();
    let lp = s.extend_l_plus(2)?;
    let p = AlgMatrix::from_scalars(amb, &s.re().symmetry().symmetrizer(2)?);
    // id ⊗ L: entry ((a,b),(c,d)) = δ_ac L[b][d]
    let l2 = AlgMatrix::from_fn(amb, 4, 4, |x, y| {
        if x / 2 == y / 2 {
            l.get(x % 2, y % 2).clone()
        } else {
            NCPoly::zero()
        }
    });
    let leib = l.kron_identity(2).add(&l2)?;
    let target = p.mul(&leib)?.mul(&p)?;
    let Some(k) = target.entries().iter().position(|e| !e.is_zero()) else {
        return Ok(LeibnizReport { scalar: None, leibniz_nonzero: false });
    };
    let (w, c) = target.entries()[k].leading().map(|(w, c)| (w.clone(), c.clone())).unwrap();
    let lambda = lp.entries()[k].coeff(&w).div(&c)?;
    let holds = lp.sub(&target.scale(&lambda))?.is_zero();
    Ok(LeibnizReport { scalar: holds.then(|| lambda.to_string()), leibniz_nonzero: true })
}

/// Evaluates a commutative-limit polynomial at a point `L = m`.
pub fn eval_at_point(f: &NCPoly<BigRational>, point: &[BigRational]) -> BigRational {
    f.terms().fold(rat(0, 1), |acc, (w, c)| {
        acc + w.letters().iter().fold(c.clone(), |x, &g| x * &point[g as usize])
    })
}

/// `P₁` evaluated at a classical point, with its trace and rank.
pub fn classical_projector_rank(
    bundles: &LineBundles<BigRational>,
    point: &[BigRational],
) -> (Matrix<BigRational>, BigRational, usize) {
    let n = bundles.p1.rows();
    let m = Matrix::from_fn(n, n, |i, j| eval_at_point(bundles.p1.get(i, j), point));
    let tr = m.trace();
    let rank = m.rank();
    (m, tr, rank)
}

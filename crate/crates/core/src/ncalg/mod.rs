//! Free associative algebras, degree-bounded completion and matrices with
//! noncommutative entries.

mod matrix;
mod parse;
mod poly;
mod system;

use thiserror::Error;

use crate::coeff::{CoeffError, Field};
use crate::linalg::Echelon;

pub use matrix::AlgMatrix;
pub use parse::{parse_presentation, PresentationFile};
pub use poly::{NCPoly, Word};
pub use system::{CompletionLimits, Generators, Presentation, RewriteSystem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NcError {
    #[error("completion diverged after {rules} rules: {reason}")]
    CompletionDiverged { rules: usize, reason: String },
    #[error("degree {degree} exceeds the completion bound {bound}")]
    DegreeExceeded { degree: u32, bound: u32 },
    #[error("relations generate the whole algebra")]
    TrivialQuotient,
    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch { left: (usize, usize), right: (usize, usize) },
    #[error("matrices live over different rewrite systems")]
    AmbientMismatch,
    #[error("duplicate generator '{0}'")]
    DuplicateGenerator(String),
    #[error("generator weights must be positive")]
    ZeroWeight,
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// Solutions of a linear system `nf(base_i + Σ_k x_k·unknowns[k]_i) = 0`.
#[derive(Clone, Debug)]
pub struct LinearSolution<K> {
    pub particular: Vec<K>,
    pub kernel: Vec<Vec<K>>,
}

/// Solves for scalars `x` such that every `base[i] + Σ_k x[k]·unknowns[k][i]`
/// reduces to zero. Returns `None` if there is no solution.
pub fn solve_linear<K: Field>(
    sys: &RewriteSystem<K>,
    base: &[NCPoly<K>],
    unknowns: &[Vec<NCPoly<K>>],
) -> Option<LinearSolution<K>> {
    use rayon::prelude::*;
    use std::collections::BTreeMap;
    let nu = unknowns.len();
    // column 0 carries the constant side, column k + 1 the unknown x_k
    let mut rows: BTreeMap<(usize, Word), BTreeMap<usize, K>> = BTreeMap::new();
    for (i, b) in base.iter().enumerate() {
        let mut cols: Vec<(usize, &NCPoly<K>)> = vec![(0, b)];
        cols.extend(unknowns.iter().enumerate().map(|(k, u)| (k + 1, &u[i])));
        let reduced: Vec<(usize, NCPoly<K>)> = cols.par_iter().map(|(c, p)| (*c, sys.reduce(p))).collect();
        for (c, p) in reduced {
            for (w, x) in p.terms() {
                let row = rows.entry((i, w.clone())).or_default();
                let e = row.entry(c).or_insert_with(K::zero);
                *e = e.add(x);
                if e.is_zero() {
                    row.remove(&c);
                }
            }
        }
    }
    let mut ech: Echelon<usize, K> = Echelon::new();
    for (_, row) in rows {
        if let Some(r) = ech.insert(row) {
            if r.keys().next_back() == Some(&0) {
                return None;
            }
        }
    }
    ech.interreduce();
    let mut particular = vec![K::zero(); nu];
    for (&p, row) in ech.rows() {
        particular[p - 1] = row.get(&0).map(|c| c.neg()).unwrap_or_else(K::zero);
    }
    let kernel = (1..=nu)
        .filter(|c| !ech.is_pivot(c))
        .map(|f| {
            let mut v = vec![K::zero(); nu];
            v[f - 1] = K::one();
            for (&p, row) in ech.rows() {
                if let Some(c) = row.get(&f) {
                    v[p - 1] = c.neg();
                }
            }
            v
        })
        .collect();
    Some(LinearSolution { particular, kernel })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::coeff::{rat, ParamSet, QScalar};
    use num_rational::BigRational;

    fn commutative(n: usize) -> Presentation<BigRational> {
        let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let gens = Generators::new(names, vec![1; n]).unwrap();
        let mut rels = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let a = gens.gen::<BigRational>(i);
                let b = gens.gen::<BigRational>(j);
                rels.push(b.mul(&a).sub(&a.mul(&b)));
            }
        }
        Presentation::with_relations(Arc::new(gens), rels)
    }

    #[test]
    fn commutative_ring_dimensions() {
        let p = commutative(2);
        let rs = RewriteSystem::complete(&p, 6, CompletionLimits::default()).unwrap();
        assert_eq!(rs.rule_count(), 1);
        assert!(rs.is_fully_confluent());
        let p4 = commutative(4);
        let rs4 = RewriteSystem::complete(&p4, 4, CompletionLimits::default()).unwrap();
        assert_eq!(rs4.graded_dimension(2).unwrap(), 10);
        assert_eq!(rs4.graded_dimension(3).unwrap(), 20);
    }

    #[test]
    fn nilpotent_and_free() {
        let gens = Arc::new(Generators::uniform(&["x"]));
        let x = gens.gen::<BigRational>(0);
        let p = Presentation::with_relations(gens, vec![x.mul(&x)]);
        let rs = RewriteSystem::complete(&p, 5, CompletionLimits::default()).unwrap();
        let dims: Vec<usize> = (0..4).map(|d| rs.graded_dimension(d).unwrap()).collect();
        assert_eq!(dims, vec![1, 1, 0, 0]);
        let free = Presentation::<BigRational>::with_relations(Arc::new(Generators::uniform(&["x", "y"])), vec![]);
        let rs = RewriteSystem::complete(&free, 3, CompletionLimits::default()).unwrap();
        assert_eq!(rs.graded_dimension(2).unwrap(), 4);
    }

    #[test]
    fn trivial_quotient_detected() {
        let gens = Arc::new(Generators::uniform(&["x"]));
        let x = gens.gen::<BigRational>(0);
        let one = NCPoly::one();
        // x = 1 and x^2 = 2 force 1 = 2
        let p = Presentation::with_relations(gens, vec![x.sub(&one), x.mul(&x).sub(&one.scale(&rat(2, 1)))]);
        assert_eq!(RewriteSystem::complete(&p, 3, CompletionLimits::default()).unwrap_err(), NcError::TrivialQuotient);
    }

    #[test]
    fn quantum_plane_normal_forms() {
        let src = "[generators]\nx y\n[relations]\ny*x - q*x*y\n[options]\ndegree = 4\n";
        let f = parse_presentation(src).unwrap();
        let rs = RewriteSystem::complete(&f.presentation, 4, CompletionLimits::default()).unwrap();
        let g = &f.presentation.gens;
        let (x, y) = (g.gen::<QScalar>(0), g.gen::<QScalar>(1));
        let yyx = rs.normal_form(&y.mul(&y).mul(&x)).unwrap();
        let q2 = f.params.q().pow(2);
        assert_eq!(yyx, x.mul(&y).mul(&y).scale(&q2));
        assert_eq!(rs.graded_dimension(3).unwrap(), 4);
        let _ = ParamSet::q_only();
    }

    #[test]
    fn presentation_parse_errors_have_positions() {
        let bad = "[generators]\nx y\n[relations]\nx*y - z\n";
        match parse_presentation(bad) {
            Err(NcError::Coeff(CoeffError::UnknownName { line, col, .. })) => assert_eq!((line, col), (4, 7)),
            other => panic!("{other:?}"),
        }
        let bad = "[generators]\nx y\n[relations]\n  x*y - * y\n";
        match parse_presentation(bad) {
            Err(NcError::Coeff(CoeffError::Parse { line, col, .. })) => assert_eq!((line, col), (4, 9)),
            other => panic!("{other:?}"),
        }
        assert!(parse_presentation("[gens]\n").is_err());
    }

    #[test]
    fn linear_solve_finds_commutator_scalar() {
        let src = "[generators]\nx y\n[relations]\ny*x - q*x*y\n";
        let f = parse_presentation(src).unwrap();
        let rs = RewriteSystem::complete(&f.presentation, 3, CompletionLimits::default()).unwrap();
        let g = &f.presentation.gens;
        let (x, y) = (g.gen::<QScalar>(0), g.gen::<QScalar>(1));
        // y x + t x y = 0 has t = -q
        let sol = solve_linear(&rs, &[y.mul(&x)], &[vec![x.mul(&y)]]).unwrap();
        assert_eq!(sol.particular[0], f.params.q().neg());
        assert!(sol.kernel.is_empty());
    }
}

use std::collections::BTreeSet;

use num_rational::BigRational;
use qre_core::coeff::{rat, Field, ParamSet, QScalar};
use qre_core::hecke::{standard_r, standard_r_with, HeckeSymmetry};
use qre_core::linalg::Matrix;
use qre_core::ncalg::{NCPoly, Presentation, Word};
use qre_core::realg::{central_witness, shift_check, shift_check_with, standard_shift_check, REAlgebra};

fn binom(n: usize, k: usize) -> usize {
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= (n - i) as u128;
        den *= (i + 1) as u128;
    }
    (num / den) as usize
}

fn re2(degree: u32) -> REAlgebra<QScalar> {
    REAlgebra::build(&standard_r(2, &ParamSet::q_only()), degree).unwrap()
}

#[test]
fn relation_span_matches_dense_rank() {
    let r = standard_r(2, &ParamSet::q_only());
    let p = REAlgebra::presentation_for(&r, &QScalar::zero(), 4).unwrap();
    // dense coefficient matrix over all degree-2 words
    let words: BTreeSet<Word> = p.relations.iter().flat_map(|f| f.terms().map(|(w, _)| w.clone())).collect();
    let words: Vec<Word> = words.into_iter().collect();
    let m = Matrix::from_fn(p.relations.len(), words.len(), |i, j| p.relations[i].coeff(&words[j]));
    assert_eq!(m.rank(), 6);
    assert_eq!(p.relations.len(), 6);
    assert!(p.relations.iter().all(|f| f.terms().all(|(w, _)| w.weight() == 2)));
}

#[test]
fn graded_dimensions_are_flat() {
    let a = re2(5);
    let rep = a.check_flatness(5).unwrap();
    let oracle: Vec<usize> = (0..=5).map(|d| binom(d + 3, d)).collect();
    assert_eq!(rep.dims, oracle);
    assert!(rep.passed());
}

#[test]
fn shifted_filtered_dimensions_are_flat() {
    let p = ParamSet::new(&["h"]);
    let r = standard_r(2, &p);
    let a = REAlgebra::build_shifted(&r, p.var("h"), 4).unwrap();
    let rep = a.check_flatness(4).unwrap();
    assert_eq!(rep.dims, vec![1, 5, 15, 35, 70]);
    assert!(rep.filtered && rep.passed());
}

#[test]
fn corrupted_relation_breaks_flatness() {
    let r = standard_r(2, &ParamSet::q_only());
    let p = REAlgebra::presentation_for(&r, &QScalar::zero(), 4).unwrap();
    let g = &p.gens;
    let mut rels = p.relations.clone();
    // tamper with one relation: add l12·l12
    rels[0] = rels[0].add(&g.gen::<QScalar>(1).mul(&g.gen(1)));
    let bad = Presentation::with_relations(g.clone(), rels);
    match REAlgebra::from_presentation(r, QScalar::zero(), bad, 4) {
        Ok(a) => assert!(!a.check_flatness(4).unwrap().passed()),
        Err(_) => {}
    }
}

#[test]
fn quantum_trace_is_central_and_unique() {
    let a = re2(4);
    let q = a.symmetry().q().clone();
    let d = a.quantum_trace_matrix().unwrap();
    assert_eq!(d.diagonal, vec![QScalar::one(), q.pow(2)]);
    let tr = a.trace_with(&d.diagonal);
    assert_eq!(central_witness(a.system(), &tr), None);
    // the classical trace is not central
    let plain = a.trace_with(&[QScalar::one(), QScalar::one()]);
    assert!(central_witness(a.system(), &plain).is_some());
}

#[test]
fn cayley_hamilton_n2() {
    let a = re2(4);
    let ch = a.ch_coefficients(2).unwrap();
    assert!(ch.central);
    assert!(a.ch_residual(&ch).unwrap().is_zero());
    let q = a.symmetry().q().clone();
    let qi2 = q.pow(2).inv().unwrap();
    let (l11, l12, l21, l22) = (a.gen(0, 0), a.gen(0, 1), a.gen(1, 0), a.gen(1, 1));
    assert_eq!(ch.sigma[1], l11.scale(&qi2).add(&l22));
    let s2 = l11.mul(&l22).sub(&l12.mul(&l21)).sub(&l11.mul(&l11).scale(&QScalar::one().sub(&qi2)));
    assert_eq!(ch.sigma[2], a.system().reduce(&s2));
    // q = 1: trace and determinant of a commuting matrix
    let at1 = |f: &NCPoly<QScalar>| f.map_coeffs(|c| c.classical_limit(&[]).unwrap());
    assert_eq!(at1(&ch.sigma[1]), at1(&l11.add(&l22)));
    assert_eq!(at1(&ch.sigma[2]), at1(&a.system().reduce(&l11.mul(&l22).sub(&l12.mul(&l21)))));
}

#[test]
fn cayley_hamilton_numeric_n3() {
    let q = rat(3, 2);
    let r = HeckeSymmetry::new(standard_r_with(3, q.clone()), q).unwrap();
    let a: REAlgebra<BigRational> = REAlgebra::build(&r, 4).unwrap();
    assert!(a.check_flatness(3).unwrap().passed());
    let ch = a.ch_coefficients(3).unwrap();
    assert!(ch.central);
    assert!(a.ch_residual(&ch).unwrap().is_zero());
    // σ(1) is the quantum trace up to the normalization
    let tr = a.quantum_trace().unwrap();
    let s1 = &ch.sigma[1];
    let (w, c) = tr.leading().unwrap();
    assert_eq!(s1.scale(&c.div(&s1.coeff(w)).unwrap()), tr);
}

#[test]
fn shift_identity_symbolic() {
    assert!(standard_shift_check(2).unwrap().holds);
    let p = ParamSet::new(&["h"]);
    let r = standard_r(2, &p);
    let h = p.var("h");
    assert!(shift_check(&r, &h).unwrap().holds);
    // ℏ off by a factor q fails
    let q = p.q();
    let wrong = h.mul(&q).mul(&q.sub(&q.inv().unwrap()));
    assert!(!shift_check_with(&r, &h, &wrong).unwrap().holds);
}

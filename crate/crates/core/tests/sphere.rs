use num_rational::BigRational;
use qre_core::coeff::{rat, ExtScalar, Field, ParamSet, QScalar};
use qre_core::hecke::standard_r;
use qre_core::realg::REAlgebra;
use qre_core::sphere::{
    classical_leibniz_check, classical_projector_rank, classical_sphere, orbit_roots, projectors,
    quotient_module_dims, quotient_module_nontrivial, OrbitAlgebra, Roots, SphereError,
};

fn qc(n: i64, d: i64) -> QScalar {
    QScalar::from_rational(rat(n, d))
}

fn re(degree: u32) -> REAlgebra<QScalar> {
    REAlgebra::build(&standard_r(2, &ParamSet::q_only()), degree).unwrap()
}

fn sphere(c: QScalar) -> OrbitAlgebra<QScalar> {
    OrbitAlgebra::sphere(&re(6), c, 6).unwrap()
}

#[test]
fn sphere_is_flat() {
    let s = sphere(qc(-1, 1));
    assert!(s.system().is_fully_confluent());
    assert_eq!(s.check_flatness(4).unwrap().dims, vec![1, 4, 9, 16, 25]);
    assert!(s.numeric_residual().unwrap().is_zero());
}

#[test]
fn shifted_sphere_is_flat() {
    let p = ParamSet::new(&["h"]);
    let r = standard_r(2, &p);
    let reh = REAlgebra::build_shifted(&r, p.var("h"), 5).unwrap();
    let s = OrbitAlgebra::sphere(&reh, QScalar::from_int(-1), 5).unwrap();
    assert_eq!(s.check_flatness(4).unwrap().dims, vec![1, 4, 9, 16, 25]);
}

#[test]
fn zero_orbit_constant_rejected() {
    assert!(matches!(OrbitAlgebra::sphere(&re(4), QScalar::zero(), 4), Err(SphereError::ZeroOrbitConstant)));
}

#[test]
fn symbolic_orbit_constant() {
    let p = ParamSet::new(&["c"]);
    let re = REAlgebra::build(&standard_r(2, &p), 4).unwrap();
    let c = p.var("c");
    let s = OrbitAlgebra::sphere(&re, c.clone(), 4).unwrap();
    let np = s.numeric_polynomial();
    assert_eq!(np.c2, Some(c));
    assert!(s.numeric_residual().unwrap().is_zero());
    assert_eq!(s.check_flatness(3).unwrap().dims, vec![1, 4, 9, 16]);
}

#[test]
fn default_orbit_has_rational_roots() {
    let roots = orbit_roots(&QScalar::zero(), &qc(-1, 1)).unwrap();
    assert_eq!(roots, Roots::Base(qc(1, 1), qc(-1, 1)));
    assert!(!orbit_roots(&QScalar::zero(), &qc(2, 1)).unwrap().is_base());
    assert!(orbit_roots(&QScalar::zero(), &QScalar::zero()).is_err());
}

#[test]
fn line_bundle_projectors() {
    let s = sphere(qc(-1, 1));
    let Roots::Base(n1, n2) = s.roots().unwrap() else { panic!() };
    let lb = projectors(s.l(), &n1, &n2).unwrap();
    assert!(lb.report.passed(), "{:?}", lb.report);
    assert!(!lb.report.spectral_same_labels.holds);
    // ν₁P₁ + ν₂P₂ = a·id − L with a = 0
    let minus_l = lb.p1.scale(&n1).add(&lb.p2.scale(&n2)).unwrap().add(s.l()).unwrap();
    assert!(minus_l.is_zero());
    // a wrong root breaks idempotency
    let bad = projectors(s.l(), &n1.add(&QScalar::one()), &n2).unwrap();
    assert!(!bad.report.p1_idempotent.holds);
}

#[test]
fn line_bundle_projectors_over_extension() {
    let s = sphere(qc(2, 1));
    let roots = s.roots().unwrap();
    assert!(!roots.is_base());
    let (n1, n2) = roots.in_ext();
    assert_eq!(n1.mul(&n1), ExtScalar::embed(qc(-2, 1)));
    let (_, l) = s.to_ext().unwrap();
    let lb = projectors(&l, &n1, &n2).unwrap();
    assert!(lb.report.passed());
}

#[test]
fn quotient_module_detects_roots() {
    let s = sphere(qc(-1, 1));
    let one = QScalar::one();
    for nu in [one.clone(), one.neg()] {
        assert!(quotient_module_nontrivial(s.l(), &nu, 3).unwrap());
    }
    let non_root = one.add(&one);
    assert!(!quotient_module_nontrivial(s.l(), &non_root, 3).unwrap());
    assert_eq!(quotient_module_dims(s.l(), &non_root, 3, 1).unwrap(), vec![0, 0, 0, 0]);
}

#[test]
fn quotient_module_matches_classical_count() {
    // q = 1: the section count of the classical line bundle
    let s = classical_sphere(rat(-1, 1), 6).unwrap();
    let qs = sphere(qc(-1, 1));
    for nu in [1, -1] {
        let classical = quotient_module_dims(s.l(), &rat(nu, 1), 3, 1).unwrap();
        let quantum = quotient_module_dims(qs.l(), &qc(nu, 1), 3, 1).unwrap();
        assert_eq!(classical, quantum);
        assert!(classical.iter().all(|&d| d > 0));
    }
}

#[test]
fn extended_ch_on_sphere() {
    for c in [qc(-1, 1), qc(2, 1), qc(1, 4)] {
        let s = sphere(c.clone());
        let rep = s.verify_ch_plus().unwrap();
        assert!(rep.corrected.holds, "c = {c}");
        assert!(rep.commutes && rep.kills_antisym);
        assert!(!rep.printed.holds, "c = {c}");
        // a = 0: L₊³ + b L₊ = 0, no q in the coefficients
        let coeffs = s.ch_plus_coefficients().unwrap().unwrap();
        assert_eq!(coeffs, [QScalar::zero(), c, QScalar::zero()]);
    }
}

#[test]
fn extended_ch_generic_orbit() {
    let a = qc(2, 1);
    let b = qc(-3, 1);
    let s = OrbitAlgebra::orbit(&re(6), a, b, 6).unwrap();
    assert_eq!(s.check_flatness(3).unwrap().dims, vec![1, 4, 9, 16]);
    let rep = s.verify_ch_plus().unwrap();
    assert!(rep.corrected.holds);
    assert!(!rep.printed.holds);
}

#[test]
fn extended_ch_classical_limit() {
    let one = rat(1, 1);
    let r = qre_core::hecke::HeckeSymmetry::new(qre_core::hecke::standard_r_with(2, one.clone()), one).unwrap();
    let re = REAlgebra::<BigRational>::build(&r, 6).unwrap();
    let s = OrbitAlgebra::orbit(&re, rat(2, 1), rat(-3, 1), 6).unwrap();
    let rep = s.verify_ch_plus().unwrap();
    assert_eq!(rep.s, rat(1, 2));
    assert!(rep.corrected.holds);
    // eigenvalues 3, 1, −1 on the symmetric square: t³ − 3t² − t + 3
    assert_eq!(s.ch_plus_coefficients().unwrap().unwrap(), [rat(-3, 1), rat(-1, 1), rat(3, 1)]);
}

#[test]
fn leibniz_extension_agrees_classically() {
    let s = classical_sphere(rat(-1, 1), 4).unwrap();
    let rep = classical_leibniz_check(&s).unwrap();
    assert_eq!(rep.scalar.as_deref(), Some("1/2"));
}

#[test]
fn classical_projector_has_rank_one() {
    let s = classical_sphere(rat(-1, 1), 4).unwrap();
    let lb = projectors(s.l(), &rat(1, 1), &rat(-1, 1)).unwrap();
    assert!(lb.report.passed());
    // L = diag(1, −1) lies on the orbit
    let point = [rat(1, 1), rat(0, 1), rat(0, 1), rat(-1, 1)];
    let (m, tr, rank) = classical_projector_rank(&lb, &point);
    assert_eq!(m.mul(&m), m);
    assert_eq!((tr, rank), (rat(1, 1), 1));
}

#[test]
fn extended_ch_on_shifted_orbit() {
    // on the ℏ-shifted orbit the third root moves to s·(a + qℏ)
    let p = ParamSet::new(&["h"]);
    let r = standard_r(2, &p);
    let (q, h) = (p.q(), p.var("h"));
    let reh = REAlgebra::build_shifted(&r, h.clone(), 6).unwrap();
    let (a, b) = (QScalar::from_int(2), QScalar::from_int(-3));
    let s = OrbitAlgebra::orbit(&reh, a.clone(), b.clone(), 6).unwrap();
    let found = s.ch_plus_coefficients().unwrap().unwrap();
    let sq = q.mul(&q).add(&QScalar::one()).inv().unwrap();
    let r3 = sq.mul(&a.add(&q.mul(&h)));
    // (t − r3)(t² − a t + b)
    let expected = [a.add(&r3).neg(), b.add(&a.mul(&r3)), b.mul(&r3).neg()];
    assert_eq!(found, expected);
    assert!(!s.verify_ch_plus().unwrap().corrected.holds);
}

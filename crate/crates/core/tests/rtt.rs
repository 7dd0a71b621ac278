use qre_core::coeff::{Field, ParamSet, QScalar};
use qre_core::hecke::standard_r;
use qre_core::ncalg::NCPoly;
use qre_core::realg::REAlgebra;
use qre_core::rtt::{Coaction, CoactionLaw, RTTAlgebra};

fn setup() -> (RTTAlgebra<QScalar>, REAlgebra<QScalar>) {
    let r = standard_r(2, &ParamSet::q_only());
    (RTTAlgebra::build(&r, 4).unwrap(), REAlgebra::build(&r, 4).unwrap())
}

#[test]
fn t_algebra_is_flat() {
    let (a, _) = setup();
    let rep = a.check_flatness(4).unwrap();
    assert_eq!(rep.dims, vec![1, 4, 10, 20, 35]);
}

#[test]
fn quantum_determinant_is_central() {
    let (a, _) = setup();
    assert!(a.system().is_fully_confluent());
    assert_eq!(a.det_commutator_witness(), None);
    let g = a.t_system().gens();
    let q = a.symmetry().q().clone();
    let (t11, t12, t21, t22) = (g.gen::<QScalar>(0), g.gen(1), g.gen(2), g.gen(3));
    let expected = a.t_system().reduce(&t11.mul(&t22).sub(&t12.mul(&t21).scale(&q)));
    assert_eq!(a.quantum_det_t(), &expected);
    // det · det⁻¹ = 1 and det is the solved polynomial
    let sys = a.system();
    assert_eq!(sys.reduce(&a.det_generator().mul(&a.det_inverse())), NCPoly::one());
    assert!(sys.reduce(&a.quantum_det().sub(&a.det_generator())).is_zero());
    // q = 1: classical determinant
    let at1 = |f: &NCPoly<QScalar>| f.map_coeffs(|c| c.classical_limit(&[]).unwrap());
    assert_eq!(at1(a.quantum_det_t()), at1(&a.t_system().reduce(&t11.mul(&t22).sub(&t12.mul(&t21)))));
}

#[test]
fn antipode_inverts_t() {
    let (a, _) = setup();
    let s = a.antipode().unwrap();
    let (left, right) = a.check_antipode(&s).unwrap();
    assert!(left.holds && right.holds);
    let (bad, _) = a.check_antipode(&a.classical_antipode()).unwrap();
    assert!(!bad.holds);
    assert!(bad.witness.is_some());
}

#[test]
fn coaction_preserves_re_relations() {
    let (a, re) = setup();
    let d = Coaction::new(&a, &re, CoactionLaw::Adjoint, 4).unwrap();
    assert!(re.system().is_fully_confluent() && d.combined().is_fully_confluent());
    let c = d.check_preserves_ideal(&re);
    assert!(c.holds, "{c:?}");
    assert_eq!(c.checked, 6);
    let bad = Coaction::new(&a, &re, CoactionLaw::LeftOnly, 4).unwrap();
    assert!(!bad.check_preserves_ideal(&re).holds);
}

#[test]
fn coaction_preserves_shifted_relations() {
    let p = ParamSet::new(&["h"]);
    let r = standard_r(2, &p);
    let a = RTTAlgebra::build(&r, 4).unwrap();
    let re = REAlgebra::build_shifted(&r, p.var("h"), 4).unwrap();
    let d = Coaction::new(&a, &re, CoactionLaw::Adjoint, 4).unwrap();
    assert!(d.check_preserves_ideal(&re).holds);
}

#[test]
fn powers_are_equivariant() {
    let (a, re) = setup();
    let d = Coaction::new(&a, &re, CoactionLaw::Adjoint, 4).unwrap();
    for k in 1..=3 {
        assert!(d.check_power_equivariance(&re, k).unwrap().holds, "k = {k}");
    }
}

#[test]
fn quantum_trace_is_invariant() {
    let (a, re) = setup();
    let d = Coaction::new(&a, &re, CoactionLaw::Adjoint, 4).unwrap();
    let tr = re.quantum_trace().unwrap();
    assert!(d.is_invariant(&tr));
    let plain = re.trace_with(&[QScalar::one(), QScalar::one()]);
    assert!(!d.is_invariant(&plain));
}

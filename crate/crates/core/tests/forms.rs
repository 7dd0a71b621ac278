use std::collections::BTreeMap;

use qre_core::coeff::{rat, Field, ParamSet, QScalar};
use qre_core::forms::*;
use qre_core::hecke::standard_r;
use qre_core::linalg::Matrix;
use qre_core::ncalg::NCPoly;
use qre_core::realg::REAlgebra;
use qre_core::sphere::OrbitAlgebra;

fn q() -> QScalar {
    ParamSet::q_only().q()
}

/// Classical Clebsch–Gordan: spins (as 2j) in V_a ⊗ V_b.
fn cg(a: u32, b: u32) -> Vec<u32> {
    (a.abs_diff(b)..=a + b).step_by(2).collect()
}

fn table_of(parts: &[(u32, i64)]) -> BTreeMap<u32, usize> {
    let mut m: BTreeMap<u32, i64> = BTreeMap::new();
    for &(j, k) in parts {
        *m.entry(j).or_default() += k;
    }
    m.into_iter().filter(|(_, k)| *k != 0).map(|(j, k)| (j, k as usize)).collect()
}

/// Functions of degree ≤ d on the classical sphere: spins 0..=d.
fn harmonics(d: i64) -> Vec<u32> {
    (0..=d.max(-1)).map(|j| 2 * j as u32).collect()
}

#[test]
fn spin_modules_satisfy_relations() {
    let q = q();
    for j2 in 0..5 {
        let v = spin_module(j2, &q);
        assert!(v.check_relations().passed(), "2j = {j2}");
        let c = v.casimir().unwrap();
        assert_eq!(c, Matrix::identity(j2 as usize + 1).scale(&casimir_value(j2, &q).unwrap()));
        // q = 1: the sl(2) relations with K = 1
        let v1 = spin_module(j2, &rat(1, 1));
        let r = v1.check_relations();
        assert!(r.k_e && r.k_f && r.k_inverse);
        let h = Matrix::diagonal(&v1.weights.clone().unwrap().iter().map(|&w| rat(w, 1)).collect::<Vec<_>>());
        assert_eq!(v1.e.mul(&v1.f).sub(&v1.f.mul(&v1.e)), h);
    }
    // a wrong q-integer breaks the bracket
    let mut bad = spin_module(2, &q);
    bad.f = bad.f.scale(&q);
    assert!(!bad.check_relations().bracket);
}

#[test]
fn clebsch_gordan_decompositions() {
    let q = q();
    for (a, b) in [(2, 2), (1, 1), (2, 1)] {
        let d = decompose_tensor(a, b, &q).unwrap();
        assert!(d.report.passed(), "{a} ⊗ {b}: {:?}", d.report);
        let spins: Vec<u32> = d.components.iter().map(|c| c.j2).collect();
        assert_eq!(spins, cg(a, b));
        assert!(d.components.iter().all(|c| c.multiplicity == 1));
        // highest-weight counting agrees
        let rep = spin_module(a, &q).tensor(&spin_module(b, &q));
        assert_eq!(rep.multiplicities().keys().copied().collect::<Vec<_>>(), cg(a, b));
    }
}

#[test]
fn projectors_have_classical_limit() {
    // q → 1 limit of each projector equals the classical one, built from
    // the sl(2) Casimir fe + h²/4 + h/2 with eigenvalue j(j+1)
    let d = decompose_tensor(2, 2, &q()).unwrap();
    let v = spin_module(2, &rat(1, 1));
    let vv = v.tensor(&v);
    let h = Matrix::diagonal(&vv.weights.clone().unwrap().iter().map(|&w| rat(w, 1)).collect::<Vec<_>>());
    let c = vv.f.mul(&vv.e).add(&h.mul(&h).scale(&rat(1, 4))).add(&h.scale(&rat(1, 2)));
    let id = Matrix::identity(9);
    let val = |j2: u32| rat((j2 * (j2 + 2)) as i64, 4);
    for comp in &d.components {
        let mut p = id.clone();
        for o in cg(2, 2) {
            if o != comp.j2 {
                let den = val(comp.j2) - val(o);
                p = p.mul(&c.sub(&id.scale(&val(o)))).scale(&(rat(1, 1) / den));
            }
        }
        let limit = comp.projector.try_map(|x| x.classical_limit(&[])).unwrap();
        assert_eq!(limit, p, "2j = {}", comp.j2);
    }
}

#[test]
fn morphism_and_invariant_vector() {
    let q = q();
    let v = spin_module(2, &q);
    let alpha = alpha_morphism(&v).unwrap();
    let vv = v.tensor(&v);
    for (x, y) in [(&v.e, &vv.e), (&v.f, &vv.f), (&v.k, &vv.k)] {
        assert_eq!(alpha.mul(y), x.mul(&alpha));
    }
    assert_eq!(alpha.get(0, 1), &QScalar::one());
    // spin ½ ⊗ spin ½ = 0 ⊕ 1 has no spin-½ part
    assert!(matches!(alpha_morphism(&spin_module(1, &q)), Err(FormsError::AlphaNotUnique(0))));
    let s = TensorSphere::build(&q, QScalar::from_int(-1), QScalar::zero(), 3).unwrap();
    let v0 = Matrix::from_fn(9, 1, |i, _| s.v0[i].clone());
    assert!(vv.e.mul(&v0).is_zero() && vv.f.mul(&v0).is_zero());
    assert_eq!(s.spin1.len(), 3);
}

#[test]
fn tensor_sphere_is_flat() {
    let q = q();
    let s = TensorSphere::build(&q, QScalar::from_int(-1), QScalar::zero(), 6).unwrap();
    assert!(s.system.is_fully_confluent());
    assert!(s.check_flatness(4).unwrap().passed());
    assert!(s.is_equivariant());
    let p = ParamSet::new(&["h"]);
    let sh = TensorSphere::build(&p.q(), QScalar::from_int(-1), p.var("h"), 5).unwrap();
    assert_eq!(sh.check_flatness(4).unwrap().dims, vec![1, 4, 9, 16, 25]);
    assert!(sh.is_equivariant());
}

#[test]
fn adjoint_action_preserves_re_relations() {
    let pq = ParamSet::q_only();
    let q = pq.q();
    let re = REAlgebra::build(&standard_r(2, &pq), 4).unwrap();
    let act = adjoint_action(&q, re.system().gens(), 0);
    assert!(act.preserves(re.system(), &re.system().rule_relations()));
    let p = ParamSet::new(&["h"]);
    let reh = REAlgebra::build_shifted(&standard_r(2, &p), p.var("h"), 4).unwrap();
    let acth = adjoint_action(&p.q(), reh.system().gens(), 0);
    assert!(acth.preserves(reh.system(), &reh.system().rule_relations()));
    // the action at the wrong deformation parameter does not
    let wrong = adjoint_action(&q.mul(&q), re.system().gens(), 0);
    assert!(!wrong.preserves(re.system(), &re.system().rule_relations()));
}

#[test]
fn form_modules_match_classical_counts() {
    let q = q();
    let s = TensorSphere::build(&q, QScalar::from_int(-1), QScalar::zero(), 6).unwrap();
    let t = form_tables(&s, 4).unwrap();
    assert_eq!(t.dims[0], vec![1, 4, 9, 16, 25]);
    assert_eq!(t.dims[1], vec![3, 11, 23, 39, 59]);
    assert_eq!(t.dims[2], vec![3, 9, 16, 25, 36]);
    for d in 0..=4i64 {
        let f = |ds: i64| harmonics(ds);
        // Ω⁰: harmonics; Ω¹: A⊗V minus A·(spin 0); Ω² minus A·(spin 1) plus one syzygy
        let av: Vec<(u32, i64)> = f(d).iter().flat_map(|&j| cg(j, 2)).map(|j| (j, 1)).collect();
        let o0 = table_of(&f(d).iter().map(|&j| (j, 1)).collect::<Vec<_>>());
        let mut o1 = av.clone();
        o1.extend(f(d - 1).iter().map(|&j| (j, -1)));
        let mut o2 = av.clone();
        o2.extend(f(d - 1).iter().flat_map(|&j| cg(j, 2)).map(|j| (j, -1)));
        o2.extend(f(d - 2).iter().map(|&j| (j, 1)));
        let du = d as usize;
        assert_eq!(t.omega0[du], o0, "Ω⁰ level {d}");
        assert_eq!(t.omega1[du], table_of(&o1), "Ω¹ level {d}");
        assert_eq!(t.omega2[du], table_of(&o2), "Ω² level {d}");
    }
    // tangent module: same quotient as Ω¹
    let tan = build_omega(&s, FormKind::Tangent, 3).unwrap();
    assert_eq!(tan.dims().unwrap(), vec![3, 11, 23, 39]);
}

#[test]
fn classical_differential_squares_to_zero() {
    let cx = ClassicalComplex::build(rat(-1, 1), 3).unwrap();
    let words = cx.sphere.system.irreducible_words(3).unwrap();
    let mut nonzero = 0;
    for w in &words {
        let f = cx.omega[0].embed(&NCPoly::word(w.clone()), 0);
        let df = cx.d(0, &f);
        if !df.is_empty() {
            nonzero += 1;
        }
        assert!(cx.d(1, &df).is_empty(), "{w:?}");
    }
    assert_eq!(nonzero, words.len() - 1);
    // d(v₀) = 0 on the sphere: v₀ is the constant c
    let v0: NCPoly<_> = (0..9).fold(NCPoly::zero(), |acc, i| {
        acc.add(&NCPoly::word(cx.sphere.system.gens().word(&[(i / 3) as u16, (i % 3) as u16])).scale(&cx.sphere.v0[i]))
    });
    assert!(cx.d(0, &cx.omega[0].embed(&v0, 0)).is_empty());
}

#[test]
fn truncated_cohomology() {
    let s = TensorSphere::build(&q(), QScalar::from_int(-1), QScalar::zero(), 6).unwrap();
    for seed in 1..=6 {
        let r = cohomology_dims(&s, 4, seed).unwrap();
        assert_eq!(r.dims, [1, 0, 1], "seed {seed}");
        assert!(r.d_squared_zero && r.tables_match_classical);
    }
}

#[test]
fn realizations_agree() {
    let pq = ParamSet::q_only();
    let q = pq.q();
    let re = REAlgebra::build(&standard_r(2, &pq), 5).unwrap();
    let s = OrbitAlgebra::sphere(&re, QScalar::from_int(-1), 5).unwrap();
    let c = matching_tensor_c(&s, &q).unwrap();
    let ts = TensorSphere::build(&q, c.clone(), QScalar::zero(), 5).unwrap();
    let x = cross_check_realizations(&s, &ts, 3).unwrap();
    assert!(x.passed(), "{x:?}");
    assert_eq!(x.scale, "1");
    // a different orbit constant rescales the generators
    let ts2 = TensorSphere::build(&q, c.mul(&QScalar::from_int(4)), QScalar::zero(), 5).unwrap();
    assert_eq!(cross_check_realizations(&s, &ts2, 2).unwrap().scale, "4");
    // the ℏ-deformed tensor sphere is not a realization of the undeformed one
    let bad = TensorSphere::build(&q, c, QScalar::one(), 5).unwrap();
    assert!(matches!(cross_check_realizations(&s, &bad, 3), Err(FormsError::NoIsomorphismFound(_))));
}

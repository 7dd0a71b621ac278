use std::sync::OnceLock;

use proptest::prelude::*;
use qre_core::coeff::{rat, Field, ParamSet, QScalar};
use qre_core::forms::spin_module;
use qre_core::hecke::standard_r;
use qre_core::ncalg::NCPoly;
use qre_core::realg::REAlgebra;

fn re() -> &'static REAlgebra<QScalar> {
    static RE: OnceLock<REAlgebra<QScalar>> = OnceLock::new();
    RE.get_or_init(|| REAlgebra::build(&standard_r(2, &ParamSet::q_only()), 6).unwrap())
}

// a + b·q + c·q⁻¹
fn laurent() -> impl Strategy<Value = QScalar> {
    (-4i64..=4, -4i64..=4, -4i64..=4).prop_map(|(a, b, c)| {
        let q = ParamSet::q_only().q();
        QScalar::from_int(a).add(&q.mul(&QScalar::from_int(b))).add(&q.inv().unwrap().mul(&QScalar::from_int(c)))
    })
}

// small polynomial in l11, l12, l21, l22 of degree ≤ 2
fn re_poly() -> impl Strategy<Value = NCPoly<QScalar>> {
    prop::collection::vec((prop::collection::vec(0usize..4, 0..=2), -3i64..=3), 1..4).prop_map(|terms| {
        let a = re();
        let mut f = NCPoly::zero();
        for (letters, c) in terms {
            let w = letters.iter().fold(NCPoly::one(), |acc, &i| acc.mul(&a.gen(i / 2, i % 2)));
            f = f.add(&w.scale(&QScalar::from_int(c)));
        }
        f
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn scalar_field_axioms(x in laurent(), y in laurent(), z in laurent()) {
        prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        prop_assert!(x.sub(&x).is_zero());
        if !x.is_zero() {
            prop_assert!(x.mul(&x.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn classical_limit_is_a_homomorphism(x in laurent(), y in laurent()) {
        let at1 = |s: &QScalar| s.classical_limit(&[]).unwrap();
        prop_assert_eq!(at1(&x.mul(&y)), at1(&x) * at1(&y));
        prop_assert_eq!(at1(&x.add(&y)), at1(&x) + at1(&y));
    }

    #[test]
    fn reduction_is_a_linear_projection(f in re_poly(), g in re_poly(), c in laurent()) {
        let sys = re().system();
        let rf = sys.reduce(&f);
        prop_assert_eq!(sys.reduce(&rf), rf.clone());
        let lhs = sys.reduce(&f.add(&g.scale(&c)));
        prop_assert_eq!(lhs, rf.add(&sys.reduce(&g).scale(&c)));
    }

    #[test]
    fn reduction_respects_products(f in re_poly(), g in re_poly()) {
        let sys = re().system();
        let direct = sys.reduce(&f.mul(&g));
        prop_assert_eq!(direct, sys.reduce(&sys.reduce(&f).mul(&sys.reduce(&g))));
    }

    #[test]
    fn spin_modules_at_rational_q(j2 in 0u32..5, n in 2i64..7, d in 1i64..4) {
        let q = QScalar::from_rational(rat(n, d));
        let rep = spin_module(j2, &q);
        prop_assert_eq!(rep.dim(), j2 as usize + 1);
        let r = rep.check_relations();
        prop_assert!(r.k_e && r.k_f && r.bracket && r.k_inverse);
    }
}

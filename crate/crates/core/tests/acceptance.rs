//! Acceptance suite: one line per criterion.
//!
//! Each criterion is run as stated. Where a statement is false as written,
//! the line reports FAIL with the verified correction, and the expected
//! outcome below pins that finding so a regression in either direction
//! still breaks the build.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use num_rational::BigRational;
use qre_core::coeff::{rat, Field, ParamSet, QScalar};
use qre_core::forms::{self, TensorSphere};
use qre_core::hecke::{check_braid, check_hecke, standard_r, standard_r_with, HeckeSymmetry};
use qre_core::ncalg::NCPoly;
use qre_core::realg::{central_witness, standard_shift_check, REAlgebra};
use qre_core::rtt::{Coaction, CoactionLaw, RTTAlgebra};
use qre_core::sphere::{classical_leibniz_check, classical_sphere, projectors, quotient_module_dims, OrbitAlgebra, Roots};

struct Outcome {
    pass: bool,
    detail: String,
}

fn ok(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn q2() -> ParamSet {
    ParamSet::q_only()
}

fn re2(degree: u32) -> REAlgebra<QScalar> {
    REAlgebra::build(&standard_r(2, &q2()), degree).unwrap()
}

fn sphere() -> OrbitAlgebra<QScalar> {
    OrbitAlgebra::sphere(&re2(6), QScalar::from_int(-1), 6).unwrap()
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn c1() -> Outcome {
    let p = q2();
    let mut good = true;
    let mut notes = Vec::new();
    for n in [2, 3] {
        let r = standard_r(n, &p);
        let braid = check_braid(r.matrix(), n).holds;
        let hecke = check_hecke(r.matrix(), &p.q()).holds;
        let rank = r.rank().unwrap();
        good &= braid && hecke && rank == n;
        notes.push(format!("n={n}: braid {braid}, Hecke {hecke}, rank {rank}"));
    }
    let pm = standard_r(2, &p).poincare_minus(3).unwrap();
    good &= pm == vec![1, 2, 1, 0];
    ok(good, format!("{}; P₋ coefficients {:?}", notes.join("; "), pm))
}

fn c2() -> Outcome {
    let f = re2(6).check_flatness(5).unwrap();
    let expected: Vec<usize> = (0..=5).map(|d| binom(d + 3, 3)).collect();
    ok(f.dims == expected, format!("graded dims {:?}", f.dims))
}

fn c3() -> Outcome {
    let a = re2(4);
    let d = a.quantum_trace_matrix().unwrap();
    let central = central_witness(a.system(), &a.trace_with(&d.diagonal)).is_none();
    let plain = central_witness(a.system(), &a.trace_with(&[QScalar::one(), QScalar::one()])).is_some();
    let shown: Vec<String> = d.diagonal.iter().map(|x| x.to_string()).collect();
    ok(central && plain, format!("D = diag({}) unique up to scale, central {central}; D = id not central {plain}", shown.join(", ")))
}

fn c4() -> Outcome {
    let a = re2(4);
    let ch = a.ch_coefficients(2).unwrap();
    let zero = a.ch_residual(&ch).unwrap().is_zero();
    let at1 = |f: &NCPoly<QScalar>| f.map_coeffs(|c| c.classical_limit(&[]).unwrap());
    let (l11, l12, l21, l22) = (a.gen(0, 0), a.gen(0, 1), a.gen(1, 0), a.gen(1, 1));
    let tr = at1(&ch.sigma[1]) == at1(&l11.add(&l22));
    let det = at1(&ch.sigma[2]) == at1(&a.system().reduce(&l11.mul(&l22).sub(&l12.mul(&l21))));
    ok(
        ch.central && zero && tr && det,
        format!("σ central {}, residual zero {zero}, q=1 trace {tr}, determinant {det}", ch.central),
    )
}

fn c5() -> Outcome {
    let s = standard_shift_check(2).unwrap();
    ok(s.holds, "free-algebra identity with ℏ = h(q − q⁻¹), symbolic h")
}

fn c6() -> Outcome {
    let r = standard_r(2, &q2());
    let t = RTTAlgebra::build(&r, 4).unwrap();
    let re = REAlgebra::build(&r, 4).unwrap();
    let d = Coaction::new(&t, &re, CoactionLaw::Adjoint, 4).unwrap();
    let rel = d.check_preserves_ideal(&re);
    let k2 = d.check_power_equivariance(&re, 2).unwrap().holds;
    let k3 = d.check_power_equivariance(&re, 3).unwrap().holds;
    ok(rel.holds && k2 && k3, format!("{} relations map to 0; L², L³ equivariant {k2}/{k3}", rel.checked))
}

fn c7() -> Outcome {
    let flat = sphere().check_flatness(4).unwrap();
    let p = ParamSet::new(&["h"]);
    let reh = REAlgebra::build_shifted(&standard_r(2, &p), p.var("h"), 5).unwrap();
    let sh = OrbitAlgebra::sphere(&reh, QScalar::from_int(-1), 5).unwrap().check_flatness(4).unwrap();
    ok(flat.passed() && sh.passed(), format!("ℏ=0 {:?}, symbolic ℏ {:?}", flat.dims, sh.dims))
}

fn c8() -> Outcome {
    let s = sphere();
    let Ok(Roots::Base(n1, n2)) = s.roots() else { return ok(false, "roots not rational") };
    let lb = projectors(s.l(), &n1, &n2).unwrap();
    let r = &lb.report;
    let structural = r.p1_idempotent.holds && r.p2_idempotent.holds && r.sum_is_identity.holds && r.orthogonal.holds;
    let root = |nu: &QScalar| quotient_module_dims(s.l(), nu, 3, 1).unwrap().iter().all(|&d| d > 0);
    let non_root = quotient_module_dims(s.l(), &QScalar::from_int(3), 3, 1).unwrap().iter().all(|&d| d == 0);
    let modules = root(&n1) && root(&n2) && non_root;
    // as stated: ν₁P₁ + ν₂P₂ = L
    let stated = r.spectral_same_labels.holds;
    ok(
        structural && modules && stated,
        format!(
            "P₁² = P₁, P₂² = P₂, P₁ + P₂ = id, P₁P₂ = 0: {structural}; M/M_ν nonzero at ν = {n1}, {n2} and zero at ν = 3: {modules}; \
             ν₁P₁ + ν₂P₂ = L as stated: {stated} (it equals a·id − L); ν₂P₁ + ν₁P₂ = L: {}",
            r.spectral.holds
        ),
    )
}

fn c9() -> Outcome {
    let s = sphere();
    let on_sphere = s.verify_ch_plus().unwrap();
    let coeffs = s.ch_plus_coefficients().unwrap().unwrap();
    let b = s.b().clone();
    let orbit = OrbitAlgebra::orbit(&re2(6), QScalar::from_int(2), QScalar::from_int(-3), 6).unwrap();
    let generic = orbit.verify_ch_plus().unwrap();
    let one = rat(1, 1);
    let r1 = HeckeSymmetry::new(standard_r_with(2, one.clone()), one).unwrap();
    let cl = OrbitAlgebra::orbit(&REAlgebra::<BigRational>::build(&r1, 6).unwrap(), rat(2, 1), rat(-3, 1), 6).unwrap();
    let classical = cl.verify_ch_plus().unwrap();
    let stated = generic.printed.holds && on_sphere.printed.holds && classical.printed.holds;
    let corrected = generic.corrected.holds
        && on_sphere.corrected.holds
        && classical.corrected.holds
        && coeffs == [QScalar::zero(), b.clone(), QScalar::zero()];
    ok(
        stated,
        format!(
            "printed cubic reduces to zero: a≠0 {}, sphere {}, q=1 {}; the form that holds is \
             (L₊ − a s)(L₊² − a L₊ + b) = 0 with unit P₊ (b → −b), i.e. L₊³ + bL₊ = 0 on the sphere (b = {b}), q-independent: {corrected}",
            generic.printed.holds, on_sphere.printed.holds, classical.printed.holds
        ),
    )
}

fn c10() -> Outcome {
    let s = classical_sphere(rat(-1, 1), 4).unwrap();
    let r = classical_leibniz_check(&s).unwrap();
    ok(r.scalar.is_some(), format!("L₊ = λ·P₊(L⊗1 + 1⊗L)P₊ with λ = {}", r.scalar.as_deref().unwrap_or("none")))
}

fn c11() -> Outcome {
    let q = q2().q();
    let d = forms::decompose_tensor(2, 2, &q).unwrap();
    let spins: Vec<u32> = d.components.iter().map(|c| c.j2 / 2).collect();
    let dec = d.report.passed() && spins == [0, 1, 2];
    let ts = TensorSphere::build(&q, QScalar::from_int(-1), QScalar::zero(), 6).unwrap();
    let mut dims = Vec::new();
    let mut tables = true;
    for seed in 1..=5 {
        let r = forms::cohomology_dims(&ts, 4, seed).unwrap();
        tables &= r.tables_match_classical && r.d_squared_zero;
        dims.push(r.dims);
    }
    let coh = dims.iter().all(|d| *d == [1, 0, 1]);
    ok(dec && tables && coh, format!("spins {spins:?}; tables match q=1 {tables}; H dims over 5 draws {:?}", dims[0]))
}

fn c12() -> Outcome {
    let q = q2().q();
    let re = REAlgebra::build(&standard_r(2, &q2()), 5).unwrap();
    let s = OrbitAlgebra::sphere(&re, QScalar::from_int(-1), 5).unwrap();
    let c = forms::matching_tensor_c(&s, &q).unwrap();
    let ts = TensorSphere::build(&q, c.clone(), QScalar::zero(), 5).unwrap();
    let x = forms::cross_check_realizations(&s, &ts, 3).unwrap();
    ok(
        x.passed(),
        format!("x ↦ ({}), tensor c = {c}, onto {}, tables agree {}", x.images.join(", "), x.surjective, x.tables_agree),
    )
}

fn main() -> ExitCode {
    type Criterion = (u32, &'static str, fn() -> Outcome, bool);
    // (number, title, run, expected outcome as stated)
    let criteria: [Criterion; 12] = [
        (1, "Hecke suite", c1, true),
        (2, "RE flatness", c2, true),
        (3, "quantum trace", c3, true),
        (4, "Cayley–Hamilton", c4, true),
        (5, "shift identity", c5, true),
        (6, "coaction", c6, true),
        (7, "sphere quotient flatness", c7, true),
        (8, "line bundles", c8, false),
        (9, "extension CH", c9, false),
        (10, "classical Leibniz equivalence", c10, true),
        (11, "forms and cohomology", c11, true),
        (12, "cross-realization", c12, true),
    ];
    let mut unexpected = 0;
    for (n, title, run, expected) in criteria {
        let out = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| ok(false, "panicked"));
        let tag = if out.pass { "PASS" } else { "FAIL" };
        let note = if out.pass == expected { "" } else { " [UNEXPECTED]" };
        if out.pass != expected {
            unexpected += 1;
        }
        println!("criterion {n:>2} {tag}{note}: {title} — {}", out.detail);
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use qre_bench::standard;
use qre_core::coeff::{Field, ParamSet, QScalar};
use qre_core::forms::{cohomology_dims, decompose_tensor, TensorSphere};
use qre_core::ncalg::NCPoly;
use qre_core::realg::REAlgebra;
use qre_core::sphere::OrbitAlgebra;

fn completion(c: &mut Criterion) {
    let r = standard(2);
    c.bench_function("re_complete_n2_d5", |b| b.iter(|| REAlgebra::build(black_box(&r), 5).unwrap()));
    c.bench_function("re_flatness_n2_d5", |b| {
        b.iter(|| REAlgebra::build(&r, 5).unwrap().check_flatness(5).unwrap())
    });
}

fn reduction(c: &mut Criterion) {
    let re = REAlgebra::build(&standard(2), 6).unwrap();
    let sys = re.system().clone();
    let g = sys.gens();
    // a product of degree 6 in reverse order
    let word = (0..6).rev().fold(NCPoly::<QScalar>::one(), |acc, i| acc.mul(&g.gen(i % 4)));
    c.bench_function("reduce_degree6_word", |b| b.iter(|| sys.reduce(black_box(&word))));
}

fn sphere(c: &mut Criterion) {
    let re = REAlgebra::build(&standard(2), 6).unwrap();
    c.bench_function("sphere_ch_plus", |b| {
        b.iter(|| {
            let s = OrbitAlgebra::sphere(&re, QScalar::from_int(-1), 6).unwrap();
            s.verify_ch_plus().unwrap()
        })
    });
}

fn forms(c: &mut Criterion) {
    let q = ParamSet::q_only().q();
    c.bench_function("decompose_spin1_spin1", |b| b.iter(|| decompose_tensor(2, 2, black_box(&q)).unwrap()));
    let ts = TensorSphere::build(&q, QScalar::from_int(-1), QScalar::zero(), 6).unwrap();
    let mut g = c.benchmark_group("cohomology");
    g.sample_size(10);
    g.bench_function("level4", |b| b.iter(|| cohomology_dims(&ts, 4, 1).unwrap()));
    g.finish();
}

criterion_group!(benches, completion, reduction, sphere, forms);
criterion_main!(benches);

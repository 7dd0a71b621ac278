use num_rational::BigRational;
use qre_core::coeff::{rat, Field, ParamSet, QScalar};
use qre_core::hecke::{check_braid, check_hecke, flip, standard_r, standard_r_with, HeckeSymmetry};
use qre_core::linalg::Matrix;

fn at_one(m: &Matrix<QScalar>) -> Matrix<BigRational> {
    m.map(|x| x.classical_limit(&[]).unwrap())
}

/// Permutation operator of V^{⊗k} sending slot t to slot perm[t].
fn perm_matrix(n: usize, perm: &[usize]) -> Matrix<BigRational> {
    let k = perm.len();
    let dim = n.pow(k as u32);
    let digits = |mut x: usize| {
        let mut d = vec![0; k];
        for t in (0..k).rev() {
            d[t] = x % n;
            x /= n;
        }
        d
    };
    Matrix::from_fn(dim, dim, |a, b| {
        let (da, db) = (digits(a), digits(b));
        if (0..k).all(|t| da[perm[t]] == db[t]) {
            rat(1, 1)
        } else {
            rat(0, 1)
        }
    })
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..k {
            let mut v = p.clone();
            v.insert(pos, k - 1);
            out.push(v);
        }
    }
    out
}

fn sign(p: &[usize]) -> i64 {
    let mut s = 1;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                s = -s;
            }
        }
    }
    s
}

#[test]
fn standard_r_passes_braid_and_hecke() {
    let p = ParamSet::q_only();
    for n in [2, 3] {
        let r = standard_r(n, &p);
        assert!(check_braid(r.matrix(), n).holds);
        assert!(check_hecke(r.matrix(), &p.q()).holds);
    }
}

#[test]
fn classical_limit_is_flip() {
    let p = ParamSet::q_only();
    assert_eq!(at_one(standard_r(2, &p).matrix()), flip(2));
}

#[test]
fn second_symmetrizer_is_eigenprojector() {
    let p = ParamSet::q_only();
    let r = standard_r(2, &p);
    let q = p.q();
    let expected = r
        .matrix()
        .add(&Matrix::identity(4).scale(&q.inv().unwrap()))
        .scale(&q.add(&q.inv().unwrap()).inv().unwrap());
    let s2 = r.symmetrizer(2).unwrap();
    assert_eq!(s2, expected);
    assert_eq!(s2.rank(), 3);
    let a2 = r.antisymmetrizer(2).unwrap();
    assert!(s2.mul(&a2).is_zero());
    assert_eq!(s2.add(&a2), Matrix::identity(4));
    let half = rat(1, 2);
    let classical = flip::<BigRational>(2).add(&Matrix::identity(4)).scale(&half);
    assert_eq!(at_one(&s2), classical);
}

#[test]
fn symmetrizer_ranks_and_commutation() {
    let p = ParamSet::q_only();
    let r = standard_r(2, &p);
    for k in 2..=4usize {
        let s = r.symmetrizer(k).unwrap();
        assert_eq!(s.rank(), k + 1, "rank of P+^({k})");
        assert_eq!(s.mul(&s), s);
        for i in 1..k {
            let ri = r.r_at(i, k);
            assert_eq!(s.mul(&ri), ri.mul(&s), "P+^({k}) commutes with R_{i}");
        }
    }
}

#[test]
fn projectors_reduce_to_young_symmetrizers() {
    let p = ParamSet::q_only();
    let r = standard_r(2, &p);
    let perms = permutations(3);
    let mut sym = Matrix::zeros(8, 8);
    let mut alt = Matrix::zeros(8, 8);
    for pm in &perms {
        let m = perm_matrix(2, pm);
        sym = sym.add(&m);
        alt = alt.add(&m.scale(&rat(sign(pm), 1)));
    }
    let sixth = rat(1, 6);
    assert_eq!(at_one(&r.symmetrizer(3).unwrap()), sym.scale(&sixth));
    assert_eq!(at_one(&r.antisymmetrizer(3).unwrap()), alt.scale(&sixth));
}

#[test]
fn poincare_series_and_rank() {
    let p = ParamSet::q_only();
    let r2 = standard_r(2, &p);
    assert_eq!(r2.poincare_minus(3).unwrap(), vec![1, 2, 1, 0]);
    assert_eq!(r2.rank().unwrap(), 2);
}

#[test]
fn poincare_series_n3() {
    let r3 = standard_r(3, &ParamSet::q_only());
    assert_eq!(r3.poincare_minus(4).unwrap(), vec![1, 3, 3, 1, 0]);
    assert_eq!(r3.rank().unwrap(), 3);
}

#[test]
fn non_hecke_matrix_rejected() {
    let f: Matrix<BigRational> = flip(2);
    assert!(HeckeSymmetry::new(f, rat(2, 1)).is_err());
    // specialization of a valid symmetry stays valid
    let r = standard_r_with(2, rat(3, 2));
    assert!(HeckeSymmetry::new(r, rat(3, 2)).is_ok());
}

//! Hecke symmetries in braid form, their q-symmetrizers and
//! antisymmetrizers, and the R-matrix text format.

use serde::Serialize;
use thiserror::Error;

use crate::coeff::{CoeffError, Field, ParamSet, QScalar};
use crate::linalg::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeckeError {
    #[error("q-(anti)symmetrizer of degree {0} is not idempotent")]
    NotIdempotent(usize),
    #[error("matrix of size {0} is not n^2 x n^2 for any n >= 2")]
    BadShape(usize),
    #[error("braid relation fails at entry {0:?}")]
    NotBraid((usize, usize)),
    #[error("Hecke condition fails at entry {0:?}")]
    NotHecke((usize, usize)),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// Outcome of an exact matrix identity check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub holds: bool,
    /// First differing entry (row, col) when the identity fails.
    pub witness: Option<(usize, usize)>,
}

impl IdentityCheck {
    fn of<K: Field>(diff: &Matrix<K>) -> Self {
        let witness = diff.first_nonzero();
        IdentityCheck { holds: witness.is_none(), witness }
    }
}

/// A braid-form R-matrix on V⊗V, basis index `(i, j) ↦ i·n + j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeSymmetry<K: Field = QScalar> {
    n: usize,
    matrix: Matrix<K>,
    q: K,
    braid: bool,
    hecke: bool,
}

impl<K: Field> HeckeSymmetry<K> {
    /// Validates `matrix` against the braid and Hecke conditions.
    pub fn new(matrix: Matrix<K>, q: K) -> Result<Self, HeckeError> {
        let size = matrix.rows();
        let n = (2..=size).find(|n| n * n == size).ok_or(HeckeError::BadShape(size))?;
        if matrix.cols() != size {
            return Err(HeckeError::BadShape(size));
        }
        let braid = check_braid(&matrix, n);
        if let Some(w) = braid.witness {
            return Err(HeckeError::NotBraid(w));
        }
        let hecke = check_hecke(&matrix, &q);
        if let Some(w) = hecke.witness {
            return Err(HeckeError::NotHecke(w));
        }
        Ok(HeckeSymmetry { n, matrix, q, braid: true, hecke: true })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &Matrix<K> {
        &self.matrix
    }

    pub fn q(&self) -> &K {
        &self.q
    }

    pub fn is_braid(&self) -> bool {
        self.braid
    }

    pub fn is_hecke(&self) -> bool {
        self.hecke
    }

    /// `R_i = id^{⊗(i−1)} ⊗ R ⊗ id^{⊗(k−i−1)}` on `V^{⊗k}`, `1 ≤ i < k`.
    pub fn r_at(&self, i: usize, k: usize) -> Matrix<K> {
        r_at(&self.matrix, self.n, i, k)
    }

    /// Applies a coefficient map (e.g. specialization of q) and revalidates.
    pub fn map<L: Field>(&self, f: impl Fn(&K) -> L) -> Result<HeckeSymmetry<L>, HeckeError> {
        HeckeSymmetry::new(self.matrix.map(&f), f(&self.q))
    }

    /// q-symmetrizer on `V^{⊗k}`.
    pub fn symmetrizer(&self, k: usize) -> Result<Matrix<K>, HeckeError> {
        self.projector_family(k, true)
    }

    /// q-antisymmetrizer on `V^{⊗k}` (zero beyond the rank).
    pub fn antisymmetrizer(&self, k: usize) -> Result<Matrix<K>, HeckeError> {
        self.projector_family(k, false)
    }

    fn projector_family(&self, k: usize, plus: bool) -> Result<Matrix<K>, HeckeError> {
        assert!(k >= 1);
        let q = &self.q;
        let qi = q.inv()?;
        let mut p = Matrix::identity(self.n);
        for m in 2..=k {
            let dim = self.n.pow(m as u32);
            let prev = p.kron(&Matrix::identity(self.n));
            let r = self.r_at(m - 1, m);
            let qn = q_number_of(q, (m - 1) as u32)?;
            // q^{∓(m−1)} id ± (m−1)_q R_{m−1}
            let step = if plus {
                Matrix::identity(dim).scale(&qi.pow((m - 1) as u32)).add(&r.scale(&qn))
            } else {
                Matrix::identity(dim).scale(&q.pow((m - 1) as u32)).sub(&r.scale(&qn))
            };
            let raw = prev.mul(&step).mul(&prev);
            p = rescale_idempotent(&raw).ok_or(HeckeError::NotIdempotent(m))?;
        }
        Ok(p)
    }

    /// Ranks of the antisymmetrizers for `k = 0..=kmax`.
    pub fn poincare_minus(&self, kmax: usize) -> Result<Vec<usize>, HeckeError> {
        let mut out = vec![1];
        for k in 1..=kmax {
            if out.last() == Some(&0) {
                out.push(0);
                continue;
            }
            out.push(self.antisymmetrizer(k)?.rank());
        }
        Ok(out)
    }

    /// Largest `k` with a nonzero antisymmetrizer.
    pub fn rank(&self) -> Result<usize, HeckeError> {
        let ranks = self.poincare_minus(self.n + 2)?;
        Ok(ranks.iter().rposition(|&r| r > 0).unwrap_or(0))
    }
}

fn q_number_of<K: Field>(q: &K, n: u32) -> Result<K, CoeffError> {
    let qi = q.inv()?;
    let mut acc = K::zero();
    for k in 0..n {
        let e = n as i64 - 1 - 2 * k as i64;
        acc = acc.add(&if e >= 0 { q.pow(e as u32) } else { qi.pow((-e) as u32) });
    }
    Ok(acc)
}

/// Rescales `m` so that it becomes idempotent; zero stays zero.
fn rescale_idempotent<K: Field>(m: &Matrix<K>) -> Option<Matrix<K>> {
    let Some((i, j)) = m.first_nonzero() else { return Some(m.clone()) };
    let sq = m.mul(m);
    let lambda = sq.get(i, j).div(m.get(i, j)).ok()?;
    let p = m.scale(&lambda.inv().ok()?);
    (p.mul(&p) == p).then_some(p)
}

pub(crate) fn r_at<K: Field>(r: &Matrix<K>, n: usize, i: usize, k: usize) -> Matrix<K> {
    assert!(i >= 1 && i < k);
    let left = Matrix::identity(n.pow((i - 1) as u32));
    let right = Matrix::identity(n.pow((k - i - 1) as u32));
    left.kron(r).kron(&right)
}

/// Braid relation `R₁R₂R₁ = R₂R₁R₂` on `V^{⊗3}`.
pub fn check_braid<K: Field>(r: &Matrix<K>, n: usize) -> IdentityCheck {
    let r1 = r_at(r, n, 1, 3);
    let r2 = r_at(r, n, 2, 3);
    IdentityCheck::of(&r1.mul(&r2).mul(&r1).sub(&r2.mul(&r1).mul(&r2)))
}

/// Hecke condition `R² = id + (q − q⁻¹)R`.
pub fn check_hecke<K: Field>(r: &Matrix<K>, q: &K) -> IdentityCheck {
    let Ok(qi) = q.inv() else {
        return IdentityCheck { holds: false, witness: Some((0, 0)) };
    };
    let rhs = Matrix::identity(r.rows()).add(&r.scale(&q.sub(&qi)));
    IdentityCheck::of(&r.mul(r).sub(&rhs))
}

/// The standard braid-form symmetry of U_q(sl(n)) over an arbitrary `q`.
pub fn standard_r_with<K: Field>(n: usize, q: K) -> Matrix<K> {
    assert!(n >= 2);
    let qi = q.inv().expect("q must be invertible");
    let diff = q.sub(&qi);
    let mut m = Matrix::zeros(n * n, n * n);
    for i in 0..n {
        m.set(i * n + i, i * n + i, q.clone());
        for j in i + 1..n {
            let (ij, ji) = (i * n + j, j * n + i);
            m.set(ij, ij, diff.clone());
            m.set(ij, ji, K::one());
            m.set(ji, ij, K::one());
        }
    }
    m
}

/// Standard symmetry with symbolic `q` from `params`.
pub fn standard_r(n: usize, params: &ParamSet) -> HeckeSymmetry<QScalar> {
    HeckeSymmetry::new(standard_r_with(n, params.q()), params.q()).expect("standard R is a Hecke symmetry")
}

/// The flip `v ⊗ w ↦ w ⊗ v`.
pub fn flip<K: Field>(n: usize) -> Matrix<K> {
    Matrix::from_fn(n * n, n * n, |a, b| if a == (b % n) * n + b / n { K::one() } else { K::zero() })
}

/// Writes the R-matrix text format (1-based indices, nonzero entries only).
pub fn write_rmatrix(r: &Matrix<QScalar>, params: &ParamSet) -> String {
    let size = r.rows();
    let n = (2..=size).find(|n| n * n == size).unwrap_or(size);
    let mut s = String::from("# R-matrix: entry lines 'i j k l = value' mean R[(i,j),(k,l)]\n");
    s.push_str(&format!("n = {n}\n"));
    let extra: Vec<&str> = params.names()[1..].iter().map(|s| s.as_str()).collect();
    if !extra.is_empty() {
        s.push_str(&format!("params = {}\n", extra.join(", ")));
    }
    for a in 0..size {
        for b in 0..size {
            let v = r.get(a, b);
            if !v.is_zero() {
                s.push_str(&format!("{} {} {} {} = {}\n", a / n + 1, a % n + 1, b / n + 1, b % n + 1, v));
            }
        }
    }
    s
}

/// Parses the R-matrix text format. Errors carry 1-based line/column.
pub fn parse_rmatrix(src: &str) -> Result<(Matrix<QScalar>, ParamSet), CoeffError> {
    let perr = |line, col, msg: &str| CoeffError::Parse { line, col, msg: msg.into() };
    let mut n: Option<usize> = None;
    let mut extra: Vec<String> = Vec::new();
    let mut entries = Vec::new();
    for (ln, raw) in src.lines().enumerate() {
        let line = ln + 1;
        let text = raw.split('#').next().unwrap_or("");
        if text.trim().is_empty() {
            continue;
        }
        let Some((lhs, rhs)) = text.split_once('=') else {
            return Err(perr(line, 1, "expected '='"));
        };
        let rhs_col = lhs.len() + 2;
        match lhs.trim() {
            "n" => {
                let v: usize = rhs.trim().parse().map_err(|_| perr(line, rhs_col, "n must be an integer >= 2"))?;
                if v < 2 {
                    return Err(perr(line, rhs_col, "n must be an integer >= 2"));
                }
                n = Some(v);
            }
            "params" => {
                extra = rhs.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
            }
            idx => {
                let parts: Vec<&str> = idx.split_whitespace().collect();
                if parts.len() != 4 {
                    return Err(perr(line, 1, "expected four indices 'i j k l'"));
                }
                let mut ix = [0usize; 4];
                for (t, p) in parts.iter().enumerate() {
                    let col = lhs.find(p).unwrap_or(0) + 1;
                    ix[t] = p.parse().map_err(|_| perr(line, col, "index must be a positive integer"))?;
                    if ix[t] == 0 {
                        return Err(perr(line, col, "indices are 1-based"));
                    }
                }
                entries.push((line, ix, rhs.to_string(), rhs_col));
            }
        }
    }
    let n = n.ok_or_else(|| perr(1, 1, "missing 'n = ...' line"))?;
    let extra_refs: Vec<&str> = extra.iter().map(|s| s.as_str()).collect();
    let params = ParamSet::new(&extra_refs);
    let mut m = Matrix::zeros(n * n, n * n);
    for (line, ix, rhs, col) in entries {
        if ix.iter().any(|&i| i > n) {
            return Err(perr(line, 1, "index exceeds n"));
        }
        let v = params.parse_at(&rhs, line, col)?;
        m.set((ix[0] - 1) * n + ix[1] - 1, (ix[2] - 1) * n + ix[3] - 1, v);
    }
    Ok((m, params))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;
    use num_rational::BigRational;

    #[test]
    fn flip_is_not_hecke_but_braids() {
        let f: Matrix<BigRational> = flip(2);
        assert!(check_braid(&f, 2).holds);
        assert!(!check_hecke(&f, &rat(3, 2)).holds);
    }

    #[test]
    fn perturbed_entry_yields_witness() {
        let p = ParamSet::q_only();
        let mut r = standard_r_with(2, p.q());
        let v = r.get(1, 2).add(&QScalar::one());
        r.set(1, 2, v);
        let h = check_hecke(&r, &p.q());
        assert!(!h.holds);
        assert!(h.witness.is_some());
        assert!(HeckeSymmetry::new(r, p.q()).is_err());
    }

    #[test]
    fn rmatrix_roundtrip_and_errors() {
        let p = ParamSet::q_only();
        let r = standard_r(2, &p);
        let text = write_rmatrix(r.matrix(), &p);
        let (back, _) = parse_rmatrix(&text).unwrap();
        assert_eq!(&back, r.matrix());
        match parse_rmatrix("n = 2\n1 1 1 1 = q +\n") {
            Err(CoeffError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(parse_rmatrix("n = 2\n1 1 3 1 = q\n").is_err());
    }
}

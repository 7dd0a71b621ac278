//! Exact dense matrices and sparse incremental row echelon forms.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::coeff::{CoeffError, Field};

/// Row-major dense matrix over a field.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Matrix<K> {
    rows: usize,
    cols: usize,
    data: Vec<K>,
}

impl<K: Field> Matrix<K> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![K::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { K::one() } else { K::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> K) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<K>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn diagonal(d: &[K]) -> Self {
        Self::from_fn(d.len(), d.len(), |i, j| if i == j { d[i].clone() } else { K::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &K {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: K) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[K] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<L: Field>(&self, f: impl Fn(&K) -> L) -> Matrix<L> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<L: Field, E>(&self, f: impl Fn(&K) -> Result<L, E>) -> Result<Matrix<L>, E> {
        let data = self.data.iter().map(f).collect::<Result<Vec<_>, E>>()?;
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// First nonzero entry, row-major.
    pub fn first_nonzero(&self) -> Option<(usize, usize)> {
        self.data.iter().position(|x| !x.is_zero()).map(|k| (k / self.cols, k % self.cols))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch");
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch");
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.sub(b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &K) -> Self {
        self.map(|x| x.mul(c))
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "shape mismatch");
        let (n, m, p) = (self.rows, self.cols, o.cols);
        let rows: Vec<Vec<K>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut out = vec![K::zero(); p];
                for k in 0..m {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    for (j, slot) in out.iter_mut().enumerate() {
                        let b = o.get(k, j);
                        if !b.is_zero() {
                            *slot = slot.add(&a.mul(b));
                        }
                    }
                }
                out
            })
            .collect();
        Matrix { rows: n, cols: p, data: rows.into_iter().flatten().collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::identity(self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Kronecker product `self ⊗ o`, with index `(i, k) ↦ i·o.rows + k`.
    pub fn kron(&self, o: &Self) -> Self {
        Self::from_fn(self.rows * o.rows, self.cols * o.cols, |r, c| {
            let a = self.get(r / o.rows, c / o.cols);
            if a.is_zero() {
                K::zero()
            } else {
                a.mul(o.get(r % o.rows, c % o.cols))
            }
        })
    }

    pub fn trace(&self) -> K {
        (0..self.rows.min(self.cols)).fold(K::zero(), |acc, i| acc.add(self.get(i, i)))
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            // cheapest nonzero pivot in this column
            let Some(p) = (r..m.rows)
                .filter(|&i| !m.get(i, c).is_zero())
                .min_by_key(|&i| m.get(i, c).weight())
            else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv().unwrap();
            for j in 0..m.cols {
                let v = m.get(r, j).mul(&inv);
                m.set(r, j, v);
            }
            let pivot_row: Vec<K> = m.row(r).to_vec();
            let cols = m.cols;
            m.data.par_chunks_mut(cols).enumerate().for_each(|(i, row)| {
                if i == r || row[c].is_zero() {
                    return;
                }
                let f = row[c].clone();
                for j in 0..cols {
                    if !pivot_row[j].is_zero() {
                        row[j] = row[j].sub(&f.mul(&pivot_row[j]));
                    }
                }
            });
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : self·x = 0}` as columns of the returned matrix.
    pub fn nullspace(&self) -> Self {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Self::zeros(self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            out.set(f, k, K::one());
            for (i, &p) in pivots.iter().enumerate() {
                out.set(p, k, r.get(i, f).neg());
            }
        }
        out
    }

    /// Basis of `{y : y·self = 0}` as rows of the returned matrix.
    pub fn left_nullspace(&self) -> Self {
        self.transpose().nullspace().transpose()
    }

    /// Basis of the column space, as columns.
    pub fn column_space(&self) -> Self {
        let (_, pivots) = self.rref();
        Self::from_fn(self.rows, pivots.len(), |i, k| self.get(i, pivots[k]).clone())
    }

    /// One solution of `self·x = b`, if any.
    pub fn solve(&self, b: &[K]) -> Option<Vec<K>> {
        assert_eq!(b.len(), self.rows);
        let aug = Self::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                b[i].clone()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![K::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r.get(i, self.cols).clone();
        }
        Some(x)
    }

    /// Inverse of a square matrix.
    pub fn inverse(&self) -> Result<Self, CoeffError> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                K::one()
            } else {
                K::zero()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(CoeffError::DivisionByZero);
        }
        Ok(Self::from_fn(n, n, |i, j| r.get(i, n + j).clone()))
    }
}

impl<K: Field> fmt::Display for Matrix<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Sparse row echelon form keyed by an ordered column type. Each stored
/// row is monic with its pivot at its largest key; new rows are reduced
/// against stored pivots from the top down.
#[derive(Clone, Debug)]
pub struct Echelon<C: Ord + Clone, K: Field> {
    pivots: BTreeMap<C, BTreeMap<C, K>>,
}

impl<C: Ord + Clone, K: Field> Default for Echelon<C, K> {
    fn default() -> Self {
        Self { pivots: BTreeMap::new() }
    }
}

impl<C: Ord + Clone, K: Field> Echelon<C, K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_pivot(&self, c: &C) -> bool {
        self.pivots.contains_key(c)
    }

    pub fn pivot_keys(&self) -> impl Iterator<Item = &C> {
        self.pivots.keys()
    }

    pub fn rows(&self) -> impl Iterator<Item = (&C, &BTreeMap<C, K>)> {
        self.pivots.iter()
    }

    /// Reduces `row` against the stored pivots (top-reduction of every term).
    pub fn reduce(&self, mut row: BTreeMap<C, K>) -> BTreeMap<C, K> {
        let mut bound: Option<C> = None;
        loop {
            // largest key below `bound` that is a pivot
            let next = match &bound {
                None => row.iter().rev().find(|(k, _)| self.pivots.contains_key(*k)),
                Some(b) => row.range(..b.clone()).rev().find(|(k, _)| self.pivots.contains_key(*k)),
            }
            .map(|(k, v)| (k.clone(), v.clone()));
            let Some((key, coef)) = next else { return row };
            let prow = &self.pivots[&key];
            for (k, v) in prow {
                let entry = row.entry(k.clone()).or_insert_with(K::zero);
                *entry = entry.sub(&coef.mul(v));
                if entry.is_zero() {
                    row.remove(k);
                }
            }
            bound = Some(key);
        }
    }

    /// Inserts a row; returns the monic reduced row if it was independent.
    pub fn insert(&mut self, row: BTreeMap<C, K>) -> Option<BTreeMap<C, K>> {
        let r = self.reduce(row);
        let (lead, lc) = r.iter().next_back().map(|(k, v)| (k.clone(), v.clone()))?;
        let inv = lc.inv().unwrap();
        let r: BTreeMap<C, K> = r.into_iter().map(|(k, v)| (k, v.mul(&inv))).collect();
        self.pivots.insert(lead, r.clone());
        Some(r)
    }

    /// Back-substitutes so that no row contains another row's pivot.
    pub fn interreduce(&mut self) {
        let keys: Vec<C> = self.pivots.keys().cloned().collect();
        for k in keys {
            let row = self.pivots.remove(&k).unwrap();
            let lc = row[&k].clone();
            let mut rest = row;
            rest.remove(&k);
            let mut reduced = self.reduce(rest);
            reduced.insert(k.clone(), lc);
            self.pivots.insert(k, reduced);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;
    use num_rational::BigRational;

    fn m(rows: &[&[i64]]) -> Matrix<BigRational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x, 1)).collect()).collect())
    }

    #[test]
    fn rank_nullspace_solve() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let n = a.nullspace();
        assert_eq!(n.cols(), 1);
        assert!(a.mul(&n).is_zero());
        let x = a.solve(&[rat(6, 1), rat(12, 1), rat(2, 1)]).unwrap();
        assert_eq!(a.mul(&Matrix::from_rows(x.into_iter().map(|v| vec![v]).collect())), m(&[&[6], &[12], &[2]]));
        assert!(a.solve(&[rat(1, 1), rat(0, 1), rat(0, 1)]).is_none());
        let l = a.left_nullspace();
        assert!(l.mul(&a).is_zero());
    }

    #[test]
    fn inverse_and_kron() {
        let a = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(a.mul(&a.inverse().unwrap()), Matrix::identity(2));
        let k = a.kron(&Matrix::identity(2));
        assert_eq!(k.get(2, 0), &rat(1, 1));
        assert_eq!(k.get(2, 1), &rat(0, 1));
    }

    #[test]
    fn echelon_rank() {
        let mut e: Echelon<u32, BigRational> = Echelon::new();
        let row = |v: &[(u32, i64)]| v.iter().map(|&(k, c)| (k, rat(c, 1))).collect::<BTreeMap<_, _>>();
        assert!(e.insert(row(&[(0, 1), (1, 1)])).is_some());
        assert!(e.insert(row(&[(1, 2), (2, 1)])).is_some());
        assert!(e.insert(row(&[(0, 2), (1, 2)])).is_none());
        assert!(e.reduce(row(&[(0, -1), (2, 1), (1, 1)])).len() <= 2);
        assert_eq!(e.rank(), 2);
    }
}

use std::sync::Arc;

use rayon::prelude::*;

use crate::coeff::Field;
use crate::linalg::Matrix;

use super::{NCPoly, NcError, RewriteSystem};

/// Matrix with noncommutative entries, always kept in normal form over a
/// fixed ambient rewrite system.
#[derive(Clone, Debug)]
pub struct AlgMatrix<K: Field> {
    rows: usize,
    cols: usize,
    entries: Vec<NCPoly<K>>,
    ambient: Arc<RewriteSystem<K>>,
}

impl<K: Field> PartialEq for AlgMatrix<K> {
    fn eq(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.ambient, &o.ambient)
            && self.rows == o.rows
            && self.cols == o.cols
            && self.entries == o.entries
    }
}

impl<K: Field> AlgMatrix<K> {
    /// Builds from entries, reducing each one.
    pub fn new(ambient: &Arc<RewriteSystem<K>>, rows: usize, cols: usize, entries: Vec<NCPoly<K>>) -> Self {
        assert_eq!(entries.len(), rows * cols);
        let entries = entries.par_iter().map(|e| ambient.reduce(e)).collect();
        AlgMatrix { rows, cols, entries, ambient: ambient.clone() }
    }

    pub fn from_fn(
        ambient: &Arc<RewriteSystem<K>>,
        rows: usize,
        cols: usize,
        f: impl Fn(usize, usize) -> NCPoly<K>,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self::new(ambient, rows, cols, entries)
    }

    pub fn zeros(ambient: &Arc<RewriteSystem<K>>, rows: usize, cols: usize) -> Self {
        AlgMatrix { rows, cols, entries: vec![NCPoly::zero(); rows * cols], ambient: ambient.clone() }
    }

    pub fn identity(ambient: &Arc<RewriteSystem<K>>, n: usize) -> Self {
        Self::from_scalars(ambient, &Matrix::identity(n))
    }

    pub fn from_scalars(ambient: &Arc<RewriteSystem<K>>, m: &Matrix<K>) -> Self {
        Self::from_fn(ambient, m.rows(), m.cols(), |i, j| NCPoly::constant(m.get(i, j).clone()))
    }

    pub fn ambient(&self) -> &Arc<RewriteSystem<K>> {
        &self.ambient
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &NCPoly<K> {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[NCPoly<K>] {
        &self.entries
    }

    fn same_ambient(&self, o: &Self) -> Result<(), NcError> {
        if Arc::ptr_eq(&self.ambient, &o.ambient) {
            Ok(())
        } else {
            Err(NcError::AmbientMismatch)
        }
    }

    pub fn mul(&self, o: &Self) -> Result<Self, NcError> {
        self.same_ambient(o)?;
        if self.cols != o.rows {
            return Err(NcError::ShapeMismatch { left: (self.rows, self.cols), right: (o.rows, o.cols) });
        }
        let (n, m, p) = (self.rows, self.cols, o.cols);
        let entries = (0..n * p)
            .into_par_iter()
            .map(|idx| {
                let (i, j) = (idx / p, idx % p);
                let mut acc = NCPoly::zero();
                for k in 0..m {
                    let a = self.get(i, k);
                    let b = o.get(k, j);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(b));
                }
                self.ambient.reduce(&acc)
            })
            .collect();
        Ok(AlgMatrix { rows: n, cols: p, entries, ambient: self.ambient.clone() })
    }

    pub fn add(&self, o: &Self) -> Result<Self, NcError> {
        self.same_ambient(o)?;
        if (self.rows, self.cols) != (o.rows, o.cols) {
            return Err(NcError::ShapeMismatch { left: (self.rows, self.cols), right: (o.rows, o.cols) });
        }
        let entries = self.entries.iter().zip(&o.entries).map(|(a, b)| a.add(b)).collect();
        Ok(AlgMatrix { rows: self.rows, cols: self.cols, entries, ambient: self.ambient.clone() })
    }

    pub fn sub(&self, o: &Self) -> Result<Self, NcError> {
        self.add(&o.scale(&K::one().neg()))
    }

    pub fn scale(&self, c: &K) -> Self {
        AlgMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.scale(c)).collect(),
            ambient: self.ambient.clone(),
        }
    }

    /// `c · self` with `c` multiplied on the left of every entry.
    pub fn left_mul_poly(&self, c: &NCPoly<K>) -> Self {
        let entries = self.entries.par_iter().map(|e| self.ambient.reduce(&c.mul(e))).collect();
        AlgMatrix { rows: self.rows, cols: self.cols, entries, ambient: self.ambient.clone() }
    }

    pub fn pow(&self, k: u32) -> Result<Self, NcError> {
        let mut acc = Self::identity(&self.ambient, self.rows);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// `Σ coeffs[i] · M^i`, coefficients written on the left.
    pub fn mat_poly(&self, coeffs: &[NCPoly<K>]) -> Result<Self, NcError> {
        if self.rows != self.cols {
            return Err(NcError::ShapeMismatch { left: (self.rows, self.cols), right: (self.cols, self.rows) });
        }
        let mut acc = Self::zeros(&self.ambient, self.rows, self.cols);
        let mut power = Self::identity(&self.ambient, self.rows);
        for (i, c) in coeffs.iter().enumerate() {
            if i > 0 {
                power = power.mul(self)?;
            }
            acc = acc.add(&power.left_mul_poly(c))?;
        }
        Ok(acc)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// First nonzero entry, row-major: the usual failure witness.
    pub fn first_nonzero(&self) -> Option<(usize, usize)> {
        self.entries.iter().position(|e| !e.is_zero()).map(|k| (k / self.cols, k % self.cols))
    }

    /// `self ⊗ id_m`: entry `(a, b)` is `self[a/m][b/m]` when `a%m == b%m`.
    pub fn kron_identity(&self, m: usize) -> Self {
        let entries = (0..self.rows * m * self.cols * m)
            .map(|idx| {
                let (a, b) = (idx / (self.cols * m), idx % (self.cols * m));
                if a % m == b % m {
                    self.get(a / m, b / m).clone()
                } else {
                    NCPoly::zero()
                }
            })
            .collect();
        AlgMatrix { rows: self.rows * m, cols: self.cols * m, entries, ambient: self.ambient.clone() }
    }

    /// The same entries viewed in another (e.g. quotient) system.
    pub fn transfer(&self, to: &Arc<RewriteSystem<K>>) -> Self {
        Self::new(to, self.rows, self.cols, self.entries.clone())
    }

    /// Renders one entry with generator names.
    pub fn entry_string(&self, i: usize, j: usize) -> String {
        self.get(i, j).display(self.ambient.names()).to_string()
    }
}

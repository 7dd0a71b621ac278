//! Fixtures shared by the benches.

use qre_core::coeff::{ParamSet, QScalar};
use qre_core::hecke::{standard_r, HeckeSymmetry};

pub fn standard(n: usize) -> HeckeSymmetry<QScalar> {
    standard_r(n, &ParamSet::q_only())
}

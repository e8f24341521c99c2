//! Exact scalars and dense matrices over the Gaussian rationals.

mod mat;
mod scalar;

pub use mat::{rref_rows, solve, Mat, Rref};
pub use scalar::{parse_rational, GaussianRational};

use crate::error::Result;

pub fn mat_mul(a: &Mat, b: &Mat) -> Result<Mat> {
    a.checked_mul(b)
}

pub fn rref(a: &Mat) -> Rref {
    a.rref()
}

pub fn det(a: &Mat) -> Result<GaussianRational> {
    a.det()
}

pub fn inverse(a: &Mat) -> Result<Mat> {
    a.inverse()
}

pub fn transpose(a: &Mat) -> Mat {
    a.transpose()
}

pub fn conj_transpose(a: &Mat) -> Mat {
    a.conj_transpose()
}

pub fn anti_transpose(a: &Mat) -> Result<Mat> {
    a.anti_transpose()
}

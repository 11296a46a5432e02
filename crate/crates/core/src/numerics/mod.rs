//! Dense linear algebra: [`Matrix`], products and the symmetric eigensolver.

mod eigen;
mod matrix;

pub use eigen::{sym_eig, EigenResult, DEFAULT_EIG_TOL, SYMMETRY_TOL};
pub use matrix::{dot, matmul, Matrix};

/// Squared Euclidean distance.
#[inline]
pub fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

//! Dense kernels: matrix-vector products, the SPD solve behind the
//! feasibility projection, power-iteration operator norms and matrix I/O.

pub mod io;
mod linalg;
mod matrix;
mod random;

pub use linalg::{determinant, operator_norm, operator_norm_estimate, spd_solve, Cholesky, NormEstimate};
pub use matrix::{matvec, matvec_t, DenseMatrix};
pub use random::GaussianStream;

/// Defaults used wherever a norm feeds a constant.
pub const NORM_TOL: f64 = 1e-8;
pub const NORM_MAX_ITER: usize = 5000;

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

/// `y += s x`
pub fn axpy(s: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += s * xi;
    }
}

/// Index of the first non-finite entry.
pub fn first_nonfinite(a: &[f64]) -> Option<usize> {
    a.iter().position(|v| !v.is_finite())
}

pub fn ensure_finite(context: &'static str, a: &[f64]) -> crate::Result<()> {
    match first_nonfinite(a) {
        Some(index) => Err(crate::Error::Numerical { context, index }),
        None => Ok(()),
    }
}

pub(crate) fn check_len(context: &'static str, expected: usize, v: &[f64]) -> crate::Result<()> {
    if v.len() != expected {
        return Err(crate::Error::Dimension {
            context,
            expected,
            got: v.len(),
        });
    }
    Ok(())
}

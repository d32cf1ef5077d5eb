use super::{dot, matvec, matvec_t, norm, DenseMatrix};
use crate::error::{Error, Result};

/// Lower-triangular Cholesky factor `S = L Lᵀ`.
#[derive(Debug, Clone)]
pub struct Cholesky {
    n: usize,
    l: Vec<f64>,
}

impl Cholesky {
    /// Factors the lower triangle of `s`; fails on the first non-positive pivot.
    pub fn factor(s: &DenseMatrix) -> Result<Self> {
        let n = s.rows();
        if s.cols() != n {
            return Err(Error::Dimension {
                context: "Cholesky::factor",
                expected: n,
                got: s.cols(),
            });
        }
        let mut l = vec![0.0; n * n];
        for j in 0..n {
            let mut d = s.get(j, j);
            for k in 0..j {
                d -= l[j * n + k] * l[j * n + k];
            }
            // relative guard against pivots that are zero up to rounding
            if !(d > 1e-14 * s.get(j, j).abs().max(f64::MIN_POSITIVE)) {
                return Err(Error::SingularConstraint { row: j, pivot: d });
            }
            let d = d.sqrt();
            l[j * n + j] = d;
            for i in j + 1..n {
                let mut v = s.get(i, j);
                for k in 0..j {
                    v -= l[i * n + k] * l[j * n + k];
                }
                l[i * n + j] = v / d;
            }
        }
        Ok(Self { n, l })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve(&self, r: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        super::check_len("Cholesky::solve", n, r)?;
        let mut z = r.to_vec();
        for i in 0..n {
            let row = &self.l[i * n..i * n + i];
            z[i] = (z[i] - dot(row, &z[..i])) / self.l[i * n + i];
        }
        for i in (0..n).rev() {
            let mut v = z[i];
            for k in i + 1..n {
                v -= self.l[k * n + i] * z[k];
            }
            z[i] = v / self.l[i * n + i];
        }
        Ok(z)
    }
}

/// Solves `S ζ = r` for symmetric positive definite `S`.
pub fn spd_solve(s: &DenseMatrix, r: &[f64]) -> Result<Vec<f64>> {
    Cholesky::factor(s)?.solve(r)
}

#[derive(Debug, Clone)]
pub struct NormEstimate {
    pub value: f64,
    /// Unit right singular vector estimate; `‖M v‖ == value`.
    pub vector: Vec<f64>,
    pub iterations: usize,
}

/// Largest singular value by power iteration on `MᵀM`, started from the
/// normalized all-ones vector.
pub fn operator_norm_estimate(m: &DenseMatrix, tol: f64, max_iter: usize) -> Result<NormEstimate> {
    if !(tol > 0.0) {
        return Err(Error::config(format!("operator_norm: tol must be positive, got {tol}")));
    }
    if m.is_zero() {
        return Err(Error::config("operator_norm: matrix must be nonzero"));
    }
    let n = m.cols();
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut mv = matvec(m, &v)?;
    // all-ones can sit in the null space; fall back to coordinate vectors
    if norm(&mv) == 0.0 {
        let j = (0..n)
            .find(|&j| (0..m.rows()).any(|i| m.get(i, j) != 0.0))
            .expect("nonzero matrix has a nonzero column");
        v = vec![0.0; n];
        v[j] = 1.0;
        mv = matvec(m, &v)?;
    }
    let mut sigma = norm(&mv);
    for it in 1..=max_iter {
        let w = matvec_t(m, &mv)?;
        let wn = norm(&w);
        if wn == 0.0 {
            break;
        }
        v = w.into_iter().map(|x| x / wn).collect();
        mv = matvec(m, &v)?;
        let next = norm(&mv);
        let change = (next - sigma).abs();
        sigma = next;
        if change <= 1e-3 * tol * sigma {
            return Ok(NormEstimate {
                value: sigma,
                vector: v,
                iterations: it,
            });
        }
    }
    Err(Error::Estimation {
        iterations: max_iter,
        estimate: sigma,
        vector: v,
    })
}

pub fn operator_norm(m: &DenseMatrix, tol: f64, max_iter: usize) -> Result<f64> {
    operator_norm_estimate(m, tol, max_iter).map(|e| e.value)
}

/// Determinant via LU with partial pivoting.
pub fn determinant(m: &DenseMatrix) -> Result<f64> {
    let n = m.rows();
    if m.cols() != n {
        return Err(Error::Dimension {
            context: "determinant",
            expected: n,
            got: m.cols(),
        });
    }
    let mut a = m.data().to_vec();
    let mut det = 1.0;
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i * n + k].abs().total_cmp(&a[j * n + k].abs()))
            .unwrap_or(k);
        if a[p * n + k] == 0.0 {
            return Ok(0.0);
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            det = -det;
        }
        let pivot = a[k * n + k];
        det *= pivot;
        for i in k + 1..n {
            let f = a[i * n + k] / pivot;
            if f == 0.0 {
                continue;
            }
            for j in k..n {
                a[i * n + j] -= f * a[k * n + j];
            }
        }
    }
    Ok(det)
}

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{check_len, DenseMatrix, GaussianStream};
use crate::problem::MinimaxProblem;
use crate::prox::{ProxOperator, SmoothTerm};

/// Regularized regression with a joint linear constraint:
/// `min_x max_y (1/m)[−½‖y‖² − bᵀy + yᵀKx] + (λ/2)‖x‖²` s.t. `Ax + By + c = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinRegInstance {
    pub n: usize,
    pub m: usize,
    pub p: usize,
    /// Data rows, `m × n`.
    #[serde(rename = "K")]
    pub k: DenseMatrix,
    #[serde(rename = "A")]
    pub a: DenseMatrix,
    #[serde(rename = "B")]
    pub b_mat: DenseMatrix,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub lambda_reg: f64,
    pub seed: u64,
}

impl LinRegInstance {
    /// Gaussian `K`, `A`, `B` from `seed`, drawn in that order; `b = 0`,
    /// `c = 0`, `λ = 1/m`.
    pub fn generate(n: usize, m: usize, p: usize, seed: u64) -> Result<Self> {
        if n == 0 || m == 0 || p == 0 {
            return Err(Error::config("linreg dimensions must be positive"));
        }
        if p > n {
            return Err(Error::config(format!("need p <= n, got p = {p}, n = {n}")));
        }
        let mut rng = GaussianStream::new(seed);
        let k = rng.matrix(m, n);
        let a = rng.matrix(p, n);
        let b_mat = rng.matrix(p, m);
        Ok(Self {
            n,
            m,
            p,
            k,
            a,
            b_mat,
            b: vec![0.0; m],
            c: vec![0.0; p],
            lambda_reg: 1.0 / m as f64,
            seed,
        })
    }

    pub fn with_rhs(mut self, b: Vec<f64>, c: Vec<f64>) -> Result<Self> {
        check_len("b", self.m, &b)?;
        check_len("c", self.p, &c)?;
        self.b = b;
        self.c = c;
        Ok(self)
    }

    pub fn to_problem(&self) -> Result<MinimaxProblem> {
        let inv_m = 1.0 / self.m as f64;
        MinimaxProblem::new(
            SmoothTerm::ScaledSqNorm {
                coefficient: self.lambda_reg,
                dim: self.n,
            },
            ProxOperator::zero(self.n),
            SmoothTerm::Sum {
                terms: vec![
                    SmoothTerm::ScaledSqNorm {
                        coefficient: inv_m,
                        dim: self.m,
                    },
                    SmoothTerm::Linear {
                        b: self.b.iter().map(|v| v * inv_m).collect(),
                    },
                ],
            },
            ProxOperator::zero(self.m),
            self.k.transpose().scaled(inv_m),
            self.a.clone(),
            self.b_mat.clone(),
            self.c.clone(),
            inv_m,
        )
    }
}

pub fn make_linreg(n: usize, m: usize, p: usize, seed: u64) -> Result<(LinRegInstance, MinimaxProblem)> {
    let inst = LinRegInstance::generate(n, m, p, seed)?;
    let problem = inst.to_problem()?;
    Ok((inst, problem))
}

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::numerics::{check_len, GaussianStream};
use crate::problem::MinimaxProblem;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterateState {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub lambda: Vec<f64>,
    pub t: usize,
}

impl IterateState {
    pub fn zeros(p: &MinimaxProblem) -> Self {
        Self {
            x: vec![0.0; p.n()],
            y: vec![0.0; p.m()],
            lambda: vec![0.0; p.q()],
            t: 0,
        }
    }

    /// Standard-normal `x`, `y` from `seed`; `λ = 0`.
    pub fn random(p: &MinimaxProblem, seed: u64) -> Self {
        let mut rng = GaussianStream::new(seed);
        let x = rng.vector(p.n());
        let y = rng.vector(p.m());
        Self {
            x,
            y,
            lambda: vec![0.0; p.q()],
            t: 0,
        }
    }

    /// Supplied `x`, `y`; `λ` defaults to zero.
    pub fn new(p: &MinimaxProblem, x: Vec<f64>, y: Vec<f64>, lambda: Option<Vec<f64>>) -> Result<Self> {
        let lambda = lambda.unwrap_or_else(|| vec![0.0; p.q()]);
        let s = Self { x, y, lambda, t: 0 };
        s.check(p)?;
        Ok(s)
    }

    pub fn check(&self, p: &MinimaxProblem) -> Result<()> {
        check_len("x", p.n(), &self.x)?;
        check_len("y", p.m(), &self.y)?;
        check_len("lambda", p.q(), &self.lambda)
    }
}

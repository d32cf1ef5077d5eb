use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{best_recovery, RecoverySign};
use crate::error::{Error, Result};
use crate::numerics::{check_len, first_nonfinite, matvec, matvec_t, norm, DenseMatrix};
use crate::problem::{residuals, MinimaxProblem};
use crate::prox::{ConeSpec, ProxOperator, SmoothTerm};
use crate::solver::TraceRecord;

/// Generalized absolute value equation `Ax + B|x| = b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaveInstance {
    #[serde(rename = "A")]
    pub a: DenseMatrix,
    #[serde(rename = "B")]
    pub b: DenseMatrix,
    #[serde(rename = "b")]
    pub rhs: Vec<f64>,
}

impl GaveInstance {
    pub fn new(a: DenseMatrix, b: DenseMatrix, rhs: Vec<f64>) -> Result<Self> {
        if a.shape() != b.shape() {
            return Err(Error::config(format!(
                "A is {}x{} but B is {}x{}",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols()
            )));
        }
        check_len("b", a.rows(), &rhs)?;
        Ok(Self { a, b, rhs })
    }

    /// Equations.
    pub fn m(&self) -> usize {
        self.a.rows()
    }

    /// Unknowns.
    pub fn n(&self) -> usize {
        self.a.cols()
    }

    /// `‖Ax + B|x| − b‖`
    pub fn error(&self, x: &[f64]) -> Result<f64> {
        let abs: Vec<f64> = x.iter().map(|v| v.abs()).collect();
        let mut r = matvec(&self.a, x)?;
        for ((ri, bi), ci) in r.iter_mut().zip(matvec(&self.b, &abs)?).zip(&self.rhs) {
            *ri += bi - ci;
        }
        Ok(norm(&r))
    }
}

/// Minimax form over `x⁺ ≥ 0` against `(y, z)` with `z ≥ 0`, coupled by
/// `x⁺ − (B−A)ᵀy − z = 0`; the objective is `(b − (A+B)x⁺)ᵀy`.
pub fn gave_to_minimax(g: &GaveInstance) -> Result<MinimaxProblem> {
    let (m, n) = (g.m(), g.n());
    let sum = g.a.add(&g.b)?;
    let diff = g.b.sub(&g.a)?;
    let mut h = g.rhs.iter().map(|v| -v).collect::<Vec<_>>();
    h.extend(std::iter::repeat(0.0).take(n));
    MinimaxProblem::new(
        SmoothTerm::zero(n),
        ProxOperator::indicator(ConeSpec::NonnegOrthant { dim: n }),
        SmoothTerm::Linear { b: h },
        ProxOperator::Blocks {
            blocks: vec![
                ProxOperator::zero(m),
                ProxOperator::indicator(ConeSpec::NonnegOrthant { dim: n }),
            ],
        },
        sum.transpose().scaled(-1.0).hstack(&DenseMatrix::zeros(n, n))?,
        DenseMatrix::identity(n).scaled(-1.0),
        diff.transpose().hstack(&DenseMatrix::identity(n))?,
        vec![0.0; n],
        0.0,
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaveConfig {
    pub alpha_x: f64,
    pub alpha_y: f64,
    pub alpha_z: f64,
    #[serde(rename = "N")]
    pub inner_n: usize,
    #[serde(rename = "T")]
    pub outer_t: usize,
    /// Stop once the recovered error reaches this value.
    pub tol: Option<f64>,
    pub record_trace: bool,
}

impl Default for GaveConfig {
    fn default() -> Self {
        Self::uniform(0.01, 5, 100)
    }
}

impl GaveConfig {
    /// One step size for all three blocks.
    pub fn uniform(alpha: f64, inner_n: usize, outer_t: usize) -> Self {
        Self {
            alpha_x: alpha,
            alpha_y: alpha,
            alpha_z: alpha,
            inner_n,
            outer_t,
            tol: None,
            record_trace: true,
        }
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [("alpha_x", self.alpha_x), ("alpha_y", self.alpha_y), ("alpha_z", self.alpha_z)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::config(format!("{name} must be positive, got {v}")));
            }
        }
        if self.inner_n == 0 {
            return Err(Error::config("inner step count N must be at least 1"));
        }
        Ok(())
    }
}

/// Initial `(x⁺, y, z, λ)`; `x⁺ ∈ ℝⁿ`, `y ∈ ℝᵐ`, `z, λ ∈ ℝⁿ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaveStart {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub z: Vec<f64>,
    pub lambda: Vec<f64>,
}

impl GaveStart {
    pub fn zeros(g: &GaveInstance) -> Self {
        Self {
            x: vec![0.0; g.n()],
            y: vec![0.0; g.m()],
            z: vec![0.0; g.n()],
            lambda: vec![0.0; g.n()],
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GaveResult {
    /// Recovered solution.
    pub x: Vec<f64>,
    pub x_plus: Vec<f64>,
    pub y: Vec<f64>,
    pub z: Vec<f64>,
    pub lambda: Vec<f64>,
    /// `‖Ax + B|x| − b‖` at the recovered `x`.
    pub error: f64,
    pub sign: RecoverySign,
    pub iterations: usize,
    pub converged: bool,
    pub wall_time_s: f64,
    #[serde(skip)]
    pub trace: Vec<TraceRecord>,
}

impl GaveResult {
    /// `x⁻` implied by the reported recovery, `∓λ`.
    pub fn x_minus(&self) -> Vec<f64> {
        let s = -self.sign.factor();
        self.lambda.iter().map(|l| s * l).collect()
    }
}

/// The specialized GAVE loop: `N` ascent steps on `y` and projected ascent
/// on `z`, then projected steps on `x⁺` and `λ`, with the `λ` update using
/// the new `x⁺`.
pub fn run_gave(g: &GaveInstance, config: &GaveConfig, start: GaveStart) -> Result<GaveResult> {
    config.validate()?;
    let (m, n) = (g.m(), g.n());
    check_len("x", n, &start.x)?;
    check_len("y", m, &start.y)?;
    check_len("z", n, &start.z)?;
    check_len("lambda", n, &start.lambda)?;
    let p = gave_to_minimax(g)?;
    let sum = g.a.add(&g.b)?;
    let diff = g.b.sub(&g.a)?;
    let GaveStart {
        mut x,
        mut y,
        mut z,
        mut lambda,
    } = start;
    let clock = Instant::now();
    let mut trace = Vec::new();

    let observe = |t: usize, x: &[f64], y: &[f64], z: &[f64], lambda: &[f64], trace: &mut Vec<TraceRecord>| {
        let (rec_x, err, sign) = best_recovery(x, lambda, RecoverySign::Plus, |c| {
            g.error(c).unwrap_or(f64::INFINITY)
        });
        if config.record_trace {
            let mut yz = y.to_vec();
            yz.extend_from_slice(z);
            let r = residuals(&p, x, &yz, lambda, 1.0 / config.alpha_x, 1.0 / config.alpha_y)?;
            trace.push(TraceRecord {
                t,
                elapsed: clock.elapsed().as_secs_f64(),
                res_x: r.res_x,
                res_y: r.res_y,
                res_feas: r.res_feas,
                objective_metric: Some(err),
            });
        }
        Ok::<_, Error>((rec_x, err, sign))
    };

    let mut best = observe(0, &x, &y, &z, &lambda, &mut trace)?;
    let reached = |e: f64| config.tol.is_some_and(|tol| e <= tol);
    let mut converged = reached(best.1);
    let mut t = 0;
    while !converged && t < config.outer_t {
        let sx = matvec(&sum, &x)?;
        let dl = matvec(&diff, &lambda)?;
        let drift: Vec<f64> = g.rhs.iter().zip(&sx).zip(&dl).map(|((b, s), d)| b - s + d).collect();
        for _ in 0..config.inner_n {
            for (yi, d) in y.iter_mut().zip(&drift) {
                *yi += config.alpha_y * d;
            }
            for (zi, l) in z.iter_mut().zip(&lambda) {
                *zi = (*zi + config.alpha_z * l).max(0.0);
            }
        }
        if first_nonfinite(&y).is_some() || first_nonfinite(&z).is_some() {
            return Err(Error::Divergence {
                t: t + 1,
                hint: format!("y or z non-finite; alpha_y = {}, alpha_z = {}", config.alpha_y, config.alpha_z),
                trace,
            });
        }
        let sty = matvec_t(&sum, &y)?;
        for ((xi, s), l) in x.iter_mut().zip(&sty).zip(&lambda) {
            *xi = (*xi + config.alpha_x * (s + l)).max(0.0);
        }
        let dty = matvec_t(&diff, &y)?;
        for (((li, xi), d), zi) in lambda.iter_mut().zip(&x).zip(&dty).zip(&z) {
            *li += config.alpha_x * (xi - d - zi);
        }
        t += 1;
        if first_nonfinite(&x).is_some() || first_nonfinite(&lambda).is_some() {
            return Err(Error::Divergence {
                t,
                hint: format!("x or lambda non-finite; alpha_x = {}", config.alpha_x),
                trace,
            });
        }
        best = observe(t, &x, &y, &z, &lambda, &mut trace)?;
        if !best.1.is_finite() {
            trace.pop();
            return Err(Error::Divergence {
                t,
                hint: format!("error metric overflow; alpha_x = {}", config.alpha_x),
                trace,
            });
        }
        converged = reached(best.1);
    }
    let (rx, error, sign) = best;
    Ok(GaveResult {
        x: rx,
        x_plus: x,
        y,
        z,
        lambda,
        error,
        sign,
        iterations: t,
        converged,
        wall_time_s: clock.elapsed().as_secs_f64(),
        trace,
    })
}

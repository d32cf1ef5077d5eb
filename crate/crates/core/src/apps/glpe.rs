use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{best_recovery, RecoverySign};
use crate::error::{Error, Result};
use crate::numerics::{check_len, determinant, first_nonfinite, matvec, matvec_t, norm, DenseMatrix, GaussianStream};
use crate::problem::{residuals, MinimaxProblem};
use crate::prox::{ConeSpec, ProxOperator, SmoothTerm};
use crate::solver::TraceRecord;

/// Generalized linear projection equation `Ax + B·P_K(x) = b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlpeInstance {
    #[serde(rename = "A")]
    pub a: DenseMatrix,
    #[serde(rename = "B")]
    pub b: DenseMatrix,
    #[serde(rename = "b")]
    pub rhs: Vec<f64>,
    pub cone: ConeSpec,
}

impl GlpeInstance {
    pub fn new(a: DenseMatrix, b: DenseMatrix, rhs: Vec<f64>, cone: ConeSpec) -> Result<Self> {
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
        match cone {
            ConeSpec::NonnegOrthant { .. } | ConeSpec::SecondOrder { .. } | ConeSpec::L1Norm { .. } => {}
            ref other => {
                return Err(Error::config(format!(
                    "unsupported cone '{}' (expected nonneg_orthant, second_order or l1_norm)",
                    other.name()
                )))
            }
        }
        cone.validate()?;
        if cone.dim() != a.cols() {
            return Err(Error::Dimension {
                context: "cone",
                expected: a.cols(),
                got: cone.dim(),
            });
        }
        Ok(Self { a, b, rhs, cone })
    }

    pub fn m(&self) -> usize {
        self.a.rows()
    }

    pub fn n(&self) -> usize {
        self.a.cols()
    }

    pub fn with_cone(&self, cone: ConeSpec) -> Result<Self> {
        Self::new(self.a.clone(), self.b.clone(), self.rhs.clone(), cone)
    }

    /// `‖Ax + B·x_K − b‖`
    pub fn error(&self, x: &[f64], x_k: &[f64]) -> Result<f64> {
        let mut r = matvec(&self.a, x)?;
        for ((ri, bi), ci) in r.iter_mut().zip(matvec(&self.b, x_k)?).zip(&self.rhs) {
            *ri += bi - ci;
        }
        Ok(norm(&r))
    }
}

/// Minimax form over `x_K ∈ K` against `(y, z)` with `z ∈ K°`, coupled by
/// `Aᵀy + z = x_K`; the objective is `(b − (A+B)x_K)ᵀy`.
pub fn glpe_to_minimax(g: &GlpeInstance) -> Result<MinimaxProblem> {
    let (m, n) = (g.m(), g.n());
    let sum = g.a.add(&g.b)?;
    let mut h: Vec<f64> = g.rhs.iter().map(|v| -v).collect();
    h.extend(std::iter::repeat(0.0).take(n));
    MinimaxProblem::new(
        SmoothTerm::zero(n),
        ProxOperator::indicator(g.cone.clone()),
        SmoothTerm::Linear { b: h },
        ProxOperator::Blocks {
            blocks: vec![
                ProxOperator::zero(m),
                ProxOperator::PolarIndicator { cone: g.cone.clone() },
            ],
        },
        sum.transpose().scaled(-1.0).hstack(&DenseMatrix::zeros(n, n))?,
        DenseMatrix::identity(n).scaled(-1.0),
        g.a.transpose().hstack(&DenseMatrix::identity(n))?,
        vec![0.0; n],
        0.0,
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GlpeConfig {
    pub alpha_x: f64,
    pub alpha_y: f64,
    pub alpha_z: f64,
    #[serde(rename = "N")]
    pub inner_n: usize,
    #[serde(rename = "T")]
    pub outer_t: usize,
    /// Stop once `‖Ax + Bx_K − b‖` reaches this value.
    pub tol: Option<f64>,
    pub record_trace: bool,
}

impl Default for GlpeConfig {
    fn default() -> Self {
        Self::uniform(0.01, 5, 1000)
    }
}

impl GlpeConfig {
    pub fn uniform(alpha: f64, inner_n: usize, outer_t: usize) -> Self {
        Self {
            alpha_x: alpha,
            alpha_y: alpha,
            alpha_z: alpha,
            inner_n,
            outer_t,
            tol: Some(1e-14),
            record_trace: true,
        }
    }

    /// All steps `1/|det(A+B)|`, `N = 5`.
    pub fn det_preset(g: &GlpeInstance, outer_t: usize) -> Result<Self> {
        if g.m() != g.n() {
            return Err(Error::config(format!(
                "the determinant preset needs square A + B (got {}x{}); give explicit step sizes",
                g.m(),
                g.n()
            )));
        }
        let det = determinant(&g.a.add(&g.b)?)?;
        if !(det.abs() > 1e-12) {
            return Err(Error::config(format!(
                "A + B is singular (det = {det:e}); give explicit step sizes"
            )));
        }
        Ok(Self::uniform(1.0 / det.abs(), 5, outer_t))
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

/// Initial `(x_K, y, z, λ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlpeStart {
    pub x_k: Vec<f64>,
    pub y: Vec<f64>,
    pub z: Vec<f64>,
    pub lambda: Vec<f64>,
}

impl GlpeStart {
    pub fn zeros(g: &GlpeInstance) -> Self {
        Self {
            x_k: vec![0.0; g.n()],
            y: vec![0.0; g.m()],
            z: vec![0.0; g.n()],
            lambda: vec![0.0; g.n()],
        }
    }

    /// Standard-normal `x_K`, `y`, `z`; `λ = 0`.
    pub fn random(g: &GlpeInstance, seed: u64) -> Self {
        let mut rng = GaussianStream::new(seed);
        Self {
            x_k: rng.vector(g.n()),
            y: rng.vector(g.m()),
            z: rng.vector(g.n()),
            lambda: vec![0.0; g.n()],
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GlpeResult {
    /// Recovered solution `x_K + x_{K°}`.
    pub x: Vec<f64>,
    pub x_k: Vec<f64>,
    /// Recovered polar component.
    pub x_polar: Vec<f64>,
    pub y: Vec<f64>,
    pub z: Vec<f64>,
    pub lambda: Vec<f64>,
    pub error: f64,
    pub sign: RecoverySign,
    pub iterations: usize,
    pub converged: bool,
    pub wall_time_s: f64,
    #[serde(skip)]
    pub trace: Vec<TraceRecord>,
}

/// PGmsAD specialized to the GLPE minimax form, with separate steps for
/// the `y` and `z` blocks; the `λ` update uses the old `x_K`.
pub fn run_glpe(g: &GlpeInstance, config: &GlpeConfig, start: GlpeStart) -> Result<GlpeResult> {
    config.validate()?;
    let (m, n) = (g.m(), g.n());
    check_len("x_k", n, &start.x_k)?;
    check_len("y", m, &start.y)?;
    check_len("z", n, &start.z)?;
    check_len("lambda", n, &start.lambda)?;
    let p = glpe_to_minimax(g)?;
    let sum = g.a.add(&g.b)?;
    let GlpeStart {
        mut x_k,
        mut y,
        mut z,
        mut lambda,
    } = start;
    let clock = Instant::now();
    let mut trace = Vec::new();

    let observe = |t: usize, x_k: &[f64], y: &[f64], z: &[f64], lambda: &[f64], trace: &mut Vec<TraceRecord>| {
        let (x, err, sign) = best_recovery(x_k, lambda, RecoverySign::Minus, |c| {
            g.error(c, x_k).unwrap_or(f64::INFINITY)
        });
        if config.record_trace {
            let mut yz = y.to_vec();
            yz.extend_from_slice(z);
            let r = residuals(&p, x_k, &yz, lambda, 1.0 / config.alpha_x, 1.0 / config.alpha_y)?;
            trace.push(TraceRecord {
                t,
                elapsed: clock.elapsed().as_secs_f64(),
                res_x: r.res_x,
                res_y: r.res_y,
                res_feas: r.res_feas,
                objective_metric: Some(err),
            });
        }
        Ok::<_, Error>((x, err, sign))
    };

    let mut best = observe(0, &x_k, &y, &z, &lambda, &mut trace)?;
    let reached = |e: f64| config.tol.is_some_and(|tol| e <= tol);
    let mut converged = reached(best.1);
    let mut t = 0;
    while !converged && t < config.outer_t {
        let sx = matvec(&sum, &x_k)?;
        let al = matvec(&g.a, &lambda)?;
        let drift: Vec<f64> = g.rhs.iter().zip(&sx).zip(&al).map(|((b, s), a)| b - s + a).collect();
        for _ in 0..config.inner_n {
            for (yi, d) in y.iter_mut().zip(&drift) {
                *yi += config.alpha_y * d;
            }
            let step: Vec<f64> = z.iter().zip(&lambda).map(|(zi, l)| zi + config.alpha_z * l).collect();
            z = g.cone.project_polar(&step)?;
        }
        if first_nonfinite(&y).is_some() || first_nonfinite(&z).is_some() {
            return Err(Error::Divergence {
                t: t + 1,
                hint: format!("y or z non-finite; alpha_y = {}, alpha_z = {}", config.alpha_y, config.alpha_z),
                trace,
            });
        }
        let sty = matvec_t(&sum, &y)?;
        let step: Vec<f64> = x_k
            .iter()
            .zip(&sty)
            .zip(&lambda)
            .map(|((xi, s), l)| xi + config.alpha_x * (s + l))
            .collect();
        let x_next = g.cone.project(&step)?;
        let aty = matvec_t(&g.a, &y)?;
        for (((li, xi), a), zi) in lambda.iter_mut().zip(&x_k).zip(&aty).zip(&z) {
            *li -= config.alpha_x * (a + zi - xi);
        }
        x_k = x_next;
        t += 1;
        if first_nonfinite(&x_k).is_some() || first_nonfinite(&lambda).is_some() {
            return Err(Error::Divergence {
                t,
                hint: format!("x_K or lambda non-finite; alpha_x = {}", config.alpha_x),
                trace,
            });
        }
        best = observe(t, &x_k, &y, &z, &lambda, &mut trace)?;
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
    let (x, error, sign) = best;
    let x_polar = x.iter().zip(&x_k).map(|(a, b)| a - b).collect();
    Ok(GlpeResult {
        x,
        x_k,
        x_polar,
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

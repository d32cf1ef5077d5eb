use serde::{Deserialize, Serialize};

use super::pgmsad::{inner_ascent, outer_step, Recorder};
use super::{IterateState, TraceRecord};
use crate::error::{Error, Result};
use crate::numerics::{norm, sub};
use crate::problem::{residuals, MinimaxProblem};

/// Produces `y⁺` with `‖G^{Q,ψ}_1(x, y⁺, λ)‖ ≤ tol`, no farther from the
/// inner maximizer than `y_start`.
pub trait InnerSolver {
    fn solve(&mut self, p: &MinimaxProblem, x: &[f64], lambda: &[f64], y_start: &[f64], tol: f64)
        -> Result<Vec<f64>>;
}

/// `‖y − prox_ψ(y + ∇ᵧf(x, y, λ))‖`, the unit-scaled inner residual.
pub fn inner_residual(p: &MinimaxProblem, x: &[f64], y: &[f64], lambda: &[f64]) -> Result<f64> {
    let gy = p.grad_y(x, y, lambda)?;
    let z: Vec<f64> = y.iter().zip(&gy).map(|(a, g)| a + g).collect();
    Ok(norm(&sub(y, &p.psi.prox(1.0, &z)?)))
}

/// Projected gradient ascent run until the inner residual meets the
/// tolerance or `max_steps` is spent.
#[derive(Debug, Clone, Copy)]
pub struct ProxAscentInner {
    pub alpha_y: f64,
    pub max_steps: usize,
}

impl InnerSolver for ProxAscentInner {
    fn solve(&mut self, p: &MinimaxProblem, x: &[f64], lambda: &[f64], y_start: &[f64], tol: f64)
        -> Result<Vec<f64>> {
        let mut y = y_start.to_vec();
        for _ in 0..self.max_steps {
            if inner_residual(p, x, &y, lambda)? <= tol {
                break;
            }
            y = inner_ascent(p, x, lambda, &y, 1, self.alpha_y)?;
        }
        Ok(y)
    }
}

/// Inner tolerances `ε_t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EpsSchedule {
    Constant { eps: f64 },
    /// `scale / (t + 1)`
    Harmonic { scale: f64 },
    /// `first · ratioᵗ`
    Geometric { first: f64, ratio: f64 },
    /// Listed values; the last one repeats.
    Explicit { values: Vec<f64> },
}

impl EpsSchedule {
    pub fn at(&self, t: usize) -> f64 {
        match self {
            EpsSchedule::Constant { eps } => *eps,
            EpsSchedule::Harmonic { scale } => scale / (t as f64 + 1.0),
            EpsSchedule::Geometric { first, ratio } => first * ratio.powi(t.min(i32::MAX as usize) as i32),
            EpsSchedule::Explicit { values } => values.get(t).or(values.last()).copied().unwrap_or(0.0),
        }
    }

    /// Constant schedules are not square-summable unless zero.
    pub fn is_constant(&self) -> bool {
        match self {
            EpsSchedule::Constant { eps } => *eps > 0.0,
            EpsSchedule::Explicit { values } => {
                values.len() > 1 && values[0] > 0.0 && values.iter().all(|v| *v == values[0])
            }
            _ => false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct FrameworkOutcome {
    pub state: IterateState,
    pub trace: Vec<TraceRecord>,
    /// `ε_t` handed to the inner solver at each outer iteration.
    pub eps_used: Vec<f64>,
    pub warnings: Vec<String>,
}

/// Absolute slack on the inner tolerance check, so an exact inner solve
/// passes an `ε_t = 0` schedule despite rounding.
const INNER_SLACK: f64 = 1e-12;

/// The generic alternating framework: delegated inner maximization, then
/// the same outer `x` / `λ` updates as PGmsAD.
pub fn run_framework(
    p: &MinimaxProblem,
    inner: &mut dyn InnerSolver,
    schedule: &EpsSchedule,
    alpha_x: f64,
    outer_t: usize,
    init: IterateState,
    record_trace: bool,
) -> Result<FrameworkOutcome> {
    if !(alpha_x > 0.0) {
        return Err(Error::config(format!("alpha_x must be positive, got {alpha_x}")));
    }
    init.check(p)?;
    let mut warnings = Vec::new();
    if schedule.is_constant() {
        warnings.push(format!(
            "constant inner tolerance {} is not square-summable; convergence is not guaranteed",
            schedule.at(0)
        ));
    }
    let l1 = 1.0 / alpha_x;
    let mut rec = Recorder::new(record_trace, None);
    let mut s = init;
    let r0 = residuals(p, &s.x, &s.y, &s.lambda, l1, 1.0)?;
    rec.record(&s, &r0);
    let mut eps_used = Vec::with_capacity(outer_t);

    for k in 0..outer_t {
        let tol = schedule.at(k);
        eps_used.push(tol);
        let step = (|| {
            let y = inner.solve(p, &s.x, &s.lambda, &s.y, tol)?;
            let achieved = inner_residual(p, &s.x, &y, &s.lambda)?;
            if !(achieved <= tol + INNER_SLACK * (1.0 + norm(&y))) {
                return Err(Error::Framework {
                    t: s.t,
                    tolerance: tol,
                    achieved,
                });
            }
            let (x, lambda) = outer_step(p, &s.x, &s.lambda, &y, alpha_x)?;
            Ok((x, y, lambda))
        })();
        let (x, y, lambda) = match step {
            Ok(v) => v,
            Err(e) => return Err(rec.fail(s.t + 1, e)),
        };
        s = IterateState {
            x,
            y,
            lambda,
            t: s.t + 1,
        };
        let r = residuals(p, &s.x, &s.y, &s.lambda, l1, 1.0)?;
        rec.record(&s, &r);
    }
    Ok(FrameworkOutcome {
        state: s,
        trace: rec.records,
        eps_used,
        warnings,
    })
}

use std::time::Instant;

use super::{project_feasible, IterateState, SolverConfig, TraceRecord};
use crate::error::{Error, Result};
use crate::numerics::{first_nonfinite, matvec_t};
use crate::problem::{residuals, MinimaxProblem, Residuals};
use crate::prox::Smooth;

/// Application metric evaluated on each traced iterate.
pub type Metric<'a> = &'a dyn Fn(&IterateState) -> f64;

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub state: IterateState,
    pub trace: Vec<TraceRecord>,
    pub residuals: Residuals,
    /// An iterate met the stopping rule before the cap.
    pub converged: bool,
    pub wall_time_s: f64,
}

fn divergence(hint: String) -> Error {
    Error::Divergence {
        t: 0,
        hint,
        trace: Vec::new(),
    }
}

fn guard(v: &[f64], what: &str, step: &str, value: f64) -> Result<()> {
    match first_nonfinite(v) {
        Some(i) => Err(divergence(format!("{what}[{i}] non-finite; {step} = {value}"))),
        None => Ok(()),
    }
}

/// `N` projected ascent steps on `y ↦ f(x, y, λ) − ψ(y)`.
pub fn inner_ascent(
    p: &MinimaxProblem,
    x: &[f64],
    lambda: &[f64],
    y0: &[f64],
    n: usize,
    alpha_y: f64,
) -> Result<Vec<f64>> {
    let mut shift = matvec_t(&p.k, x)?;
    for (s, v) in shift.iter_mut().zip(matvec_t(&p.b, lambda)?) {
        *s += v;
    }
    crate::numerics::check_len("y", p.m(), y0)?;
    let mut y = y0.to_vec();
    for _ in 0..n {
        let gh = p.h.gradient(&y);
        let z: Vec<f64> = y
            .iter()
            .zip(&gh)
            .zip(&shift)
            .map(|((yi, gi), si)| yi + alpha_y * (si - gi))
            .collect();
        guard(&z, "y", "alpha_y", alpha_y)?;
        y = p.psi.prox(alpha_y, &z)?;
        guard(&y, "y", "alpha_y", alpha_y)?;
    }
    Ok(y)
}

/// Proximal descent in `x` and gradient descent in `λ`; the λ update
/// uses the old `x`.
pub fn outer_step(
    p: &MinimaxProblem,
    x: &[f64],
    lambda: &[f64],
    y_next: &[f64],
    alpha_x: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let gx = p.grad_x(x, y_next, lambda).map_err(|e| match e {
        Error::Numerical { index, .. } => {
            divergence(format!("grad_x[{index}] non-finite; alpha_x = {alpha_x}"))
        }
        e => e,
    })?;
    let z: Vec<f64> = x.iter().zip(&gx).map(|(a, g)| a - alpha_x * g).collect();
    let x_next = p.phi.prox(alpha_x, &z)?;
    guard(&x_next, "x", "alpha_x", alpha_x)?;
    let r = p.feas(x, y_next)?;
    let lambda_next: Vec<f64> = lambda.iter().zip(&r).map(|(l, v)| l - alpha_x * v).collect();
    guard(&lambda_next, "lambda", "alpha_x", alpha_x)?;
    Ok((x_next, lambda_next))
}

pub(crate) struct Recorder<'a> {
    start: Instant,
    enabled: bool,
    metric: Option<Metric<'a>>,
    pub records: Vec<TraceRecord>,
}

impl<'a> Recorder<'a> {
    pub fn new(enabled: bool, metric: Option<Metric<'a>>) -> Self {
        Self {
            start: Instant::now(),
            enabled,
            metric,
            records: Vec::new(),
        }
    }

    pub fn elapsed(&self) -> f64 {
        self.start.elapsed().as_secs_f64()
    }

    /// Records the iterate and returns its application metric, if any.
    pub fn record(&mut self, s: &IterateState, r: &Residuals) -> Option<f64> {
        let m = self.metric.map(|f| f(s));
        if self.enabled {
            self.records.push(TraceRecord {
                t: s.t,
                elapsed: self.elapsed(),
                res_x: r.res_x,
                res_y: r.res_y,
                res_feas: r.res_feas,
                objective_metric: m,
            });
        }
        m
    }

    pub fn fail(self, t: usize, e: Error) -> Error {
        match e {
            Error::Divergence { hint, .. } => Error::Divergence {
                t,
                hint,
                trace: self.records,
            },
            e => e,
        }
    }
}

pub fn run_pgmsad(p: &MinimaxProblem, config: &SolverConfig, init: IterateState) -> Result<SolveOutcome> {
    run_pgmsad_with(p, config, init, None)
}

/// PGmsAD with an optional application metric for the trace and for the
/// `app_tol` stopping rule.
pub fn run_pgmsad_with(
    p: &MinimaxProblem,
    config: &SolverConfig,
    init: IterateState,
    metric: Option<Metric<'_>>,
) -> Result<SolveOutcome> {
    config.validate()?;
    init.check(p)?;
    let l1 = 1.0 / config.alpha_x;
    let mut rec = Recorder::new(config.record_trace, metric);
    let mut s = init;
    let start_t = s.t;

    let stop = |r: &Residuals, m: Option<f64>| {
        config.early_stop
            && (r.is_stationary(config.eps)
                || matches!((m, config.app_tol), (Some(m), Some(tol)) if m <= tol))
    };

    let l2 = |t: usize| 1.0 / config.alpha_y_at(t);
    let r0 = residuals(p, &s.x, &s.y, &s.lambda, l1, l2(0)).map_err(|e| rec_fail(e, s.t))?;
    let m0 = rec.record(&s, &r0);
    let mut converged = stop(&r0, m0);

    let mut k = 0;
    while !converged && k < config.outer_t {
        let alpha_y = config.alpha_y_at(k);
        let step = (|| {
            let y = inner_ascent(p, &s.x, &s.lambda, &s.y, config.inner_n_at(k), alpha_y)?;
            let (x, lambda) = outer_step(p, &s.x, &s.lambda, &y, config.alpha_x)?;
            let (x, y) = if config.project_each_outer {
                project_feasible(p, &x, &y)?
            } else {
                (x, y)
            };
            Ok::<_, Error>((x, y, lambda))
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
        k += 1;
        let r = match residuals(p, &s.x, &s.y, &s.lambda, l1, l2(k)) {
            Ok(r) => r,
            Err(e) => return Err(rec.fail(s.t, rec_fail(e, s.t))),
        };
        if !r.max().is_finite() {
            let hint = format!("residuals overflow; alpha_x = {}, alpha_y = {alpha_y}", config.alpha_x);
            return Err(rec.fail(s.t, divergence(hint)));
        }
        let m = rec.record(&s, &r);
        converged = stop(&r, m);
    }

    let mut res = residuals(p, &s.x, &s.y, &s.lambda, l1, l2(k))?;
    if config.project_terminal && !config.project_each_outer && s.t > start_t {
        let (x, y) = project_feasible(p, &s.x, &s.y)?;
        let projected = residuals(p, &x, &y, &s.lambda, l1, l2(k))?;
        // a certified point is never traded for one that fails the test
        if !converged || stop(&projected, None) || !res.is_stationary(config.eps) {
            s.x = x;
            s.y = y;
            res = projected;
        }
    }
    Ok(SolveOutcome {
        state: s,
        residuals: res,
        converged,
        wall_time_s: rec.elapsed(),
        trace: rec.records,
    })
}

fn rec_fail(e: Error, t: usize) -> Error {
    match e {
        Error::Numerical { context, index } => Error::Divergence {
            t,
            hint: format!("{context}[{index}] non-finite"),
            trace: Vec::new(),
        },
        e => e,
    }
}

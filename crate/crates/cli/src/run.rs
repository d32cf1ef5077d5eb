use std::path::Path;

use anyhow::{Context, Result};
use jointmm::apps::{
    gave_to_minimax, glpe_to_minimax, run_gave, run_glpe, GaveConfig, GaveStart, GlpeConfig, GlpeStart,
};
use jointmm::problem::residuals;
use jointmm::solver::{format_trace_csv, run_pgmsad, FinalState};
use jointmm::{Error, IterateState, Residuals, SolverConfig, TraceRecord};
use serde_json::{json, Value};

use crate::manifest::{Job, Settings, StartSpec};

/// Outer budget used by the application loops when `T` is not given.
const APP_DEFAULT_T: usize = 20_000;

pub struct RunReport {
    pub n: usize,
    pub m: usize,
    pub q: usize,
    pub inner_n: usize,
    pub iterations: usize,
    pub wall_time_s: f64,
    pub residuals: Residuals,
    pub app_error: Option<f64>,
    pub converged: bool,
    pub trace: Vec<TraceRecord>,
    pub report: Value,
}

impl RunReport {
    /// Writes `trace.csv` (optional) and `final.json` into `dir`.
    pub fn write(&self, dir: &Path, with_trace: bool) -> Result<()> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        if with_trace {
            write_trace(dir, "trace", &self.trace)?;
        }
        let path = dir.join("final.json");
        let text = serde_json::to_string_pretty(&self.report)?;
        std::fs::write(&path, text + "\n").with_context(|| format!("writing {}", path.display()))
    }
}

pub fn write_trace(dir: &Path, stem: &str, trace: &[TraceRecord]) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(format!("{stem}.csv"));
    std::fs::write(&path, format_trace_csv(trace)).with_context(|| format!("writing {}", path.display()))
}

/// Partial trace carried by a divergence, if any.
pub fn failure_trace(e: &anyhow::Error) -> Option<&[TraceRecord]> {
    match e.downcast_ref::<Error>() {
        Some(Error::Divergence { trace, .. }) if !trace.is_empty() => Some(trace),
        _ => None,
    }
}

fn solver_config(base: SolverConfig, s: &Settings) -> Result<SolverConfig> {
    let mut c = base;
    if let Some(v) = s.alpha_x {
        c.alpha_x = v;
    }
    if let Some(v) = s.alpha_y {
        c.alpha_y = v;
    }
    if let Some(v) = s.inner_n {
        c.inner_n = v;
    }
    if let Some(v) = s.outer_t {
        c.outer_t = v;
    }
    if let Some(v) = s.eps {
        c.eps = v;
    }
    if let Some(v) = s.project_each_outer {
        c.project_each_outer = v;
    }
    if let Some(v) = s.record_trace {
        c.record_trace = v;
    }
    if let Some(v) = s.seed {
        c.seed = v;
    }
    if s.alpha_y_schedule.is_some() {
        c.alpha_y_schedule = s.alpha_y_schedule.clone();
    }
    if s.inner_n_schedule.is_some() {
        c.inner_n_schedule = s.inner_n_schedule.clone();
    }
    c.validate()?;
    Ok(c)
}

fn app_steps(s: &Settings, alpha_x: &mut f64, alpha_y: &mut f64, alpha_z: &mut f64) {
    if let Some(v) = s.alpha_x {
        *alpha_x = v;
    }
    if let Some(v) = s.alpha_y {
        *alpha_y = v;
    }
    if let Some(v) = s.alpha_z {
        *alpha_z = v;
    }
}

pub fn execute(job: &Job, s: &Settings, start: Option<&StartSpec>) -> Result<RunReport> {
    match job {
        Job::Problem(p) => pgmsad(p, solver_config(SolverConfig::default(), s)?, start),
        Job::LinReg(p) => {
            let mut base = SolverConfig::new(0.3, 1.0, 3, APP_DEFAULT_T);
            base.eps = 1e-7;
            pgmsad(p, solver_config(base, s)?, start)
        }
        Job::Gave { inst, start, preset } => {
            let mut cfg = preset.clone().unwrap_or_default();
            app_steps(s, &mut cfg.alpha_x, &mut cfg.alpha_y, &mut cfg.alpha_z);
            cfg.inner_n = s.inner_n.unwrap_or(cfg.inner_n);
            cfg.outer_t = s.outer_t.unwrap_or(cfg.outer_t);
            cfg.tol = s.eps.or(cfg.tol);
            cfg.record_trace = s.record_trace.unwrap_or(cfg.record_trace);
            let start = start.clone().unwrap_or_else(|| GaveStart::zeros(inst));
            gave(inst, &cfg, start)
        }
        Job::Glpe(inst) => {
            let mut cfg = match GlpeConfig::det_preset(inst, APP_DEFAULT_T) {
                Ok(c) => c,
                // explicit steps are then mandatory
                Err(e) if s.alpha_x.is_none() || s.alpha_y.is_none() || s.alpha_z.is_none() => return Err(e.into()),
                Err(_) => GlpeConfig::uniform(1.0, 5, APP_DEFAULT_T),
            };
            app_steps(s, &mut cfg.alpha_x, &mut cfg.alpha_y, &mut cfg.alpha_z);
            cfg.inner_n = s.inner_n.unwrap_or(cfg.inner_n);
            cfg.outer_t = s.outer_t.unwrap_or(cfg.outer_t);
            cfg.tol = s.eps.or(cfg.tol);
            cfg.record_trace = s.record_trace.unwrap_or(cfg.record_trace);
            let start = GlpeStart::random(inst, s.seed.unwrap_or(0));
            glpe(inst, &cfg, start)
        }
    }
}

fn pgmsad(p: &jointmm::MinimaxProblem, cfg: SolverConfig, start: Option<&StartSpec>) -> Result<RunReport> {
    let init = initial_state(p, cfg.seed, start)?;
    let out = run_pgmsad(p, &cfg, init)?;
    let fs = FinalState::new(&out.state, out.residuals, out.wall_time_s);
    let mut report = serde_json::to_value(&fs)?;
    report["converged"] = json!(out.converged);
    Ok(RunReport {
        n: p.n(),
        m: p.m(),
        q: p.q(),
        inner_n: cfg.inner_n,
        iterations: out.state.t,
        wall_time_s: out.wall_time_s,
        residuals: out.residuals,
        app_error: None,
        converged: out.converged,
        trace: out.trace,
        report,
    })
}

fn initial_state(p: &jointmm::MinimaxProblem, seed: u64, start: Option<&StartSpec>) -> Result<IterateState> {
    let drawn = IterateState::random(p, seed);
    let Some(s) = start else { return Ok(drawn) };
    let x = s.x.clone().unwrap_or(drawn.x);
    let y = s.y.clone().unwrap_or(drawn.y);
    Ok(IterateState::new(p, x, y, s.lambda.clone()).context("start")?)
}

fn gave(inst: &jointmm::apps::GaveInstance, cfg: &GaveConfig, start: GaveStart) -> Result<RunReport> {
    let r = run_gave(inst, cfg, start)?;
    let p = gave_to_minimax(inst)?;
    // reformulated iterate: x = x⁺, y = (y, z)
    let yz: Vec<f64> = r.y.iter().chain(&r.z).copied().collect();
    let res = residuals(&p, &r.x_plus, &yz, &r.lambda, 1.0 / cfg.alpha_x, 1.0 / cfg.alpha_y)?;
    let fs = FinalState {
        x: r.x.clone(),
        y: r.y.clone(),
        lambda: r.lambda.clone(),
        residuals: res,
        iterations: r.iterations,
        wall_time_s: r.wall_time_s,
    };
    let mut report = serde_json::to_value(&fs)?;
    report["x_plus"] = json!(r.x_plus);
    report["z"] = json!(r.z);
    report["app_error"] = json!(r.error);
    report["recovery_sign"] = json!(r.sign);
    report["converged"] = json!(r.converged);
    Ok(RunReport {
        n: inst.n(),
        m: inst.m(),
        q: inst.n(),
        inner_n: cfg.inner_n,
        iterations: r.iterations,
        wall_time_s: r.wall_time_s,
        residuals: res,
        app_error: Some(r.error),
        converged: r.converged,
        trace: r.trace,
        report,
    })
}

fn glpe(inst: &jointmm::apps::GlpeInstance, cfg: &GlpeConfig, start: GlpeStart) -> Result<RunReport> {
    let r = run_glpe(inst, cfg, start)?;
    let p = glpe_to_minimax(inst)?;
    let yz: Vec<f64> = r.y.iter().chain(&r.z).copied().collect();
    let res = residuals(&p, &r.x_k, &yz, &r.lambda, 1.0 / cfg.alpha_x, 1.0 / cfg.alpha_y)?;
    let fs = FinalState {
        x: r.x.clone(),
        y: r.y.clone(),
        lambda: r.lambda.clone(),
        residuals: res,
        iterations: r.iterations,
        wall_time_s: r.wall_time_s,
    };
    let mut report = serde_json::to_value(&fs)?;
    report["x_k"] = json!(r.x_k);
    report["x_polar"] = json!(r.x_polar);
    report["z"] = json!(r.z);
    report["cone"] = json!(inst.cone);
    report["app_error"] = json!(r.error);
    report["recovery_sign"] = json!(r.sign);
    report["converged"] = json!(r.converged);
    Ok(RunReport {
        n: inst.n(),
        m: inst.m(),
        q: inst.n(),
        inner_n: cfg.inner_n,
        iterations: r.iterations,
        wall_time_s: r.wall_time_s,
        residuals: res,
        app_error: Some(r.error),
        converged: r.converged,
        trace: r.trace,
        report,
    })
}

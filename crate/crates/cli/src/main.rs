mod bench;
mod manifest;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use jointmm::problem::{compute_budget_constants, compute_constants};
use jointmm::solver::plan_budget;
use serde_json::json;

use manifest::{LinRegSpec, RunManifest, Settings};
use run::{execute, failure_trace, write_trace};

/// Exit code when the outer budget ran out before the tolerance was met.
const EXIT_EXHAUSTED: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "jointmm", version, about = "Minimax solvers for problems with joint linear constraints")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run PGmsAD (or the matching application loop for a builtin)
    Solve(Common),
    /// Generalized absolute value equation Ax + B|x| = b
    Gave(Common),
    /// Generalized linear projection equation
    Glpe {
        #[command(flatten)]
        common: Common,
        /// Cone for the built-in instance: orthant, soc or l1
        #[arg(long)]
        cone: Option<String>,
    },
    /// Seeded linear-regression instance
    Linreg {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        p: Option<usize>,
    },
    /// Run a list of manifests and write a CSV summary
    Bench(Common),
    /// Print the iteration budget (N, T) for an ε-stationary point
    Budget {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        theta_gap: Option<f64>,
        #[arg(long)]
        beta1: Option<f64>,
        #[arg(long)]
        omega1: Option<f64>,
    },
}

#[derive(Args, Debug, Clone, Default)]
struct Common {
    /// Run manifest (JSON)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in instance: gave-a, gave-b, gave-c or glpe-paper
    #[arg(long)]
    builtin: Option<String>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    alpha_x: Option<f64>,
    #[arg(long)]
    alpha_y: Option<f64>,
    #[arg(long)]
    alpha_z: Option<f64>,
    /// Inner ascent steps N
    #[arg(long)]
    inner_n: Option<usize>,
    /// Outer iteration budget T
    #[arg(long)]
    outer_t: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Project onto the constraint set after every outer step
    #[arg(long)]
    project_each_outer: bool,
    #[arg(long, overrides_with = "no_trace")]
    trace: bool,
    #[arg(long, overrides_with = "trace")]
    no_trace: bool,
}

impl Common {
    fn settings(&self) -> Settings {
        Settings {
            alpha_x: self.alpha_x,
            alpha_y: self.alpha_y,
            alpha_z: self.alpha_z,
            inner_n: self.inner_n,
            outer_t: self.outer_t,
            eps: self.eps,
            seed: self.seed,
            project_each_outer: self.project_each_outer.then_some(true),
            record_trace: if self.trace {
                Some(true)
            } else if self.no_trace {
                Some(false)
            } else {
                None
            },
            alpha_y_schedule: None,
            inner_n_schedule: None,
        }
    }

    /// Manifest from `--config` (or empty) with the flags applied on top.
    fn manifest(&self) -> Result<RunManifest> {
        let mut m = match &self.config {
            Some(path) => RunManifest::load(path)?,
            None => RunManifest::default(),
        };
        if let Some(b) = &self.builtin {
            m.builtin = Some(b.clone());
            m.problem = None;
            m.gave = None;
            m.glpe = None;
            m.linreg = None;
        }
        let flags = self.settings();
        m.solver.merge(&flags);
        Ok(m)
    }

    fn out_dir(&self, m: &RunManifest) -> PathBuf {
        self.out.clone().or_else(|| m.out.clone()).unwrap_or_else(|| PathBuf::from("jointmm-out"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cmd: Command) -> Result<u8> {
    match cmd {
        Command::Solve(c) => single(&c, c.manifest()?, None),
        Command::Gave(c) => single(&c, c.manifest()?, Some("gave")),
        Command::Glpe { common, cone } => {
            let mut m = common.manifest()?;
            if cone.is_some() {
                m.cone = cone;
            }
            single(&common, m, Some("glpe"))
        }
        Command::Linreg { common, n, m, p } => {
            let mut man = common.manifest()?;
            if let Some(n) = n {
                if man.builtin.is_some() {
                    bail!("--n conflicts with --builtin");
                }
                let seed = man.linreg.map_or(0, |l| l.seed);
                man.linreg = Some(LinRegSpec { n, m, p, seed });
            } else if let Some(spec) = man.linreg.as_mut() {
                spec.m = m.or(spec.m);
                spec.p = p.or(spec.p);
            }
            if man.linreg.is_none() {
                bail!("linreg needs --n or a manifest with a 'linreg' section");
            }
            single(&common, man, Some("linreg"))
        }
        Command::Bench(c) => {
            let m = c.manifest()?;
            let out = c.out_dir(&m);
            std::fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
            let (csv, all_ok) = bench::bench(&m, &c.settings(), &out)?;
            let path = out.join("bench.csv");
            std::fs::write(&path, &csv).with_context(|| format!("writing {}", path.display()))?;
            print!("{csv}");
            Ok(if all_ok { 0 } else { EXIT_EXHAUSTED })
        }
        Command::Budget {
            common,
            theta_gap,
            beta1,
            omega1,
        } => {
            let mut m = common.manifest()?;
            m.theta_gap = theta_gap.or(m.theta_gap);
            m.beta1 = beta1.or(m.beta1);
            m.omega1 = omega1.or(m.omega1);
            budget(&m)
        }
    }
}

fn single(c: &Common, m: RunManifest, expect: Option<&str>) -> Result<u8> {
    if !m.runs.is_empty() {
        bail!("manifest has a 'runs' list; use the bench command");
    }
    let job = m.job()?;
    if let Some(kind) = expect {
        if job.kind() != kind {
            bail!("the {kind} command needs a {kind} instance, got a {} instance", job.kind());
        }
    }
    let out = c.out_dir(&m);
    let with_trace = m.solver.record_trace.unwrap_or(true);
    let report = match execute(&job, &m.solver, m.start.as_ref()) {
        Ok(r) => r,
        Err(e) => {
            if let Some(t) = failure_trace(&e).filter(|_| with_trace) {
                write_trace(&out, "trace", t)?;
            }
            return Err(e);
        }
    };
    report.write(&out, with_trace)?;
    let r = &report.residuals;
    let app = report.app_error.map(|e| format!(", app_error {e:.3e}")).unwrap_or_default();
    eprintln!(
        "{} after {} outer iterations: res_x {:.3e}, res_y {:.3e}, res_feas {:.3e}{app}; wrote {}",
        if report.converged { "converged" } else { "budget exhausted" },
        report.iterations,
        r.res_x,
        r.res_y,
        r.res_feas,
        out.display()
    );
    Ok(if report.converged { 0 } else { EXIT_EXHAUSTED })
}

fn budget(m: &RunManifest) -> Result<u8> {
    let p = m.job()?.problem()?;
    if p.mu <= 0.0 {
        bail!("mu = 0 (relaxed mode): the iteration budget needs strong concavity in y, so none is available");
    }
    let consts = compute_constants(&p, jointmm::numerics::NORM_TOL)?;
    let l_theta = consts.l_theta.expect("mu > 0");
    let alpha_x = m.solver.alpha_x.unwrap_or(0.9 / l_theta);
    let alpha_y = m.solver.alpha_y.unwrap_or(if consts.l_h > 0.0 { 0.9 / consts.l_h } else { 1.0 });
    let eps = m.solver.eps.unwrap_or(1e-2);
    let mut bc = compute_budget_constants(&p, &consts, alpha_x, alpha_y)?;
    if let Some(v) = m.theta_gap {
        bc = bc.with_theta_gap(v);
    }
    if let Some(v) = m.beta1 {
        bc = bc.with_beta1(v);
    }
    if let Some(v) = m.omega1 {
        bc = bc.with_omega1(v);
    }
    let plan = plan_budget(&consts, &bc, alpha_x, alpha_y, p.mu, eps)?;
    let out = json!({
        "problem_constants": consts,
        "budget_constants": bc,
        "alpha_x": alpha_x,
        "alpha_y": alpha_y,
        "eps": eps,
        "N": plan.inner_n,
        "T": plan.outer_t,
        "case": plan.case,
    });
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(0)
}

//! Run manifests: which instance to load, solver settings, where to write.
//!
//! ```json
//! {
//!   "builtin": "gave-a",
//!   "solver": {"alpha_x": 0.05, "N": 5, "T": 200, "eps": 1e-3},
//!   "out": "results/gave-a"
//! }
//! ```
//!
//! Input paths (`problem`, matrix files) resolve against the manifest's
//! directory; `out` resolves against the working directory.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use jointmm::apps::{builtin_gave, builtin_glpe, Builtin, GaveInstance, GaveStart, GlpeInstance};
use jointmm::problem::manifest::{MatrixSource, VectorSource};
use jointmm::problem::load_problem;
use jointmm::{ConeSpec, MinimaxProblem};
use serde::Deserialize;

/// Optional overrides of step sizes and budgets; unset fields keep the
/// defaults of whichever solver the run uses.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    pub alpha_x: Option<f64>,
    pub alpha_y: Option<f64>,
    pub alpha_z: Option<f64>,
    #[serde(rename = "N")]
    pub inner_n: Option<usize>,
    #[serde(rename = "T")]
    pub outer_t: Option<usize>,
    pub eps: Option<f64>,
    pub seed: Option<u64>,
    pub project_each_outer: Option<bool>,
    pub record_trace: Option<bool>,
    pub alpha_y_schedule: Option<Vec<f64>>,
    pub inner_n_schedule: Option<Vec<usize>>,
}

impl Settings {
    /// Fields set in `other` win.
    pub fn merge(&mut self, other: &Settings) {
        macro_rules! take {
            ($($f:ident),*) => {$(if other.$f.is_some() { self.$f = other.$f.clone(); })*};
        }
        take!(
            alpha_x,
            alpha_y,
            alpha_z,
            inner_n,
            outer_t,
            eps,
            seed,
            project_each_outer,
            record_trace,
            alpha_y_schedule,
            inner_n_schedule
        );
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaveSpec {
    #[serde(rename = "A")]
    pub a: MatrixSource,
    #[serde(rename = "B")]
    pub b: MatrixSource,
    #[serde(rename = "b")]
    pub rhs: VectorSource,
    pub start: Option<GaveStart>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GlpeSpec {
    #[serde(rename = "A")]
    pub a: MatrixSource,
    #[serde(rename = "B")]
    pub b: MatrixSource,
    #[serde(rename = "b")]
    pub rhs: VectorSource,
    pub cone: ConeSpec,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinRegSpec {
    pub n: usize,
    pub m: Option<usize>,
    pub p: Option<usize>,
    #[serde(default)]
    pub seed: u64,
}

/// Initial point for a generic problem; missing parts are drawn from the seed.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StartSpec {
    pub x: Option<Vec<f64>>,
    pub y: Option<Vec<f64>>,
    pub lambda: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub name: Option<String>,
    /// Run kind inside a bench list: solve, gave, glpe or linreg.
    pub command: Option<String>,
    pub builtin: Option<String>,
    /// Path to a problem manifest.
    pub problem: Option<PathBuf>,
    pub gave: Option<GaveSpec>,
    pub glpe: Option<GlpeSpec>,
    pub linreg: Option<LinRegSpec>,
    /// Cone for the built-in GLPE instance: orthant, soc or l1.
    pub cone: Option<String>,
    pub start: Option<StartSpec>,
    #[serde(default)]
    pub solver: Settings,
    pub out: Option<PathBuf>,
    pub theta_gap: Option<f64>,
    pub beta1: Option<f64>,
    pub omega1: Option<f64>,
    #[serde(default)]
    pub runs: Vec<RunManifest>,
    #[serde(skip)]
    pub base: PathBuf,
}

impl RunManifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut m: RunManifest =
            serde_json::from_str(&text).with_context(|| format!("{}: invalid run manifest", path.display()))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        m.set_base(&base);
        Ok(m)
    }

    fn set_base(&mut self, base: &Path) {
        self.base = base.to_path_buf();
        for r in &mut self.runs {
            r.set_base(base);
        }
    }

    fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base.join(p)
        }
    }

    /// Works out what the manifest asks to solve.
    pub fn job(&self) -> Result<Job> {
        let sources = [
            self.builtin.is_some(),
            self.problem.is_some(),
            self.gave.is_some(),
            self.glpe.is_some(),
            self.linreg.is_some(),
        ];
        match sources.iter().filter(|s| **s).count() {
            0 => bail!("no instance given: set one of builtin, problem, gave, glpe or linreg"),
            1 => {}
            _ => bail!("several instance sources given; keep exactly one of builtin, problem, gave, glpe, linreg"),
        }
        if let Some(name) = &self.builtin {
            let which = Builtin::parse(name)?;
            if which.is_gave() {
                let (inst, start, cfg) = builtin_gave(which)?;
                return Ok(Job::Gave {
                    inst,
                    start: Some(start),
                    preset: Some(cfg),
                });
            }
            let cone = parse_cone(self.cone.as_deref().unwrap_or("orthant"), 5)?;
            return Ok(Job::Glpe(builtin_glpe(cone)?));
        }
        if let Some(path) = &self.problem {
            let path = self.resolve(path);
            if !path.exists() {
                bail!("problem manifest {} does not exist", path.display());
            }
            return Ok(Job::Problem(load_problem(&path)?));
        }
        if let Some(g) = &self.gave {
            let inst = GaveInstance::new(g.a.load(&self.base)?, g.b.load(&self.base)?, g.rhs.load(&self.base)?)?;
            return Ok(Job::Gave {
                inst,
                start: g.start.clone(),
                preset: None,
            });
        }
        if let Some(g) = &self.glpe {
            let inst = GlpeInstance::new(
                g.a.load(&self.base)?,
                g.b.load(&self.base)?,
                g.rhs.load(&self.base)?,
                g.cone.clone(),
            )?;
            return Ok(Job::Glpe(inst));
        }
        let spec = self.linreg.expect("one source is set");
        let m = spec.m.unwrap_or(spec.n);
        let p = spec.p.unwrap_or((spec.n / 5).max(1));
        let (_, problem) = jointmm::apps::make_linreg(spec.n, m, p, spec.seed)?;
        Ok(Job::LinReg(problem))
    }
}

pub enum Job {
    Problem(MinimaxProblem),
    LinReg(MinimaxProblem),
    Gave {
        inst: GaveInstance,
        start: Option<GaveStart>,
        preset: Option<jointmm::apps::GaveConfig>,
    },
    Glpe(GlpeInstance),
}

impl Job {
    pub fn kind(&self) -> &'static str {
        match self {
            Job::Problem(_) => "solve",
            Job::LinReg(_) => "linreg",
            Job::Gave { .. } => "gave",
            Job::Glpe(_) => "glpe",
        }
    }

    /// The minimax problem behind the job, for budget planning.
    pub fn problem(&self) -> Result<MinimaxProblem> {
        Ok(match self {
            Job::Problem(p) | Job::LinReg(p) => p.clone(),
            Job::Gave { inst, .. } => jointmm::apps::gave_to_minimax(inst)?,
            Job::Glpe(g) => jointmm::apps::glpe_to_minimax(g)?,
        })
    }
}

pub fn parse_cone(name: &str, dim: usize) -> Result<ConeSpec> {
    Ok(match name {
        "orthant" | "nonneg_orthant" => ConeSpec::NonnegOrthant { dim },
        "soc" | "second_order" => ConeSpec::SecondOrder { dim },
        "l1" | "l1_norm" => ConeSpec::L1Norm { dim },
        other => bail!("unknown cone '{other}' (expected orthant, soc or l1)"),
    })
}

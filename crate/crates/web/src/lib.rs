//! Browser bindings: cone projections, a 2-d saddle trajectory and
//! residual traces for the built-in instances.

use jointmm::apps::{builtin_gave, make_linreg, run_gave, Builtin};
use jointmm::prox::{ProxOperator, SmoothTerm};
use jointmm::solver::{inner_ascent, outer_step, run_pgmsad};
use jointmm::{ConeSpec, DenseMatrix, Error, IterateState, MinimaxProblem, SolverConfig, TraceRecord};
use wasm_bindgen::prelude::*;

fn cone(kind: &str, dim: usize) -> Result<ConeSpec, String> {
    Ok(match kind {
        "orthant" => ConeSpec::NonnegOrthant { dim },
        "soc" => ConeSpec::SecondOrder { dim },
        "l1" => ConeSpec::L1Norm { dim },
        other => return Err(format!("unknown cone '{other}' (orthant, soc or l1)")),
    })
}

/// `[P_K(z), P_{K°}(z)]` concatenated.
pub fn projections(kind: &str, z: &[f64]) -> Result<Vec<f64>, String> {
    let c = cone(kind, z.len())?;
    let mut out = c.project(z).map_err(|e| e.to_string())?;
    out.extend(c.project_polar(z).map_err(|e| e.to_string())?);
    Ok(out)
}

/// Scalar instance `min_x max_y ½l x² + kxy − ½μy²` s.t. `ax + by + c = 0`.
pub fn scalar_problem(l: f64, mu: f64, k: f64, a: f64, b: f64, c: f64) -> Result<MinimaxProblem, Error> {
    let one = |v: f64| DenseMatrix::from_fn(1, 1, |_, _| v);
    MinimaxProblem::new(
        SmoothTerm::ScaledSqNorm { coefficient: l, dim: 1 },
        ProxOperator::ZeroFunction { dim: 1 },
        SmoothTerm::ScaledSqNorm { coefficient: mu, dim: 1 },
        ProxOperator::ZeroFunction { dim: 1 },
        one(k),
        one(a),
        one(b),
        vec![c],
        mu,
    )
}

/// Flattened `(x, y)` pairs of the outer iterates, starting at `(x0, y0)`.
/// Stops early if an iterate leaves the `1e6` box.
#[allow(clippy::too_many_arguments)]
pub fn trajectory(
    coeffs: [f64; 6],
    start: [f64; 2],
    alpha_x: f64,
    alpha_y: f64,
    inner_n: usize,
    outer_t: usize,
) -> Result<Vec<f64>, String> {
    let [l, mu, k, a, b, c] = coeffs;
    let p = scalar_problem(l, mu, k, a, b, c).map_err(|e| e.to_string())?;
    let (mut x, mut y, mut lam) = (vec![start[0]], vec![start[1]], vec![0.0]);
    let mut path = vec![x[0], y[0]];
    for _ in 0..outer_t {
        y = inner_ascent(&p, &x, &lam, &y, inner_n, alpha_y).map_err(|e| e.to_string())?;
        (x, lam) = outer_step(&p, &x, &lam, &y, alpha_x).map_err(|e| e.to_string())?;
        path.extend([x[0], y[0]]);
        if x[0].abs().max(y[0].abs()) > 1e6 {
            break;
        }
    }
    Ok(path)
}

fn series(trace: &[TraceRecord]) -> Vec<f64> {
    trace
        .iter()
        .map(|r| r.objective_metric.unwrap_or(r.res_x.max(r.res_y).max(r.res_feas)))
        .collect()
}

/// Per-iteration error: `‖Ax + B|x| − b‖` for `gave-*`, the largest
/// residual for `linreg-<n>`. A diverging run yields its partial trace.
pub fn trace_for(name: &str, outer_t: usize) -> Result<Vec<f64>, String> {
    let outcome = if let Some(n) = name.strip_prefix("linreg-") {
        let n: usize = n.parse().map_err(|_| format!("bad size in '{name}'"))?;
        if !(5..=200).contains(&n) {
            return Err("linreg size must be within 5..=200".into());
        }
        let (_, p) = make_linreg(n, n, n / 5, 2024).map_err(|e| e.to_string())?;
        let mut cfg = SolverConfig::new(0.3, 1.0, 3, outer_t);
        cfg.eps = 1e-7;
        run_pgmsad(&p, &cfg, IterateState::random(&p, 7)).map(|o| o.trace)
    } else {
        let which = Builtin::parse(name).map_err(|e| e.to_string())?;
        if !which.is_gave() {
            return Err(format!("'{name}' has no trace here; use gave-a, gave-b, gave-c or linreg-<n>"));
        }
        let (inst, start, mut cfg) = builtin_gave(which).map_err(|e| e.to_string())?;
        cfg.outer_t = outer_t;
        cfg.tol = None;
        run_gave(&inst, &cfg, start).map(|r| r.trace)
    };
    match outcome {
        Ok(t) => Ok(series(&t)),
        Err(Error::Divergence { trace, .. }) => Ok(series(&trace)),
        Err(e) => Err(e.to_string()),
    }
}

#[wasm_bindgen]
pub fn project_cone(kind: &str, z: &[f64]) -> Result<Vec<f64>, JsError> {
    projections(kind, z).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn saddle_trajectory(
    l: f64,
    mu: f64,
    k: f64,
    a: f64,
    b: f64,
    c: f64,
    x0: f64,
    y0: f64,
    alpha_x: f64,
    alpha_y: f64,
    inner_n: usize,
    outer_t: usize,
) -> Result<Vec<f64>, JsError> {
    trajectory([l, mu, k, a, b, c], [x0, y0], alpha_x, alpha_y, inner_n, outer_t.min(20_000))
        .map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn residual_trace(name: &str, outer_t: usize) -> Result<Vec<f64>, JsError> {
    trace_for(name, outer_t.min(20_000)).map_err(|e| JsError::new(&e))
}

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{check_step_sizes, BudgetConstants, ProblemConstants};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BudgetCase {
    /// Bounded `dom ψ` with radius β₁.
    DomainRadius,
    /// Bounded inner optimality gap ω₁.
    InnerGap,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BudgetPlan {
    #[serde(rename = "N")]
    pub inner_n: usize,
    #[serde(rename = "T")]
    pub outer_t: usize,
    pub case: BudgetCase,
}

/// Largest count kept exactly by an `f64`.
const MAX_COUNT: f64 = 9_007_199_254_740_992.0;

fn at_least_one(v: f64, what: &str) -> Result<usize> {
    if v.is_nan() || v > MAX_COUNT {
        return Err(Error::config(format!("{what} = {v:e} is beyond any usable iteration count")));
    }
    Ok(if v > 1.0 { v.ceil() as usize } else { 1 })
}

/// Inner steps `N` and outer iterations `T` that guarantee ε-stationarity.
pub fn plan_budget(
    c: &ProblemConstants,
    b: &BudgetConstants,
    alpha_x: f64,
    alpha_y: f64,
    mu: f64,
    eps: f64,
) -> Result<BudgetPlan> {
    if !(mu > 0.0) {
        return Err(Error::config("budget planning needs mu > 0"));
    }
    if !(eps > 0.0) {
        return Err(Error::config(format!("eps must be positive, got {eps}")));
    }
    check_step_sizes(c, alpha_x, alpha_y)?;
    let contraction = 1.0 - mu * alpha_y;
    if !(contraction > 0.0 && contraction < 1.0) {
        return Err(Error::config(format!(
            "mu * alpha_y = {} must lie in (0, 1)",
            mu * alpha_y
        )));
    }
    let gap = b
        .theta_gap
        .ok_or_else(|| Error::config("theta_gap is required for the outer budget"))?;
    let (lead, case) = match (b.beta1, b.omega1) {
        (Some(beta1), None) => ((8.0 * b.gamma1 * beta1 * beta1).ln(), BudgetCase::DomainRadius),
        (None, Some(omega1)) => ((4.0 * b.gamma1 * omega1 / mu).ln(), BudgetCase::InnerGap),
        _ => return Err(Error::config("supply exactly one of beta1 and omega1")),
    };
    let n = (lead + 2.0 * (1.0 / eps).ln()) / -contraction.ln();
    let t = 2.0 * b.gamma2 * gap / (eps * eps);
    Ok(BudgetPlan {
        inner_n: at_least_one(n, "N")?,
        outer_t: at_least_one(t, "T")?,
        case,
    })
}

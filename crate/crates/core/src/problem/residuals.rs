use serde::{Deserialize, Serialize};

use super::MinimaxProblem;
use crate::error::{Error, Result};
use crate::numerics::norm;

/// Norms of the three gradient mappings that certify stationarity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    /// `‖G^{f,φ}_{L1}(x, y, λ)‖`
    pub res_x: f64,
    /// `‖G^{f,ψ}_{L2}(x, y, λ)‖`
    pub res_y: f64,
    /// `‖Ax + By + c‖`
    pub res_feas: f64,
    #[serde(rename = "L1")]
    pub l1: f64,
    #[serde(rename = "L2")]
    pub l2: f64,
}

impl Residuals {
    pub fn max(&self) -> f64 {
        self.res_x.max(self.res_y).max(self.res_feas)
    }

    /// ε-stationarity: every residual at most `eps`.
    pub fn is_stationary(&self, eps: f64) -> bool {
        self.res_x <= eps && self.res_y <= eps && self.res_feas <= eps
    }
}

pub fn residuals(
    p: &MinimaxProblem,
    x: &[f64],
    y: &[f64],
    lambda: &[f64],
    l1: f64,
    l2: f64,
) -> Result<Residuals> {
    if !(l1 > 0.0 && l2 > 0.0) {
        return Err(Error::config(format!("residual scalings must be positive (L1={l1}, L2={l2})")));
    }
    let gx = p.grad_x(x, y, lambda)?;
    let step_x: Vec<f64> = x.iter().zip(&gx).map(|(a, g)| a - g / l1).collect();
    let tx = p.phi.prox(1.0 / l1, &step_x)?;
    let rx: Vec<f64> = x.iter().zip(&tx).map(|(a, t)| l1 * (a - t)).collect();

    let gy = p.grad_y(x, y, lambda)?;
    let step_y: Vec<f64> = y.iter().zip(&gy).map(|(a, g)| a + g / l2).collect();
    let ty = p.psi.prox(1.0 / l2, &step_y)?;
    let ry: Vec<f64> = y.iter().zip(&ty).map(|(a, t)| l2 * (a - t)).collect();

    Ok(Residuals {
        res_x: norm(&rx),
        res_y: norm(&ry),
        res_feas: norm(&p.feas(x, y)?),
        l1,
        l2,
    })
}

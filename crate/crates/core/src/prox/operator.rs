use serde::{Deserialize, Serialize};

use super::cone::{ConeSpec, MEMBERSHIP_TOL};
use crate::error::{Error, Result};
use crate::numerics::{check_len, dot};

/// A proper closed convex function given through its proximal mapping
/// `prox_{tσ}(z) = argmin { tσ(z') + ½‖z' − z‖² }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProxOperator {
    /// `σ ≡ 0`.
    ZeroFunction { dim: usize },
    /// `σ = δ_K`.
    Indicator { cone: ConeSpec },
    /// `σ = δ_{K°}`.
    PolarIndicator { cone: ConeSpec },
    /// `σ(z) = (c/2)‖z‖²`.
    ScaledSqNorm { coefficient: f64, dim: usize },
    /// `σ(z) = ⟨v, z⟩`.
    LinearShift { shift: Vec<f64> },
    /// Separable sum over consecutive coordinate blocks.
    Blocks { blocks: Vec<ProxOperator> },
}

impl ProxOperator {
    pub fn zero(dim: usize) -> Self {
        ProxOperator::ZeroFunction { dim }
    }

    pub fn indicator(cone: ConeSpec) -> Self {
        ProxOperator::Indicator { cone }
    }

    pub fn dim(&self) -> usize {
        match self {
            ProxOperator::ZeroFunction { dim } | ProxOperator::ScaledSqNorm { dim, .. } => *dim,
            ProxOperator::Indicator { cone } | ProxOperator::PolarIndicator { cone } => cone.dim(),
            ProxOperator::LinearShift { shift } => shift.len(),
            ProxOperator::Blocks { blocks } => blocks.iter().map(ProxOperator::dim).sum(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ProxOperator::ZeroFunction { .. } => true,
            ProxOperator::Blocks { blocks } => blocks.iter().all(ProxOperator::is_zero),
            _ => false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ProxOperator::ScaledSqNorm { coefficient, .. } if !(*coefficient >= 0.0) => Err(
                Error::config(format!("scaled_sq_norm coefficient must be >= 0, got {coefficient}")),
            ),
            ProxOperator::Indicator { cone } => cone.validate(),
            ProxOperator::PolarIndicator { cone } => {
                if !cone.is_cone() {
                    return Err(Error::config("polar_indicator needs a cone, not a box"));
                }
                cone.validate()
            }
            ProxOperator::Blocks { blocks } => {
                for b in blocks {
                    if matches!(b, ProxOperator::Blocks { .. }) {
                        return Err(Error::config("nested block composition is not supported"));
                    }
                    b.validate()?;
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn prox(&self, t: f64, z: &[f64]) -> Result<Vec<f64>> {
        if !(t > 0.0) {
            return Err(Error::config(format!("prox step must be positive, got {t}")));
        }
        check_len("ProxOperator::prox", self.dim(), z)?;
        match self {
            ProxOperator::ZeroFunction { .. } => Ok(z.to_vec()),
            ProxOperator::Indicator { cone } => cone.project(z),
            ProxOperator::PolarIndicator { cone } => cone.project_polar(z),
            ProxOperator::ScaledSqNorm { coefficient, .. } => {
                let s = 1.0 / (1.0 + t * coefficient);
                Ok(z.iter().map(|v| v * s).collect())
            }
            ProxOperator::LinearShift { shift } => {
                Ok(z.iter().zip(shift).map(|(v, a)| v - t * a).collect())
            }
            ProxOperator::Blocks { blocks } => {
                let mut out = Vec::with_capacity(z.len());
                let mut start = 0;
                for b in blocks {
                    if matches!(b, ProxOperator::Blocks { .. }) {
                        return Err(Error::config("nested block composition is not supported"));
                    }
                    let end = start + b.dim();
                    out.extend(b.prox(t, &z[start..end])?);
                    start = end;
                }
                Ok(out)
            }
        }
    }

    /// `σ(z)`; indicators evaluate to `+∞` outside their set (with the
    /// membership tolerance).
    pub fn value(&self, z: &[f64]) -> f64 {
        match self {
            ProxOperator::ZeroFunction { .. } => 0.0,
            ProxOperator::Indicator { cone } => {
                if cone.contains(z, MEMBERSHIP_TOL) {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            ProxOperator::PolarIndicator { cone } => {
                if cone.polar_contains(z, MEMBERSHIP_TOL) {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            ProxOperator::ScaledSqNorm { coefficient, .. } => 0.5 * coefficient * dot(z, z),
            ProxOperator::LinearShift { shift } => dot(shift, z),
            ProxOperator::Blocks { blocks } => {
                let mut start = 0;
                let mut total = 0.0;
                for b in blocks {
                    let end = start + b.dim();
                    total += b.value(&z[start..end]);
                    start = end;
                }
                total
            }
        }
    }
}

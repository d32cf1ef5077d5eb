use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{check_len, dot, matvec, DenseMatrix};

/// Smooth function oracle: value, gradient and a user-supplied Lipschitz
/// constant of the gradient.
pub trait Smooth {
    fn dim(&self) -> usize;
    fn value(&self, z: &[f64]) -> f64;
    fn gradient(&self, z: &[f64]) -> Vec<f64>;
    fn lipschitz(&self) -> f64;
}

/// Registry of smooth terms that can be named in a problem manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SmoothTerm {
    Zero { dim: usize },
    /// `(c/2)‖z‖²`
    ScaledSqNorm { coefficient: f64, dim: usize },
    /// `⟨b, z⟩`
    Linear { b: Vec<f64> },
    /// `½ Σ dᵢ zᵢ²`
    QuadraticDiag { d: Vec<f64> },
    /// `½ zᵀQz + ⟨b, z⟩` with symmetric `Q`; the Lipschitz constant is
    /// carried, never estimated.
    Quadratic {
        q: DenseMatrix,
        b: Vec<f64>,
        lipschitz: f64,
    },
    Sum { terms: Vec<SmoothTerm> },
}

impl SmoothTerm {
    pub fn zero(dim: usize) -> Self {
        SmoothTerm::Zero { dim }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            SmoothTerm::Zero { .. } => true,
            SmoothTerm::Sum { terms } => terms.iter().all(SmoothTerm::is_zero),
            _ => false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SmoothTerm::ScaledSqNorm { coefficient, .. } if !coefficient.is_finite() => {
                Err(Error::config("scaled_sq_norm coefficient must be finite"))
            }
            SmoothTerm::Quadratic { q, b, lipschitz } => {
                if q.rows() != q.cols() || q.rows() != b.len() {
                    return Err(Error::config("quadratic term: Q must be square and match b"));
                }
                if !(lipschitz.is_finite() && *lipschitz >= 0.0) {
                    return Err(Error::config("quadratic term: lipschitz must be finite and >= 0"));
                }
                Ok(())
            }
            SmoothTerm::Sum { terms } => {
                let d = self.dim();
                for t in terms {
                    if t.dim() != d {
                        return Err(Error::config("sum of smooth terms with different dimensions"));
                    }
                    t.validate()?;
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Gradient with a dimension check and a finiteness check.
    pub fn checked_gradient(&self, z: &[f64]) -> Result<Vec<f64>> {
        check_len("SmoothTerm::gradient", self.dim(), z)?;
        let g = self.gradient(z);
        crate::numerics::ensure_finite("smooth gradient", &g)?;
        Ok(g)
    }
}

impl Smooth for SmoothTerm {
    fn dim(&self) -> usize {
        match self {
            SmoothTerm::Zero { dim } | SmoothTerm::ScaledSqNorm { dim, .. } => *dim,
            SmoothTerm::Linear { b } | SmoothTerm::Quadratic { b, .. } => b.len(),
            SmoothTerm::QuadraticDiag { d } => d.len(),
            SmoothTerm::Sum { terms } => terms.first().map_or(0, |t| t.dim()),
        }
    }

    fn value(&self, z: &[f64]) -> f64 {
        match self {
            SmoothTerm::Zero { .. } => 0.0,
            SmoothTerm::ScaledSqNorm { coefficient, .. } => 0.5 * coefficient * dot(z, z),
            SmoothTerm::Linear { b } => dot(b, z),
            SmoothTerm::QuadraticDiag { d } => {
                0.5 * d.iter().zip(z).map(|(di, zi)| di * zi * zi).sum::<f64>()
            }
            SmoothTerm::Quadratic { q, b, .. } => {
                let qz = matvec(q, z).expect("dimension checked by caller");
                0.5 * dot(z, &qz) + dot(b, z)
            }
            SmoothTerm::Sum { terms } => terms.iter().map(|t| t.value(z)).sum(),
        }
    }

    fn gradient(&self, z: &[f64]) -> Vec<f64> {
        match self {
            SmoothTerm::Zero { dim } => vec![0.0; *dim],
            SmoothTerm::ScaledSqNorm { coefficient, .. } => {
                z.iter().map(|v| coefficient * v).collect()
            }
            SmoothTerm::Linear { b } => b.clone(),
            SmoothTerm::QuadraticDiag { d } => d.iter().zip(z).map(|(a, b)| a * b).collect(),
            SmoothTerm::Quadratic { q, b, .. } => {
                let mut g = matvec(q, z).expect("dimension checked by caller");
                for (gi, bi) in g.iter_mut().zip(b) {
                    *gi += bi;
                }
                g
            }
            SmoothTerm::Sum { terms } => {
                let mut g = vec![0.0; z.len()];
                for t in terms {
                    for (gi, ti) in g.iter_mut().zip(t.gradient(z)) {
                        *gi += ti;
                    }
                }
                g
            }
        }
    }

    fn lipschitz(&self) -> f64 {
        match self {
            SmoothTerm::Zero { .. } | SmoothTerm::Linear { .. } => 0.0,
            SmoothTerm::ScaledSqNorm { coefficient, .. } => coefficient.abs(),
            SmoothTerm::QuadraticDiag { d } => d.iter().fold(0.0, |m, v| m.max(v.abs())),
            SmoothTerm::Quadratic { lipschitz, .. } => *lipschitz,
            SmoothTerm::Sum { terms } => terms.iter().map(|t| t.lipschitz()).sum(),
        }
    }
}

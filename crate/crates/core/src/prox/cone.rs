use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{check_len, norm};

/// Absolute tolerance for membership checks.
pub const MEMBERSHIP_TOL: f64 = 1e-10;

/// A closed convex cone (or a box) described by a named projection rule.
///
/// For `second_order` and `l1_norm` the first coordinate is the cone's
/// "height" `s₀` and the remaining `dim - 1` coordinates are `s̄`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConeSpec {
    Free { dim: usize },
    Zero { dim: usize },
    NonnegOrthant { dim: usize },
    SecondOrder { dim: usize },
    L1Norm { dim: usize },
    Box { lower: Vec<f64>, upper: Vec<f64> },
}

impl ConeSpec {
    pub fn dim(&self) -> usize {
        match self {
            ConeSpec::Free { dim }
            | ConeSpec::Zero { dim }
            | ConeSpec::NonnegOrthant { dim }
            | ConeSpec::SecondOrder { dim }
            | ConeSpec::L1Norm { dim } => *dim,
            ConeSpec::Box { lower, .. } => lower.len(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ConeSpec::Free { .. } => "free",
            ConeSpec::Zero { .. } => "zero",
            ConeSpec::NonnegOrthant { .. } => "nonneg_orthant",
            ConeSpec::SecondOrder { .. } => "second_order",
            ConeSpec::L1Norm { .. } => "l1_norm",
            ConeSpec::Box { .. } => "box",
        }
    }

    pub fn is_cone(&self) -> bool {
        !matches!(self, ConeSpec::Box { .. })
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ConeSpec::SecondOrder { dim } | ConeSpec::L1Norm { dim } if *dim < 1 => Err(
                Error::config(format!("{} cone needs dimension >= 1", self.name())),
            ),
            ConeSpec::Box { lower, upper } => {
                if lower.len() != upper.len() {
                    return Err(Error::config("box bounds have different lengths"));
                }
                if let Some(i) = lower.iter().zip(upper).position(|(l, u)| !(l <= u)) {
                    return Err(Error::config(format!("box has lower > upper at index {i}")));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Euclidean projection onto the set.
    pub fn project(&self, z: &[f64]) -> Result<Vec<f64>> {
        check_len("ConeSpec::project", self.dim(), z)?;
        Ok(match self {
            ConeSpec::Free { .. } => z.to_vec(),
            ConeSpec::Zero { dim } => vec![0.0; *dim],
            ConeSpec::NonnegOrthant { .. } => z.iter().map(|v| v.max(0.0)).collect(),
            ConeSpec::SecondOrder { .. } => soc(z),
            ConeSpec::L1Norm { .. } => l1cone(z),
            ConeSpec::Box { lower, upper } => z
                .iter()
                .zip(lower.iter().zip(upper))
                .map(|(v, (l, u))| v.clamp(*l, *u))
                .collect(),
        })
    }

    /// `P_{K°}(z) = z − P_K(z)`.
    pub fn project_polar(&self, z: &[f64]) -> Result<Vec<f64>> {
        if !self.is_cone() {
            return Err(Error::config("polar projection is undefined for a box"));
        }
        let pk = self.project(z)?;
        Ok(z.iter().zip(&pk).map(|(a, b)| a - b).collect())
    }

    pub fn contains(&self, z: &[f64], tol: f64) -> bool {
        if z.len() != self.dim() {
            return false;
        }
        match self {
            ConeSpec::Free { .. } => true,
            ConeSpec::Zero { .. } => z.iter().all(|v| v.abs() <= tol),
            ConeSpec::NonnegOrthant { .. } => z.iter().all(|&v| v >= -tol),
            ConeSpec::SecondOrder { .. } => z.first().map_or(true, |&t| norm(&z[1..]) <= t + tol),
            ConeSpec::L1Norm { .. } => {
                z.first().map_or(true, |&t| z[1..].iter().map(|v| v.abs()).sum::<f64>() <= t + tol)
            }
            ConeSpec::Box { lower, upper } => z
                .iter()
                .zip(lower.iter().zip(upper))
                .all(|(v, (l, u))| *v >= l - tol && *v <= u + tol),
        }
    }

    /// Membership in the polar cone `K° = {w : ⟨w, x⟩ ≤ 0 ∀x ∈ K}`.
    pub fn polar_contains(&self, z: &[f64], tol: f64) -> bool {
        if z.len() != self.dim() {
            return false;
        }
        match self {
            ConeSpec::Free { .. } => z.iter().all(|v| v.abs() <= tol),
            ConeSpec::Zero { .. } => true,
            ConeSpec::NonnegOrthant { .. } => z.iter().all(|&v| v <= tol),
            ConeSpec::SecondOrder { .. } => z.first().map_or(true, |&t| norm(&z[1..]) <= -t + tol),
            ConeSpec::L1Norm { .. } => z
                .first()
                .map_or(true, |&t| z[1..].iter().fold(0.0f64, |m, v| m.max(v.abs())) <= -t + tol),
            ConeSpec::Box { .. } => false,
        }
    }
}

fn soc(z: &[f64]) -> Vec<f64> {
    let t = z[0];
    let s = &z[1..];
    let ns = norm(s);
    if ns <= t {
        z.to_vec()
    } else if ns <= -t {
        vec![0.0; z.len()]
    } else {
        let a = 0.5 * (t + ns);
        let mut out = Vec::with_capacity(z.len());
        out.push(a);
        out.extend(s.iter().map(|v| a * v / ns));
        out
    }
}

/// Projection onto the second-order cone `{(s₀, s̄) : ‖s̄‖ ≤ s₀}`.
pub fn project_soc(z: &[f64]) -> Result<Vec<f64>> {
    if z.len() < 2 {
        return Err(Error::config("second-order cone projection needs dimension >= 2"));
    }
    Ok(soc(z))
}

/// Projection onto the ℓ∞-norm cone `{(t, s) : ‖s‖∞ ≤ t}` by a sorted
/// threshold search.
fn linf_cone(z: &[f64]) -> Vec<f64> {
    let t0 = z[0];
    let s = &z[1..];
    let mut mags: Vec<f64> = s.iter().map(|v| v.abs()).collect();
    mags.sort_unstable_by(|a, b| b.total_cmp(a));
    let max = mags.first().copied().unwrap_or(0.0);
    if max <= t0 {
        return z.to_vec();
    }
    // tau with k clipped coordinates: tau = (t0 + Σ_{i<k} a_i) / (k + 1),
    // consistent when a_k <= tau < a_{k-1}
    let mut tau = 0.0;
    let mut partial = t0;
    for k in 1..=mags.len() {
        partial += mags[k - 1];
        let cand = partial / (k as f64 + 1.0);
        let next = mags.get(k).copied().unwrap_or(0.0);
        if cand >= next {
            tau = cand;
            break;
        }
    }
    if tau <= 0.0 {
        return vec![0.0; z.len()];
    }
    let mut out = Vec::with_capacity(z.len());
    out.push(tau);
    out.extend(s.iter().map(|v| v.clamp(-tau, tau)));
    out
}

fn l1cone(z: &[f64]) -> Vec<f64> {
    if z.len() < 2 {
        return z.iter().map(|v| v.max(0.0)).collect();
    }
    if z[1..].iter().map(|v| v.abs()).sum::<f64>() <= z[0] {
        return z.to_vec();
    }
    // K° = −K* with K* the ℓ∞ cone, so P_{K°}(z) = −P_{K*}(−z)
    let neg: Vec<f64> = z.iter().map(|v| -v).collect();
    let dual = linf_cone(&neg);
    z.iter().zip(&dual).map(|(a, d)| a + d).collect()
}

/// Projection onto the ℓ1-norm cone `{(s₀, s̄) : ‖s̄‖₁ ≤ s₀}` through the
/// Moreau decomposition against its polar.
pub fn project_l1cone(z: &[f64]) -> Result<Vec<f64>> {
    if z.len() < 2 {
        return Err(Error::config("l1-norm cone projection needs dimension >= 2"));
    }
    Ok(l1cone(z))
}

pub fn project_polar(cone: &ConeSpec, z: &[f64]) -> Result<Vec<f64>> {
    cone.project_polar(z)
}

use serde::{Deserialize, Serialize};

use super::MinimaxProblem;
use crate::error::{Error, Result};
use crate::numerics::{operator_norm, DenseMatrix};
use crate::prox::Smooth;

/// Norms and smoothness constants of an instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemConstants {
    pub norm_k: f64,
    pub norm_a: f64,
    pub norm_b: f64,
    pub l_g: f64,
    pub l_h: f64,
    pub mu: f64,
    pub gamma: f64,
    /// `γ/μ`; absent in relaxed mode (`μ = 0`).
    pub l_theta: Option<f64>,
}

/// Spectral norm with the zero matrix mapped to 0.
pub(crate) fn spectral_norm(m: &DenseMatrix, tol: f64) -> Result<f64> {
    if m.is_zero() || m.rows() == 0 || m.cols() == 0 {
        return Ok(0.0);
    }
    operator_norm(m, tol, crate::numerics::NORM_MAX_ITER)
}

/// `γ = max{ √(2(L_gμ + ‖K‖²)² + 2(‖A‖μ + ‖K‖‖B‖)²), √(2(μ‖A‖ + ‖K‖‖B‖)² + 2‖B‖⁴) }`.
pub fn gamma(l_g: f64, mu: f64, norm_k: f64, norm_a: f64, norm_b: f64) -> f64 {
    let cross = norm_a * mu + norm_k * norm_b;
    let first = (2.0 * (l_g * mu + norm_k * norm_k).powi(2) + 2.0 * cross.powi(2)).sqrt();
    let second = (2.0 * cross.powi(2) + 2.0 * norm_b.powi(4)).sqrt();
    first.max(second)
}

impl ProblemConstants {
    pub fn from_norms(l_g: f64, l_h: f64, mu: f64, norm_k: f64, norm_a: f64, norm_b: f64) -> Self {
        let gamma = gamma(l_g, mu, norm_k, norm_a, norm_b);
        Self {
            norm_k,
            norm_a,
            norm_b,
            l_g,
            l_h,
            mu,
            gamma,
            l_theta: (mu > 0.0).then(|| gamma / mu),
        }
    }
}

pub fn compute_constants(p: &MinimaxProblem, tol: f64) -> Result<ProblemConstants> {
    Ok(ProblemConstants::from_norms(
        p.g.lipschitz(),
        p.h.lipschitz(),
        p.mu,
        spectral_norm(&p.k, tol)?,
        spectral_norm(&p.a, tol)?,
        spectral_norm(&p.b, tol)?,
    ))
}

/// Constants feeding the iteration-complexity budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BudgetConstants {
    pub chi0: f64,
    pub chi1: f64,
    pub omega_x: f64,
    pub omega_y: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    /// Radius bound on `dom ψ`.
    pub beta1: Option<f64>,
    /// Bound on the inner optimality gap along the run.
    pub omega1: Option<f64>,
    /// Upper bound on `θ_φ(x⁰, λ⁰) − inf θ_φ`; user supplied.
    pub theta_gap: Option<f64>,
}

/// Scalar inputs of the budget formulas.
#[derive(Debug, Clone, Copy)]
pub struct BudgetInputs {
    pub alpha_x: f64,
    pub alpha_y: f64,
    pub l_theta: f64,
    pub l_g: f64,
    pub mu: f64,
    pub norm_k: f64,
    pub norm_b: f64,
    /// `‖Aᵀ(AAᵀ + BBᵀ)⁻¹‖`
    pub a_gram_inv: f64,
    /// `‖Bᵀ(AAᵀ + BBᵀ)⁻¹‖`
    pub b_gram_inv: f64,
}

impl BudgetConstants {
    /// Evaluates χ₀, χ₁, ω_x, ω_y, γ₁, γ₂ without range checks.
    pub fn from_inputs(i: &BudgetInputs) -> Self {
        let shrink = 1.0 - i.l_theta * i.alpha_x;
        let chi0 = 1.0 / (i.alpha_x * shrink);
        let chi1 = (i.norm_k.powi(2) + i.norm_b.powi(2)) / shrink.powi(2);
        let omega = |alpha: f64| (i.l_g + 2.0 / alpha) * i.a_gram_inv + i.norm_k * i.b_gram_inv;
        let omega_y = omega(i.alpha_y);
        let omega_x = omega(i.alpha_x);
        let mu2_b2 = i.mu.powi(2) / i.norm_b.powi(2);
        let x_term = (1.0 + i.alpha_x * i.l_g).powi(2) + 3.0 * omega_x.powi(2);
        let gamma1 = f64::max(
            6.0 * (9.0 / i.alpha_y.powi(2) + 2.0 * mu2_b2 * chi1 + 4.0 * chi1 * omega_y.powi(2)),
            8.0 * chi1 * x_term,
        );
        let gamma2 = f64::max(
            12.0 * chi0 * (mu2_b2 + 2.0 * omega_y.powi(2)),
            8.0 * chi0 * x_term,
        );
        Self {
            chi0,
            chi1,
            omega_x,
            omega_y,
            gamma1,
            gamma2,
            beta1: None,
            omega1: None,
            theta_gap: None,
        }
    }

    pub fn with_beta1(mut self, beta1: f64) -> Self {
        self.beta1 = Some(beta1);
        self
    }

    pub fn with_omega1(mut self, omega1: f64) -> Self {
        self.omega1 = Some(omega1);
        self
    }

    pub fn with_theta_gap(mut self, gap: f64) -> Self {
        self.theta_gap = Some(gap);
        self
    }
}

/// Checks the step-size intervals `α_x ∈ (0, 1/L_θ)`, `α_y ∈ (0, 1/L_h)`.
pub fn check_step_sizes(c: &ProblemConstants, alpha_x: f64, alpha_y: f64) -> Result<f64> {
    let l_theta = c.l_theta.ok_or_else(|| {
        Error::config("mu = 0 (relaxed mode): L_theta and the budget constants are undefined")
    })?;
    if !(alpha_x > 0.0 && alpha_x * l_theta < 1.0) {
        return Err(Error::config(format!(
            "alpha_x = {alpha_x} outside (0, 1/L_theta) = (0, {})",
            1.0 / l_theta
        )));
    }
    if !(alpha_y > 0.0 && alpha_y * c.l_h < 1.0) {
        return Err(Error::config(format!(
            "alpha_y = {alpha_y} outside (0, 1/L_h) = (0, {})",
            1.0 / c.l_h
        )));
    }
    Ok(l_theta)
}

/// `‖Mᵀ(AAᵀ + BBᵀ)⁻¹‖` for `M ∈ {A, B}`.
fn gram_inverse_norms(p: &MinimaxProblem, tol: f64) -> Result<(f64, f64)> {
    let chol = p.gram_factor()?;
    let q = p.q();
    // columns of G⁻¹ (symmetric, so rows as well)
    let mut inv = DenseMatrix::zeros(q, q);
    for j in 0..q {
        let mut e = vec![0.0; q];
        e[j] = 1.0;
        let col = chol.solve(&e)?;
        for (i, v) in col.into_iter().enumerate() {
            inv.set(i, j, v);
        }
    }
    let at = p.a.transpose().matmul(&inv)?;
    let bt = p.b.transpose().matmul(&inv)?;
    Ok((spectral_norm(&at, tol)?, spectral_norm(&bt, tol)?))
}

pub fn compute_budget_constants(
    p: &MinimaxProblem,
    c: &ProblemConstants,
    alpha_x: f64,
    alpha_y: f64,
) -> Result<BudgetConstants> {
    let l_theta = check_step_sizes(c, alpha_x, alpha_y)?;
    if c.norm_b == 0.0 {
        return Err(Error::config("budget constants need B != 0 (they divide by ‖B‖²)"));
    }
    let (a_gram_inv, b_gram_inv) = gram_inverse_norms(p, crate::numerics::NORM_TOL)?;
    Ok(BudgetConstants::from_inputs(&BudgetInputs {
        alpha_x,
        alpha_y,
        l_theta,
        l_g: c.l_g,
        mu: c.mu,
        norm_k: c.norm_k,
        norm_b: c.norm_b,
        a_gram_inv,
        b_gram_inv,
    }))
}

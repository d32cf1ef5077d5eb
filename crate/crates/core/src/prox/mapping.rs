use super::{ProxOperator, Smooth};
use crate::error::{Error, Result};
use crate::numerics::{check_len, first_nonfinite};

/// Forward–backward point `T_L(z) = prox_{σ/L}(z − ∇h(z)/L)`.
pub fn forward_backward<S: Smooth + ?Sized>(
    h: &S,
    sigma: &ProxOperator,
    lip: f64,
    z: &[f64],
) -> Result<Vec<f64>> {
    if !(lip > 0.0) {
        return Err(Error::config(format!("forward_backward: L must be positive, got {lip}")));
    }
    check_len("forward_backward", h.dim(), z)?;
    let g = h.gradient(z);
    if let Some(index) = first_nonfinite(&g) {
        return Err(Error::Numerical {
            context: "forward_backward gradient",
            index,
        });
    }
    let step: Vec<f64> = z.iter().zip(&g).map(|(zi, gi)| zi - gi / lip).collect();
    sigma.prox(1.0 / lip, &step)
}

/// Gradient mapping `G_L(z) = L (z − T_L(z))`.
pub fn gradient_mapping<S: Smooth + ?Sized>(
    h: &S,
    sigma: &ProxOperator,
    lip: f64,
    z: &[f64],
) -> Result<Vec<f64>> {
    let t = forward_backward(h, sigma, lip, z)?;
    Ok(z.iter().zip(&t).map(|(a, b)| lip * (a - b)).collect())
}

//! Proximal operators, cone projections and the forward–backward /
//! gradient-mapping pair shared by every solver loop.

mod cone;
mod mapping;
mod operator;
mod smooth;

pub use cone::{project_l1cone, project_polar, project_soc, ConeSpec, MEMBERSHIP_TOL};
pub use mapping::{forward_backward, gradient_mapping};
pub use operator::ProxOperator;
pub use smooth::{Smooth, SmoothTerm};

use crate::error::Result;

/// `prox_{tσ}(z)`.
pub fn prox_eval(op: &ProxOperator, t: f64, z: &[f64]) -> Result<Vec<f64>> {
    op.prox(t, z)
}

use crate::error::Result;
use crate::numerics::{matvec_t, norm};
use crate::problem::MinimaxProblem;

/// Euclidean projection of `(x, y)` onto `C = {Ax + By + c = 0}`:
/// `ζ = (AAᵀ + BBᵀ)⁻¹(Ax + By + c)`, `(x, y) − (Aᵀζ, Bᵀζ)`.
///
/// Up to two refinement passes mop up rounding; each correction lies in the
/// row space of `[A B]`, so the result is still the projection.
pub fn project_feasible(p: &MinimaxProblem, x: &[f64], y: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let chol = p.gram_factor()?;
    let mut xp = x.to_vec();
    let mut yp = y.to_vec();
    let target = 1e-14 * (1.0 + norm(&p.c));
    for pass in 0..3 {
        let r = p.feas(&xp, &yp)?;
        if pass > 0 && norm(&r) <= target {
            break;
        }
        let zeta = chol.solve(&r)?;
        for (v, d) in xp.iter_mut().zip(matvec_t(&p.a, &zeta)?) {
            *v -= d;
        }
        for (v, d) in yp.iter_mut().zip(matvec_t(&p.b, &zeta)?) {
            *v -= d;
        }
    }
    Ok((xp, yp))
}

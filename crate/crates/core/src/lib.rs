//! Solvers for nonsmooth convex–concave minimax problems coupled by a joint
//! linear constraint
//!
//! ```text
//! min_x max_y  φ(x) + g(x) + xᵀKy − h(y) − ψ(y)   s.t.  Ax + By + c = 0
//! ```
//!
//! through the Lagrangian `f(x, y, λ) = g(x) + xᵀKy − h(y) + ⟨λ, Ax + By + c⟩`.
//! The crate provides the proximal gradient multi-step ascent–descent loop
//! (N proximal ascent steps in `y` per proximal descent step in `(x, λ)`),
//! the generic alternating-coordinate framework with a pluggable inner
//! solver, the closed-form projection onto the constraint set, the
//! iteration-budget planner, and reformulation drivers for generalized
//! absolute value equations, generalized linear projection equations and
//! joint-constrained linear regression.

pub mod apps;
mod error;
pub mod numerics;
pub mod problem;
pub mod prox;
pub mod solver;

pub use error::{Error, Result};
pub use numerics::DenseMatrix;
pub use problem::{MinimaxProblem, ProblemConstants, Residuals};
pub use prox::{ConeSpec, ProxOperator, SmoothTerm};
pub use solver::{IterateState, SolverConfig, TraceRecord};

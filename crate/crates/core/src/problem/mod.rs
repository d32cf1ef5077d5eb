//! The minimax problem model, its constants, the partial gradients of the
//! Lagrangian and the stationarity residuals.

mod constants;
pub mod manifest;
mod model;
mod residuals;

pub use constants::{
    check_step_sizes, compute_budget_constants, compute_constants, gamma, BudgetConstants,
    BudgetInputs, ProblemConstants,
};
pub use manifest::{load_problem, ProblemManifest};
pub use model::MinimaxProblem;
pub use residuals::{residuals, Residuals};

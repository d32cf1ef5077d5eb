//! PGmsAD, the generic alternating framework it instantiates, the
//! feasibility projection Π_C and the `(N, T)` budget planner.

mod budget;
mod config;
mod framework;
mod pgmsad;
mod projection;
mod state;
mod trace;

pub use budget::{plan_budget, BudgetCase, BudgetPlan};
pub use config::SolverConfig;
pub use framework::{inner_residual, run_framework, EpsSchedule, FrameworkOutcome, InnerSolver, ProxAscentInner};
pub use pgmsad::{inner_ascent, outer_step, run_pgmsad, run_pgmsad_with, Metric, SolveOutcome};
pub use projection::project_feasible;
pub use state::IterateState;
pub use trace::{format_trace_csv, write_trace_csv, FinalState, TraceRecord, TRACE_HEADER};

//! Reformulations of the three application families as joint-constrained
//! minimax problems, with their specialized solver loops and error metrics.

mod builtin;
mod gave;
mod glpe;
mod linreg;

use serde::{Deserialize, Serialize};

pub use builtin::{builtin_gave, builtin_glpe, Builtin, BUILTIN_NAMES};
pub use gave::{gave_to_minimax, run_gave, GaveConfig, GaveInstance, GaveResult, GaveStart};
pub use glpe::{glpe_to_minimax, run_glpe, GlpeConfig, GlpeInstance, GlpeResult, GlpeStart};
pub use linreg::{make_linreg, LinRegInstance};

/// Which multiplier-recovery candidate was reported: `base + λ` or `base − λ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecoverySign {
    Plus,
    Minus,
}

impl RecoverySign {
    pub fn factor(self) -> f64 {
        match self {
            RecoverySign::Plus => 1.0,
            RecoverySign::Minus => -1.0,
        }
    }

    pub fn apply(self, base: &[f64], lambda: &[f64]) -> Vec<f64> {
        let s = self.factor();
        base.iter().zip(lambda).map(|(b, l)| b + s * l).collect()
    }
}

/// Scores both recovery candidates and keeps the better one; `preferred`
/// wins ties.
pub(crate) fn best_recovery(
    base: &[f64],
    lambda: &[f64],
    preferred: RecoverySign,
    score: impl Fn(&[f64]) -> f64,
) -> (Vec<f64>, f64, RecoverySign) {
    let other = match preferred {
        RecoverySign::Plus => RecoverySign::Minus,
        RecoverySign::Minus => RecoverySign::Plus,
    };
    let a = preferred.apply(base, lambda);
    let ea = score(&a);
    let b = other.apply(base, lambda);
    let eb = score(&b);
    if eb < ea {
        (b, eb, other)
    } else {
        (a, ea, preferred)
    }
}

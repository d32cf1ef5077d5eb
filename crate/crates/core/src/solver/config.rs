use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Step sizes, budget and stopping rules of a PGmsAD run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub alpha_x: f64,
    pub alpha_y: f64,
    /// Inner ascent steps per outer iteration.
    #[serde(rename = "N")]
    pub inner_n: usize,
    /// Outer iteration cap.
    #[serde(rename = "T")]
    pub outer_t: usize,
    pub eps: f64,
    /// Stop as soon as the iterate is ε-stationary.
    pub early_stop: bool,
    /// Apply Π_C after every outer iteration.
    pub project_each_outer: bool,
    /// Apply Π_C to the returned point.
    pub project_terminal: bool,
    pub record_trace: bool,
    pub seed: u64,
    /// Per-iteration overrides; the last entry repeats.
    pub alpha_y_schedule: Option<Vec<f64>>,
    pub inner_n_schedule: Option<Vec<usize>>,
    /// Also stop once the application metric drops to this value.
    pub app_tol: Option<f64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            alpha_x: 0.1,
            alpha_y: 0.1,
            inner_n: 10,
            outer_t: 1000,
            eps: 1e-6,
            early_stop: true,
            project_each_outer: false,
            project_terminal: true,
            record_trace: true,
            seed: 0,
            alpha_y_schedule: None,
            inner_n_schedule: None,
            app_tol: None,
        }
    }
}

fn scheduled<T: Copy>(schedule: &Option<Vec<T>>, t: usize, fallback: T) -> T {
    match schedule {
        Some(s) if !s.is_empty() => s[t.min(s.len() - 1)],
        _ => fallback,
    }
}

impl SolverConfig {
    pub fn new(alpha_x: f64, alpha_y: f64, inner_n: usize, outer_t: usize) -> Self {
        Self {
            alpha_x,
            alpha_y,
            inner_n,
            outer_t,
            ..Self::default()
        }
    }

    pub fn alpha_y_at(&self, t: usize) -> f64 {
        scheduled(&self.alpha_y_schedule, t, self.alpha_y)
    }

    pub fn inner_n_at(&self, t: usize) -> usize {
        scheduled(&self.inner_n_schedule, t, self.inner_n)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::config(format!("{name} must be positive and finite, got {v}")))
            }
        };
        positive("alpha_x", self.alpha_x)?;
        positive("alpha_y", self.alpha_y)?;
        for &a in self.alpha_y_schedule.iter().flatten() {
            positive("alpha_y schedule entry", a)?;
        }
        if self.inner_n == 0 || self.inner_n_schedule.iter().flatten().any(|&n| n == 0) {
            return Err(Error::config("inner step count N must be at least 1"));
        }
        if !(self.eps >= 0.0) {
            return Err(Error::config(format!("eps must be non-negative, got {}", self.eps)));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedules_repeat_last_entry() {
        let mut c = SolverConfig::new(0.1, 0.2, 3, 10);
        assert_eq!(c.alpha_y_at(5), 0.2);
        c.inner_n_schedule = Some(vec![1, 2, 4]);
        assert_eq!(c.inner_n_at(0), 1);
        assert_eq!(c.inner_n_at(99), 4);
    }

    #[test]
    fn validation() {
        assert!(SolverConfig::default().validate().is_ok());
        assert!(SolverConfig::new(0.0, 0.1, 1, 1).validate().is_err());
        assert!(SolverConfig::new(0.1, 0.1, 0, 1).validate().is_err());
        let c: SolverConfig = serde_json::from_str(r#"{"alpha_x": 0.3, "N": 3}"#).unwrap();
        assert_eq!((c.alpha_x, c.inner_n, c.outer_t), (0.3, 3, 1000));
        assert!(serde_json::from_str::<SolverConfig>(r#"{"alpha": 1}"#).is_err());
    }
}

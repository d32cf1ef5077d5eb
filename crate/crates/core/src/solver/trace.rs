use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::IterateState;
use crate::error::{Error, Result};
use crate::problem::Residuals;

pub const TRACE_HEADER: &str = "t,elapsed_s,res_x,res_y,res_feas,app_error";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub t: usize,
    /// Seconds since the run started.
    pub elapsed: f64,
    pub res_x: f64,
    pub res_y: f64,
    pub res_feas: f64,
    /// Application error, e.g. `‖Ax + B|x| − b‖`.
    pub objective_metric: Option<f64>,
}

impl TraceRecord {
    /// Equality ignoring wall-clock time.
    pub fn same_values(&self, other: &Self) -> bool {
        self.t == other.t
            && self.res_x.to_bits() == other.res_x.to_bits()
            && self.res_y.to_bits() == other.res_y.to_bits()
            && self.res_feas.to_bits() == other.res_feas.to_bits()
            && self.objective_metric.map(f64::to_bits) == other.objective_metric.map(f64::to_bits)
    }
}

pub fn format_trace_csv(records: &[TraceRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for r in records {
        let _ = write!(
            out,
            "{},{:?},{:?},{:?},{:?},",
            r.t, r.elapsed, r.res_x, r.res_y, r.res_feas
        );
        if let Some(m) = r.objective_metric {
            let _ = write!(out, "{m:?}");
        }
        out.push('\n');
    }
    out
}

pub fn write_trace_csv(path: &Path, records: &[TraceRecord]) -> Result<()> {
    std::fs::write(path, format_trace_csv(records)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Final-state report written next to the trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FinalState {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub lambda: Vec<f64>,
    pub residuals: Residuals,
    pub iterations: usize,
    pub wall_time_s: f64,
}

impl FinalState {
    pub fn new(state: &IterateState, residuals: Residuals, wall_time_s: f64) -> Self {
        Self {
            x: state.x.clone(),
            y: state.y.clone(),
            lambda: state.lambda.clone(),
            residuals,
            iterations: state.t,
            wall_time_s,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("final state serializes")
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

//! JSON problem manifests. Matrices are given inline (as a list of rows)
//! or as a path to a CSV / MatrixMarket file, resolved relative to the
//! manifest's directory.
//!
//! ```json
//! {
//!   "g":   {"kind": "scaled_sq_norm", "coefficient": 0.1, "dim": 2},
//!   "phi": {"kind": "zero_function", "dim": 2},
//!   "h":   {"kind": "quadratic_diag", "d": [1.0, 1.0]},
//!   "psi": {"kind": "zero_function", "dim": 2},
//!   "K": "k.mtx",
//!   "A": [[1.0, 0.0]],
//!   "B": [[0.0, 1.0]],
//!   "c": [0.0],
//!   "mu": 1.0
//! }
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::MinimaxProblem;
use crate::error::{Error, Result};
use crate::numerics::{io, DenseMatrix};
use crate::prox::{ProxOperator, SmoothTerm};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixSource {
    File(PathBuf),
    Rows(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VectorSource {
    File(PathBuf),
    Inline(Vec<f64>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemManifest {
    pub g: SmoothTerm,
    pub phi: ProxOperator,
    pub h: SmoothTerm,
    pub psi: ProxOperator,
    #[serde(rename = "K")]
    pub k: MatrixSource,
    #[serde(rename = "A")]
    pub a: MatrixSource,
    #[serde(rename = "B")]
    pub b: MatrixSource,
    pub c: VectorSource,
    pub mu: f64,
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

impl MatrixSource {
    pub fn load(&self, base: &Path) -> Result<DenseMatrix> {
        match self {
            MatrixSource::File(p) => io::read_matrix(&resolve(base, p)),
            MatrixSource::Rows(rows) => DenseMatrix::from_rows(rows),
        }
    }
}

impl VectorSource {
    pub fn load(&self, base: &Path) -> Result<Vec<f64>> {
        match self {
            VectorSource::Inline(v) => Ok(v.clone()),
            VectorSource::File(p) => {
                let m = io::read_matrix(&resolve(base, p))?;
                if m.rows() != 1 && m.cols() != 1 {
                    return Err(Error::Parse {
                        path: resolve(base, p),
                        message: format!("expected a vector, found a {}x{} matrix", m.rows(), m.cols()),
                    });
                }
                Ok(m.data().to_vec())
            }
        }
    }
}

impl ProblemManifest {
    pub fn build(&self, base: &Path) -> Result<MinimaxProblem> {
        MinimaxProblem::new(
            self.g.clone(),
            self.phi.clone(),
            self.h.clone(),
            self.psi.clone(),
            self.k.load(base)?,
            self.a.load(base)?,
            self.b.load(base)?,
            self.c.load(base)?,
            self.mu,
        )
    }
}

pub fn parse_manifest(text: &str, origin: &Path) -> Result<ProblemManifest> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        path: origin.to_path_buf(),
        message: e.to_string(),
    })
}

/// Reads a manifest file and builds the problem it describes.
pub fn load_problem(path: &Path) -> Result<MinimaxProblem> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let manifest = parse_manifest(&text, path)?;
    manifest.build(path.parent().unwrap_or(Path::new(".")))
}

//! Named instances with their published data and initial points.

use super::{GaveConfig, GaveInstance, GaveStart, GlpeInstance};
use crate::error::{Error, Result};
use crate::numerics::DenseMatrix;
use crate::prox::ConeSpec;

pub const BUILTIN_NAMES: [&str; 4] = ["gave-a", "gave-b", "gave-c", "glpe-paper"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    GaveA,
    GaveB,
    GaveC,
    GlpePaper,
}

impl Builtin {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "gave-a" => Ok(Builtin::GaveA),
            "gave-b" => Ok(Builtin::GaveB),
            "gave-c" => Ok(Builtin::GaveC),
            "glpe-paper" => Ok(Builtin::GlpePaper),
            other => Err(Error::config(format!(
                "unknown builtin '{other}' (available: {})",
                BUILTIN_NAMES.join(", ")
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Builtin::GaveA => "gave-a",
            Builtin::GaveB => "gave-b",
            Builtin::GaveC => "gave-c",
            Builtin::GlpePaper => "glpe-paper",
        }
    }

    pub fn is_gave(self) -> bool {
        !matches!(self, Builtin::GlpePaper)
    }
}

fn rows<const N: usize>(r: [[f64; N]; N]) -> DenseMatrix {
    DenseMatrix::from_fn(N, N, |i, j| r[i][j])
}

const X0: [f64; 3] = [0.648679262048621, 0.825727149241758, -1.01494364268014];
const Y0: [f64; 3] = [-0.471069912683167, 0.137024874130050, -0.291863375753573];
const Z0: [f64; 3] = [0.301818555261006, 0.399930942955802, -0.929961558940129];

fn small_start() -> GaveStart {
    GaveStart {
        x: X0.to_vec(),
        y: Y0.to_vec(),
        z: Z0.to_vec(),
        lambda: vec![0.0; 3],
    }
}

/// The 200×100 instance: `Aᵀ = [D | 0]`, `Bᵀ = [D − U | −1]` with
/// `D = 0.01(I + subdiagonal)` and `U` the upper-triangular ones matrix
/// without its (1,1) entry.
fn gave_c() -> GaveInstance {
    let n = 100;
    let d = |i: usize, j: usize| if i == j || i == j + 1 { 0.01 } else { 0.0 };
    let u = |i: usize, j: usize| if j >= i && (i, j) != (0, 0) { 1.0 } else { 0.0 };
    let a = DenseMatrix::from_fn(2 * n, n, |r, c| if r < n { d(c, r) } else { 0.0 });
    let b = DenseMatrix::from_fn(2 * n, n, |r, c| if r < n { d(c, r) - u(c, r) } else { -1.0 });
    let mut rhs = vec![-7.99, -7.01];
    rhs.extend(std::iter::repeat(-6.0).take(2 * n - 4));
    rhs.extend([-6.01, -5.0]);
    GaveInstance::new(a, b, rhs).expect("consistent builtin")
}

/// Instance, initial point and published solver settings; `tol` and `T`
/// are the acceptance thresholds for each instance.
pub fn builtin_gave(which: Builtin) -> Result<(GaveInstance, GaveStart, GaveConfig)> {
    let with_tol = |mut c: GaveConfig, tol: f64| {
        c.tol = Some(tol);
        c
    };
    match which {
        Builtin::GaveA => Ok((
            GaveInstance::new(
                rows([[1.0, 1.0, 1.0], [1.0, 0.0, 1.0], [1.0, 1.0, 1.0]]),
                rows([[-1.0, 1.0, 0.0], [1.0, 2.0, 1.0], [0.0, 1.0, 1.0]]),
                vec![-1.0, 4.0, 1.0],
            )?,
            small_start(),
            with_tol(GaveConfig::uniform(0.05, 5, 200), 1e-3),
        )),
        Builtin::GaveB => Ok((
            GaveInstance::new(
                rows([[-0.5, 0.5, 1.0], [0.0, 0.5, 0.5], [0.5, 1.0, 0.0]]),
                rows([[-0.5, 0.5, 0.0], [-1.0, 0.5, 0.5], [0.5, 1.0, 0.0]]),
                vec![1.0, 1.0, 3.0],
            )?,
            small_start(),
            with_tol(GaveConfig::uniform(0.01, 40, 100), 5e-2),
        )),
        Builtin::GaveC => {
            let g = gave_c();
            let start = GaveStart::zeros(&g);
            Ok((g, start, with_tol(GaveConfig::uniform(0.01, 5, 10), 1e-8)))
        }
        Builtin::GlpePaper => Err(Error::config("glpe-paper is not a GAVE instance")),
    }
}

/// The 5×5 GLPE instance, posed over `cone` (5-dimensional).
pub fn builtin_glpe(cone: ConeSpec) -> Result<GlpeInstance> {
    let a = rows([
        [-1.0, 0.0, 1.0, 0.0, 0.0],
        [1.0, 0.0, -1.0, 1.0, 1.0],
        [-1.0, 1.0, 1.0, 0.0, 0.0],
        [0.0, 1.0, 1.0, -1.0, 0.0],
        [1.0, -1.0, 1.0, 0.0, 1.0],
    ]);
    let b = rows([
        [0.5, 0.5, 1.0, 0.0, -1.0],
        [1.0, 0.0, 0.5, 1.0, 2.0],
        [1.0, -1.0, 1.0, 0.5, 1.0],
        [0.0, 0.0, -1.0, -0.5, 1.0],
        [1.0, 0.0, 0.0, 0.0, 0.5],
    ]);
    GlpeInstance::new(a, b, vec![6.5, 5.0, 8.5, -1.5, 8.5], cone)
}

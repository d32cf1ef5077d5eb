use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::numerics::{check_len, dot, ensure_finite, matvec, matvec_t, Cholesky, DenseMatrix};
use crate::prox::{ProxOperator, Smooth, SmoothTerm};

/// One instance of the joint-constrained minimax problem.
///
/// Dimensions: `x ∈ Rⁿ`, `y ∈ Rᵐ`, `λ ∈ R^q`; `K` is `n×m`, `A` is `q×n`,
/// `B` is `q×m`. `mu` is the strong-convexity modulus of `h + ψ`; `mu == 0`
/// is the relaxed mode in which the step-size theory and budget planner are
/// unavailable.
#[derive(Debug, Clone)]
pub struct MinimaxProblem {
    pub g: SmoothTerm,
    pub phi: ProxOperator,
    pub h: SmoothTerm,
    pub psi: ProxOperator,
    pub k: DenseMatrix,
    pub a: DenseMatrix,
    pub b: DenseMatrix,
    pub c: Vec<f64>,
    pub mu: f64,
    gram: OnceLock<std::result::Result<Cholesky, (usize, f64)>>,
}

impl MinimaxProblem {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        g: SmoothTerm,
        phi: ProxOperator,
        h: SmoothTerm,
        psi: ProxOperator,
        k: DenseMatrix,
        a: DenseMatrix,
        b: DenseMatrix,
        c: Vec<f64>,
        mu: f64,
    ) -> Result<Self> {
        let n = g.dim();
        let m = h.dim();
        let q = c.len();
        let expect = |what: &'static str, expected: usize, got: usize| -> Result<()> {
            if expected != got {
                Err(Error::Dimension {
                    context: what,
                    expected,
                    got,
                })
            } else {
                Ok(())
            }
        };
        expect("phi dimension", n, phi.dim())?;
        expect("psi dimension", m, psi.dim())?;
        expect("K rows", n, k.rows())?;
        expect("K cols", m, k.cols())?;
        expect("A rows", q, a.rows())?;
        expect("A cols", n, a.cols())?;
        expect("B rows", q, b.rows())?;
        expect("B cols", m, b.cols())?;
        ensure_finite("c", &c)?;
        if !(mu >= 0.0 && mu.is_finite()) {
            return Err(Error::config(format!("mu must be finite and >= 0, got {mu}")));
        }
        g.validate()?;
        h.validate()?;
        phi.validate()?;
        psi.validate()?;
        Ok(Self {
            g,
            phi,
            h,
            psi,
            k,
            a,
            b,
            c,
            mu,
            gram: OnceLock::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.g.dim()
    }

    pub fn m(&self) -> usize {
        self.h.dim()
    }

    pub fn q(&self) -> usize {
        self.c.len()
    }

    pub fn is_relaxed(&self) -> bool {
        self.mu == 0.0
    }

    fn check(&self, x: &[f64], y: &[f64], lambda: &[f64]) -> Result<()> {
        check_len("x", self.n(), x)?;
        check_len("y", self.m(), y)?;
        check_len("lambda", self.q(), lambda)
    }

    /// `∇ₓf = ∇g(x) + Ky + Aᵀλ`.
    pub fn grad_x(&self, x: &[f64], y: &[f64], lambda: &[f64]) -> Result<Vec<f64>> {
        self.check(x, y, lambda)?;
        let mut out = self.g.gradient(x);
        for (o, v) in out.iter_mut().zip(matvec(&self.k, y)?) {
            *o += v;
        }
        for (o, v) in out.iter_mut().zip(matvec_t(&self.a, lambda)?) {
            *o += v;
        }
        ensure_finite("grad_x", &out)?;
        Ok(out)
    }

    /// `∇ᵧf = Kᵀx + Bᵀλ − ∇h(y)`.
    pub fn grad_y(&self, x: &[f64], y: &[f64], lambda: &[f64]) -> Result<Vec<f64>> {
        self.check(x, y, lambda)?;
        let mut out = matvec_t(&self.k, x)?;
        for (o, v) in out.iter_mut().zip(matvec_t(&self.b, lambda)?) {
            *o += v;
        }
        for (o, v) in out.iter_mut().zip(self.h.gradient(y)) {
            *o -= v;
        }
        ensure_finite("grad_y", &out)?;
        Ok(out)
    }

    /// `Ax + By + c`.
    pub fn feas(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        check_len("x", self.n(), x)?;
        check_len("y", self.m(), y)?;
        let mut out = matvec(&self.a, x)?;
        for (o, v) in out.iter_mut().zip(matvec(&self.b, y)?) {
            *o += v;
        }
        for (o, v) in out.iter_mut().zip(&self.c) {
            *o += v;
        }
        Ok(out)
    }

    /// Smooth part of the Lagrangian, `g(x) + xᵀKy − h(y) + ⟨λ, Ax + By + c⟩`.
    pub fn lagrangian(&self, x: &[f64], y: &[f64], lambda: &[f64]) -> Result<f64> {
        self.check(x, y, lambda)?;
        let ky = matvec(&self.k, y)?;
        let r = self.feas(x, y)?;
        Ok(self.g.value(x) + dot(x, &ky) - self.h.value(y) + dot(lambda, &r))
    }

    /// Cached Cholesky factor of `AAᵀ + BBᵀ`.
    pub fn gram_factor(&self) -> Result<&Cholesky> {
        let cached = self.gram.get_or_init(|| {
            let gram = self
                .a
                .gram()
                .add(&self.b.gram())
                .expect("A and B have q rows");
            Cholesky::factor(&gram).map_err(|e| match e {
                Error::SingularConstraint { row, pivot } => (row, pivot),
                _ => (0, f64::NAN),
            })
        });
        cached
            .as_ref()
            .map_err(|&(row, pivot)| Error::SingularConstraint { row, pivot })
    }
}

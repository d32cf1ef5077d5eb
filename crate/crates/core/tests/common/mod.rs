//! Independent oracles and instance generators shared by the integration
//! tests. Nothing here calls into the solver kernels it is used to check.
#![allow(dead_code)]

use jointmm::numerics::{DenseMatrix, GaussianStream};
use jointmm::prox::{ProxOperator, SmoothTerm};
use jointmm::MinimaxProblem;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

pub fn mul(m: &DenseMatrix, v: &[f64]) -> Vec<f64> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j) * v[j]).sum())
        .collect()
}

pub fn mul_t(m: &DenseMatrix, v: &[f64]) -> Vec<f64> {
    (0..m.cols())
        .map(|j| (0..m.rows()).map(|i| m.get(i, j) * v[i]).sum())
        .collect()
}

/// Gaussian elimination with partial pivoting on a copy.
pub fn solve_dense(m: &DenseMatrix, rhs: &[f64]) -> Vec<f64> {
    let n = m.rows();
    let mut a: Vec<Vec<f64>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut b = rhs.to_vec();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| a[i][j] * x[j]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    x
}

/// Singular values by one-sided Jacobi rotations.
pub fn jacobi_singular_values(m: &DenseMatrix) -> Vec<f64> {
    let (rows, cols) = m.shape();
    let mut u: Vec<Vec<f64>> = (0..cols).map(|j| (0..rows).map(|i| m.get(i, j)).collect()).collect();
    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha = dot(&u[p], &u[p]);
                let beta = dot(&u[q], &u[q]);
                let gamma = dot(&u[p], &u[q]);
                if gamma == 0.0 {
                    continue;
                }
                off = off.max(gamma.abs() / (alpha * beta).sqrt().max(f64::MIN_POSITIVE));
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..rows {
                    let (a, b) = (u[p][i], u[q][i]);
                    u[p][i] = c * a - s * b;
                    u[q][i] = s * a + c * b;
                }
            }
        }
        if off < 1e-15 {
            break;
        }
    }
    let mut sv: Vec<f64> = u.iter().map(|c| norm(c)).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Orthonormal basis of the null space of `m` by Gram–Schmidt against
/// its row space.
pub fn null_space(m: &DenseMatrix) -> Vec<Vec<f64>> {
    let d = m.cols();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let push = |v: Vec<f64>, basis: &mut Vec<Vec<f64>>| -> bool {
        let mut w = v;
        for _ in 0..2 {
            for b in basis.iter() {
                let c = dot(&w, b);
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= c * bi;
                }
            }
        }
        let n = norm(&w);
        if n > 1e-8 {
            basis.push(w.iter().map(|v| v / n).collect());
            true
        } else {
            false
        }
    };
    for i in 0..m.rows() {
        push(m.row(i).to_vec(), &mut basis);
    }
    let rank = basis.len();
    for j in 0..d {
        let mut e = vec![0.0; d];
        e[j] = 1.0;
        push(e, &mut basis);
    }
    basis.split_off(rank)
}

fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - r * (hi - lo);
    let mut b = lo + r * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    for _ in 0..200 {
        if fa < fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - r * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + r * (hi - lo);
            fb = f(b);
        }
    }
    (lo + hi) / 2.0
}

/// Minimizes `(t − t₀)² + dist(s̄, S_t)²` over `t ≥ 0`, where `S_t` is the
/// radius-`t` ball whose projection `ball` supplies: a coarse grid in `t`,
/// then golden-section refinement around the best grid cell.
fn brute_cone(z: &[f64], ball: impl Fn(&[f64], f64) -> Vec<f64>) -> Vec<f64> {
    let (t0, s) = (z[0], &z[1..]);
    let cost = |t: f64| (t - t0).powi(2) + dist(s, &ball(s, t)).powi(2);
    let hi = t0.abs() + s.iter().map(|v| v.abs()).sum::<f64>() + 1.0;
    let steps = 2000;
    let best = (0..=steps)
        .map(|i| hi * i as f64 / steps as f64)
        .min_by(|a, b| cost(*a).total_cmp(&cost(*b)))
        .unwrap();
    let h = hi / steps as f64;
    let t = golden_min(cost, (best - h).max(0.0), best + h);
    let t = if cost(0.0) <= cost(t) { 0.0 } else { t };
    let mut out = vec![t];
    out.extend(ball(s, t));
    out
}

pub fn brute_soc(z: &[f64]) -> Vec<f64> {
    brute_cone(z, |s, t| {
        let n = norm(s);
        if n <= t {
            s.to_vec()
        } else {
            s.iter().map(|v| v * t / n).collect()
        }
    })
}

/// ℓ1-ball projection by bisection on the soft threshold.
fn l1_ball(s: &[f64], t: f64) -> Vec<f64> {
    if s.iter().map(|v| v.abs()).sum::<f64>() <= t {
        return s.to_vec();
    }
    let shrink = |tau: f64| -> Vec<f64> { s.iter().map(|v| v.signum() * (v.abs() - tau).max(0.0)).collect() };
    let (mut lo, mut hi) = (0.0, s.iter().fold(0.0f64, |m, v| m.max(v.abs())));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if shrink(mid).iter().map(|v| v.abs()).sum::<f64>() > t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    shrink(hi)
}

pub fn brute_l1cone(z: &[f64]) -> Vec<f64> {
    brute_cone(z, l1_ball)
}

pub fn random_orthogonal(rng: &mut GaussianStream, n: usize) -> DenseMatrix {
    let mut cols: Vec<Vec<f64>> = Vec::new();
    while cols.len() < n {
        let mut v = rng.vector(n);
        for c in &cols {
            let p = dot(&v, c);
            for (vi, ci) in v.iter_mut().zip(c) {
                *vi -= p * ci;
            }
        }
        let nv = norm(&v);
        if nv > 1e-6 {
            cols.push(v.iter().map(|x| x / nv).collect());
        }
    }
    DenseMatrix::from_fn(n, n, |i, j| cols[j][i])
}

/// Symmetric matrix with eigenvalues drawn from `[lo, hi]`, both ends hit.
pub fn random_spd(rng: &mut GaussianStream, n: usize, lo: f64, hi: f64) -> DenseMatrix {
    let q = random_orthogonal(rng, n);
    let eig: Vec<f64> = (0..n)
        .map(|i| match i {
            0 => lo,
            1 => hi,
            _ => lo + (hi - lo) * rng.uniform(),
        })
        .collect();
    DenseMatrix::from_fn(n, n, |i, j| (0..n).map(|k| q.get(i, k) * eig[k] * q.get(j, k)).sum())
}

pub fn uniform(rng: &mut GaussianStream, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.uniform()
}

/// Scalar instance `min_x max_y ½l x² + kxy − ½μy²` s.t. `ax + by + c = 0`
/// with a strongly convex dual function.
#[derive(Debug, Clone, Copy)]
pub struct Toy {
    pub l: f64,
    pub mu: f64,
    pub k: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Toy {
    pub fn sample(rng: &mut GaussianStream) -> Self {
        loop {
            let l = uniform(rng, 0.5, 2.0);
            let mu = uniform(rng, 0.5, 2.0);
            let k = uniform(rng, -1.0, 1.0);
            let a = uniform(rng, -1.0, 1.0);
            let b = uniform(rng, -1.0, 1.0);
            let c = uniform(rng, -1.0, 1.0);
            if b.abs() < 0.3 {
                continue;
            }
            // curvature of θ in (x, λ) after eliminating y
            if l * b * b / mu - a * a - 2.0 * a * k * b / mu < 0.05 {
                continue;
            }
            return Self { l, mu, k, a, b, c };
        }
    }

    pub fn problem(&self) -> MinimaxProblem {
        MinimaxProblem::new(
            SmoothTerm::ScaledSqNorm {
                coefficient: self.l,
                dim: 1,
            },
            ProxOperator::zero(1),
            SmoothTerm::ScaledSqNorm {
                coefficient: self.mu,
                dim: 1,
            },
            ProxOperator::zero(1),
            DenseMatrix::diag(&[self.k]),
            DenseMatrix::diag(&[self.a]),
            DenseMatrix::diag(&[self.b]),
            vec![self.c],
            self.mu,
        )
        .unwrap()
    }

    /// `(x, y, λ)` from the KKT system.
    pub fn saddle(&self) -> [f64; 3] {
        let m = DenseMatrix::from_rows(&[
            vec![self.l, self.k, self.a],
            vec![self.k, -self.mu, self.b],
            vec![self.a, self.b, 0.0],
        ])
        .unwrap();
        let s = solve_dense(&m, &[0.0, 0.0, -self.c]);
        [s[0], s[1], s[2]]
    }
}

/// Bound-constrained quadratic `h(y) = ½yᵀQy + bᵀy` and its maximizer
/// data for inner-loop checks.
pub struct InnerInstance {
    pub problem: MinimaxProblem,
    pub mu: f64,
    pub l_h: f64,
    pub x: Vec<f64>,
    pub lambda: Vec<f64>,
    pub y_star: Vec<f64>,
}

/// Random instance whose inner maximizer has a closed form: either a full
/// SPD quadratic with `ψ = 0`, or a diagonal one with `ψ = δ_{ℝ₊}`.
pub fn inner_instance(rng: &mut GaussianStream, diagonal_orthant: bool) -> InnerInstance {
    use jointmm::prox::ConeSpec;
    let m = 2 + (rng.uniform() * 5.0) as usize;
    let n = 1 + (rng.uniform() * 4.0) as usize;
    let q = 1 + (rng.uniform() * 3.0) as usize;
    let mu = uniform(rng, 0.2, 1.0);
    let l_h = mu + uniform(rng, 0.0, 4.0);
    let bvec = rng.vector(m);
    let (h, psi, qm) = if diagonal_orthant {
        let mut d: Vec<f64> = (0..m).map(|_| uniform(rng, mu, l_h)).collect();
        d[0] = mu;
        d[m - 1] = l_h;
        let qm = DenseMatrix::diag(&d);
        (
            SmoothTerm::Sum {
                terms: vec![SmoothTerm::QuadraticDiag { d }, SmoothTerm::Linear { b: bvec.clone() }],
            },
            ProxOperator::indicator(ConeSpec::NonnegOrthant { dim: m }),
            qm,
        )
    } else {
        let qm = random_spd(rng, m, mu, l_h);
        (
            SmoothTerm::Quadratic {
                q: qm.clone(),
                b: bvec.clone(),
                lipschitz: l_h,
            },
            ProxOperator::zero(m),
            qm,
        )
    };
    let k = rng.matrix(n, m);
    let a = rng.matrix(q, n);
    let bm = rng.matrix(q, m);
    let problem = MinimaxProblem::new(
        SmoothTerm::zero(n),
        ProxOperator::zero(n),
        h,
        psi,
        k.clone(),
        a,
        bm.clone(),
        rng.vector(q),
        mu,
    )
    .unwrap();
    let x = rng.vector(n);
    let lambda = rng.vector(q);
    // maximize −½yᵀQy − bᵀy + sᵀy
    let mut s = mul_t(&k, &x);
    for (si, v) in s.iter_mut().zip(mul_t(&bm, &lambda)) {
        *si += v;
    }
    let rhs: Vec<f64> = s.iter().zip(&bvec).map(|(a, b)| a - b).collect();
    let y_star = if diagonal_orthant {
        rhs.iter().enumerate().map(|(i, r)| (r / qm.get(i, i)).max(0.0)).collect()
    } else {
        solve_dense(&qm, &rhs)
    };
    InnerInstance {
        problem,
        mu,
        l_h,
        x,
        lambda,
        y_star,
    }
}

//! One line per acceptance criterion: `PASS`/`FAIL`, the criterion, and the
//! measured numbers. Run with `cargo test -p jointmm --test acceptance -- --nocapture`.

mod common;

use std::time::Instant;

use common::*;
use jointmm::apps::{builtin_gave, builtin_glpe, make_linreg, run_gave, run_glpe, Builtin, GlpeConfig, GlpeStart};
use jointmm::numerics::GaussianStream;
use jointmm::problem::{compute_budget_constants, compute_constants, BudgetConstants, ProblemConstants};
use jointmm::prox::{forward_backward, gradient_mapping, project_l1cone, project_soc, ConeSpec, ProxOperator, Smooth, SmoothTerm};
use jointmm::solver::{inner_ascent, plan_budget, project_feasible, run_pgmsad, IterateState, SolverConfig};
use jointmm::{DenseMatrix, MinimaxProblem};

fn report(id: u32, title: &str, pass: bool, detail: String) {
    println!("{} criterion {id:>2} ({title}): {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {id} ({title}) failed: {detail}");
}

#[test]
fn c01_gave_a() {
    let (g, start, cfg) = builtin_gave(Builtin::GaveA).unwrap();
    let clock = Instant::now();
    let detail;
    let pass = match run_gave(&g, &cfg, start) {
        Ok(r) => {
            let secs = clock.elapsed().as_secs_f64();
            detail = format!(
                "error {:.3e} after T = {} (need <= 1e-3 within 200), {secs:.3} s, x = {:?}",
                r.error, r.iterations, r.x
            );
            r.error <= 1e-3 && r.iterations <= 200 && secs < 5.0
        }
        Err(e) => {
            detail = e.to_string();
            false
        }
    };
    report(1, "GAVE (a)", pass, detail);
}

/// Distance from `x` to the segment `(3 − 2a, a, 4 − 3a)`, `a ∈ [0, 4/3]`.
fn family_distance(x: &[f64]) -> f64 {
    let (p0, d) = ([3.0, 0.0, 4.0], [-2.0, 1.0, -3.0]);
    let diff: Vec<f64> = x.iter().zip(&p0).map(|(a, b)| a - b).collect();
    let a = (dot(&diff, &d) / dot(&d, &d)).clamp(0.0, 4.0 / 3.0);
    let p: Vec<f64> = p0.iter().zip(&d).map(|(p, d)| p + a * d).collect();
    dist(x, &p)
}

#[test]
fn c02_gave_b() {
    let (g, start, cfg) = builtin_gave(Builtin::GaveB).unwrap();
    let detail;
    let pass = match run_gave(&g, &cfg, start) {
        Ok(r) => {
            let fd = family_distance(&r.x);
            detail = format!(
                "error {:.3e} after T = {} (need <= 5e-2 within 100), family distance {fd:.3e} (need <= 0.15)",
                r.error, r.iterations
            );
            r.error <= 5e-2 && r.iterations <= 100 && fd <= 0.15
        }
        Err(e) => {
            detail = e.to_string();
            false
        }
    };
    report(2, "GAVE (b)", pass, detail);
}

#[test]
fn c03_gave_c() {
    let (g, start, cfg) = builtin_gave(Builtin::GaveC).unwrap();
    let clock = Instant::now();
    let detail;
    let pass = match run_gave(&g, &cfg, start) {
        Ok(r) => {
            let secs = clock.elapsed().as_secs_f64();
            detail = format!(
                "error {:.3e} after T = {} (need <= 1e-8 within 10), {secs:.3} s",
                r.error, r.iterations
            );
            r.error <= 1e-8 && r.iterations <= 10 && secs < 1.0
        }
        Err(e) => {
            detail = format!("{e}");
            false
        }
    };
    report(3, "GAVE (c)", pass, detail);
}

/// Largest `res(2k) / res(k)` over `k ≥ 10`, with `res` the max residual.
fn halving_ratio(trace: &[jointmm::TraceRecord]) -> f64 {
    let r: Vec<f64> = trace.iter().map(|t| t.res_x.max(t.res_y).max(t.res_feas)).collect();
    (10..r.len())
        .filter(|k| 2 * k < r.len())
        .map(|k| r[2 * k] / r[k])
        .fold(0.0, f64::max)
}

#[test]
fn c04_linear_regression() {
    let mut details = Vec::new();
    let mut pass = true;
    for n in [10usize, 100] {
        let (_, p) = make_linreg(n, n, n / 5, 2024).unwrap();
        let mut cfg = SolverConfig::new(0.3, 1.0, 3, 20_000);
        cfg.eps = 1e-7;
        let clock = Instant::now();
        match run_pgmsad(&p, &cfg, IterateState::random(&p, 7)) {
            Ok(out) => {
                let secs = clock.elapsed().as_secs_f64();
                let ratio = halving_ratio(&out.trace);
                let r = out.residuals;
                let ok = r.is_stationary(1e-7) && ratio <= 0.5 && (n < 100 || secs < 60.0);
                pass &= ok;
                details.push(format!(
                    "n={n}: residuals ({:.2e}, {:.2e}, {:.2e}) at T = {}, halving ratio {ratio:.3}, {secs:.2} s",
                    r.res_x, r.res_y, r.res_feas, out.state.t
                ));
            }
            Err(e) => {
                pass = false;
                details.push(format!("n={n}: {e}"));
            }
        }
    }
    report(4, "linear regression", pass, details.join("; "));
}

#[test]
fn c05_glpe() {
    let mut details = Vec::new();
    let mut pass = true;
    for cone in [
        ConeSpec::NonnegOrthant { dim: 5 },
        ConeSpec::SecondOrder { dim: 5 },
        ConeSpec::L1Norm { dim: 5 },
    ] {
        let name = cone.name();
        let g = builtin_glpe(cone.clone()).unwrap();
        let cfg = GlpeConfig::det_preset(&g, 20_000).unwrap();
        match run_glpe(&g, &cfg, GlpeStart::random(&g, 0)) {
            Ok(r) => {
                let member = cone.contains(&r.x_k, 1e-8) && cone.polar_contains(&r.x_polar, 1e-8);
                let comp = dot(&r.x_k, &r.x_polar).abs();
                let ok = r.error <= 1e-12 && member && comp <= 1e-8;
                pass &= ok;
                details.push(format!(
                    "{name}: error {:.3e} at T = {}, memberships {member}, complementarity {comp:.1e}",
                    r.error, r.iterations
                ));
            }
            Err(e) => {
                pass = false;
                details.push(format!("{name}: {e}"));
            }
        }
    }
    report(5, "GLPE", pass, details.join("; "));
}

#[test]
fn c06_inner_contraction() {
    let mut rng = GaussianStream::new(6);
    let mut worst = f64::NEG_INFINITY;
    for i in 0..50 {
        let inst = inner_instance(&mut rng, i % 2 == 1);
        let alpha = uniform(&mut rng, 0.1, 1.0) / inst.l_h;
        let bound = 1.0 - inst.mu * alpha;
        let mut y = rng.vector(inst.problem.m());
        for _ in 0..30 {
            let before = dist(&y, &inst.y_star).powi(2);
            if before < 1e-24 {
                break;
            }
            y = inner_ascent(&inst.problem, &inst.x, &inst.lambda, &y, 1, alpha).unwrap();
            let after = dist(&y, &inst.y_star).powi(2);
            worst = worst.max(after / before - bound);
        }
    }
    report(
        6,
        "inner contraction",
        worst <= 1e-9,
        format!("max(ratio − (1 − μα_y)) = {worst:.3e} over 50 instances"),
    );
}

#[test]
fn c07_projection() {
    let mut rng = GaussianStream::new(7);
    let (mut worst_feas, mut worst_orth) = (0.0f64, 0.0f64);
    for _ in 0..50 {
        let n = 1 + (rng.uniform() * 6.0) as usize;
        let m = 1 + (rng.uniform() * 6.0) as usize;
        let q = 1 + (rng.uniform() * ((n + m - 1) as f64)) as usize;
        let a = rng.matrix(q, n);
        let b = rng.matrix(q, m);
        let p = MinimaxProblem::new(
            SmoothTerm::zero(n),
            ProxOperator::zero(n),
            SmoothTerm::zero(m),
            ProxOperator::zero(m),
            DenseMatrix::zeros(n, m),
            a.clone(),
            b.clone(),
            rng.vector(q),
            0.0,
        )
        .unwrap();
        let (x, y) = (rng.vector(n), rng.vector(m));
        let (xp, yp) = project_feasible(&p, &x, &y).unwrap();
        let mut r = mul(&a, &xp);
        for ((ri, v), c) in r.iter_mut().zip(mul(&b, &yp)).zip(&p.c) {
            *ri += v + c;
        }
        worst_feas = worst_feas.max(norm(&r));
        let mut corr: Vec<f64> = x.iter().zip(&xp).map(|(u, v)| u - v).collect();
        corr.extend(y.iter().zip(&yp).map(|(u, v)| u - v));
        for u in null_space(&a.hstack(&b).unwrap()) {
            worst_orth = worst_orth.max(dot(&corr, &u).abs());
        }
    }
    report(
        7,
        "projection",
        worst_feas <= 1e-12 && worst_orth <= 1e-9,
        format!("max feasibility {worst_feas:.2e}, max null-space component {worst_orth:.2e} over 50 instances"),
    );
}

/// Random convex quadratic `h` with known Lipschitz constant and a convex
/// `σ` drawn from the supported kinds.
fn lemma_instance(rng: &mut GaussianStream) -> (SmoothTerm, f64, ProxOperator, usize) {
    let d = 2 + (rng.uniform() * 4.0) as usize;
    let l_h = uniform(rng, 0.5, 4.0);
    let q = random_spd(rng, d, 0.0, l_h);
    let h = SmoothTerm::Quadratic {
        q,
        b: rng.vector(d),
        lipschitz: l_h,
    };
    let sigma = match (rng.uniform() * 5.0) as usize {
        0 => ProxOperator::zero(d),
        1 => ProxOperator::indicator(ConeSpec::NonnegOrthant { dim: d }),
        2 => ProxOperator::indicator(ConeSpec::SecondOrder { dim: d }),
        3 => ProxOperator::indicator(ConeSpec::L1Norm { dim: d }),
        _ => ProxOperator::ScaledSqNorm {
            coefficient: uniform(rng, 0.1, 2.0),
            dim: d,
        },
    };
    (h, l_h, sigma, d)
}

fn in_domain(sigma: &ProxOperator, z: Vec<f64>) -> Vec<f64> {
    sigma.prox(1.0, &z).unwrap_or(z)
}

#[test]
fn c08_prox_lemmas() {
    let mut rng = GaussianStream::new(8);
    let tol = 1e-9;
    let mut fails: Vec<String> = Vec::new();
    let f = |h: &SmoothTerm, s: &ProxOperator, z: &[f64]| h.value(z) + s.value(z);
    for i in 0..100 {
        let (h, l_h, sigma, d) = lemma_instance(&mut rng);
        let z = in_domain(&sigma, rng.vector(d).iter().map(|v| 2.0 * v).collect());
        let z2 = in_domain(&sigma, rng.vector(d).iter().map(|v| 2.0 * v).collect());
        // (b): any L > 0
        let l = uniform(&mut rng, 0.05, 5.0) * l_h;
        let g1 = gradient_mapping(&h, &sigma, l, &z).unwrap();
        let g2 = gradient_mapping(&h, &sigma, l, &z2).unwrap();
        if dist(&g1, &g2) > (2.0 * l + l_h) * dist(&z, &z2) + tol {
            fails.push(format!("2.2(b) #{i}"));
        }
        // (c): L > L_h / 2
        let l = l_h * uniform(&mut rng, 0.51, 5.0);
        let g = gradient_mapping(&h, &sigma, l, &z).unwrap();
        let t = forward_backward(&h, &sigma, l, &z).unwrap();
        if f(&h, &sigma, &z) - f(&h, &sigma, &t) < (2.0 * l - l_h) / (2.0 * l * l) * dot(&g, &g) - tol {
            fails.push(format!("2.2(c) #{i}"));
        }
        // (d): L = L_h
        let g = gradient_mapping(&h, &sigma, l_h, &z).unwrap();
        let t = forward_backward(&h, &sigma, l_h, &z).unwrap();
        if f(&h, &sigma, &z) - f(&h, &sigma, &t) < dot(&g, &g) / (2.0 * l_h) - tol {
            fails.push(format!("2.2(d) #{i}"));
        }
        // (e): L ≥ L_h, h convex
        let l = l_h * uniform(&mut rng, 1.0, 5.0);
        let t = forward_backward(&h, &sigma, l, &z).unwrap();
        let g0 = norm(&gradient_mapping(&h, &sigma, l, &z).unwrap());
        let g1 = norm(&gradient_mapping(&h, &sigma, l, &t).unwrap());
        if g1 > g0 + tol {
            fails.push(format!("2.2(e) #{i}"));
        }
        // Lemma 2.3: any ξ, t > 0
        let tt = uniform(&mut rng, 0.1, 5.0) * l_h;
        let xi = rng.vector(d);
        let step: Vec<f64> = z.iter().zip(&xi).map(|(a, b)| a - b / tt).collect();
        let zp = sigma.prox(1.0 / tt, &step).unwrap();
        let dz: Vec<f64> = zp.iter().zip(&z).map(|(a, b)| a - b).collect();
        let gh: Vec<f64> = h.gradient(&z).iter().zip(&xi).map(|(a, b)| a - b).collect();
        let rhs = f(&h, &sigma, &z) - 0.5 * (tt - l_h) * dot(&dz, &dz) + dot(&gh, &dz);
        if f(&h, &sigma, &zp) > rhs + tol {
            fails.push(format!("2.3 #{i}"));
        }
        // Lemma 2.4: t ≥ L_h, z' ∈ dom σ
        let tt = l_h * uniform(&mut rng, 1.0, 5.0);
        let zp = forward_backward(&h, &sigma, tt, &z).unwrap();
        let w = z2.clone();
        let grad = h.gradient(&z);
        let lh = h.value(&w) - h.value(&z) - dot(&grad, &w.iter().zip(&z).map(|(a, b)| a - b).collect::<Vec<_>>());
        let lhs = f(&h, &sigma, &w) - f(&h, &sigma, &zp);
        let rhs = 0.5 * tt * dist(&w, &zp).powi(2) - 0.5 * tt * dist(&w, &z).powi(2) + lh;
        if lhs < rhs - tol {
            fails.push(format!("2.4 #{i}"));
        }
    }
    report(
        8,
        "prox lemmas",
        fails.is_empty(),
        format!("600 inequality checks over 100 instances, violations: {fails:?}"),
    );
}

#[test]
fn c09_cone_oracles() {
    let mut rng = GaussianStream::new(9);
    let mut worst = 0.0f64;
    for i in 0..100 {
        let d = if i % 2 == 0 { 3 } else { 5 };
        let z: Vec<f64> = rng.vector(d).iter().map(|v| 2.0 * v).collect();
        worst = worst.max(dist(&project_soc(&z).unwrap(), &brute_soc(&z)));
        worst = worst.max(dist(&project_l1cone(&z).unwrap(), &brute_l1cone(&z)));
    }
    report(
        9,
        "cone oracles",
        worst <= 1e-6,
        format!("max deviation from brute-force projection {worst:.2e} over 100 points"),
    );
}

fn scalar_plan(b: &BudgetConstants, mu_alpha_y: f64, mu: f64, eps: f64) -> (usize, usize) {
    let lead = match (b.beta1, b.omega1) {
        (Some(beta), None) => (8.0 * b.gamma1 * beta * beta).ln(),
        (None, Some(omega)) => (4.0 * b.gamma1 * omega / mu).ln(),
        _ => unreachable!(),
    };
    let n = ((lead + 2.0 * (1.0 / eps).ln()) / -(1.0 - mu_alpha_y).ln()).ceil();
    let t = (2.0 * b.gamma2 * b.theta_gap.unwrap() / (eps * eps)).ceil();
    ((n as usize).max(1), (t as usize).max(1))
}

#[test]
fn c10_budget() {
    let mut rng = GaussianStream::new(10);
    let mut mismatches = 0;
    for i in 0..20 {
        let mu = uniform(&mut rng, 0.1, 2.0);
        let l_h = mu * uniform(&mut rng, 1.0, 4.0);
        let c = ProblemConstants::from_norms(
            uniform(&mut rng, 0.0, 2.0),
            l_h,
            mu,
            uniform(&mut rng, 0.0, 2.0),
            uniform(&mut rng, 0.1, 2.0),
            uniform(&mut rng, 0.1, 2.0),
        );
        let alpha_x = uniform(&mut rng, 0.05, 0.95) / c.l_theta.unwrap();
        let alpha_y = uniform(&mut rng, 0.05, 0.95) / l_h;
        let mut b = BudgetConstants {
            chi0: 0.0,
            chi1: 0.0,
            omega_x: 0.0,
            omega_y: 0.0,
            gamma1: (3.0 * rng.next_normal()).exp(),
            gamma2: (3.0 * rng.next_normal()).exp(),
            beta1: None,
            omega1: None,
            theta_gap: Some(uniform(&mut rng, 0.1, 10.0)),
        };
        let r = uniform(&mut rng, 0.1, 10.0);
        if i % 2 == 0 {
            b.beta1 = Some(r)
        } else {
            b.omega1 = Some(r)
        }
        let eps = 10f64.powf(-uniform(&mut rng, 1.0, 5.0));
        let plan = plan_budget(&c, &b, alpha_x, alpha_y, mu, eps).unwrap();
        if (plan.inner_n, plan.outer_t) != scalar_plan(&b, mu * alpha_y, mu, eps) {
            mismatches += 1;
        }
    }

    // fixed instance: a scalar toy with computed constants
    let toy = Toy::sample(&mut GaussianStream::new(100));
    let p = toy.problem();
    let c = compute_constants(&p, 1e-12).unwrap();
    let (ax, ay) = (0.9 / c.l_theta.unwrap(), 0.9 / c.l_h);
    let b = compute_budget_constants(&p, &c, ax, ay)
        .unwrap()
        .with_beta1(1.0)
        .with_theta_gap(1.0);
    let lead = (8.0 * b.gamma1).ln();
    let mut normalized = Vec::new();
    let mut pure = Vec::new();
    for eps in [1e-1, 1e-2, 1e-3, 1e-4] {
        let plan = plan_budget(&c, &b, ax, ay, p.mu, eps).unwrap();
        let work = (plan.inner_n * plan.outer_t) as f64;
        let log_inv = (1.0f64 / eps).ln();
        normalized.push(work / (eps.powi(-2) * (lead + 2.0 * log_inv)));
        pure.push(work / (eps.powi(-2) * log_inv));
    }
    let spread = |v: &[f64]| v.iter().cloned().fold(0.0, f64::max) / v.iter().cloned().fold(f64::INFINITY, f64::min);
    let (sn, sp) = (spread(&normalized), spread(&pure));
    report(
        10,
        "budget formulas",
        mismatches == 0 && sn <= 1.1,
        format!(
            "{mismatches}/20 mismatches; N·T / (ε⁻²·log(8γ₁β₁²/ε²)) spread {sn:.4} over ε = 1e-1..1e-4 \
             (N·T / (ε⁻² log ε⁻¹) spread {sp:.3}, log(8γ₁β₁²) = {lead:.2})"
        ),
    );
}

#[test]
fn c11_saddle_recovery() {
    let mut rng = GaussianStream::new(11);
    let mut worst = 0.0f64;
    let mut iters = 0;
    for _ in 0..20 {
        let toy = Toy::sample(&mut rng);
        let p = toy.problem();
        let c = compute_constants(&p, 1e-12).unwrap();
        let mut cfg = SolverConfig::new(0.9 / c.l_theta.unwrap(), 0.9 / c.l_h, 20, 50_000);
        cfg.eps = 1e-12;
        cfg.record_trace = false;
        let init = IterateState::new(&p, vec![1.0], vec![-1.0], None).unwrap();
        let out = run_pgmsad(&p, &cfg, init).unwrap();
        let s = toy.saddle();
        worst = worst.max(dist(&[out.state.x[0], out.state.y[0]], &s[..2]));
        iters = iters.max(out.state.t);
    }
    report(
        11,
        "saddle recovery",
        worst <= 1e-6,
        format!("max distance to the KKT saddle {worst:.2e} over 20 instances (max T = {iters})"),
    );
}

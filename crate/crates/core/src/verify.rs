//! Self-check table of the closed-form identities: factorizations,
//! orthogonality, explicit inverses, determinants and condition numbers.
//!
//! The matrix builders are injectable so a deliberately broken builder can
//! be shown to trip the corresponding check.

use std::f64::consts::SQRT_2;
use std::fmt::Write as _;

use crate::analysis::{self, analytic_cond_s_circle, analytic_optimal_r0};
use crate::assembly::{self, MethodParams, TrefftzDims};
use crate::geometry::{collocation_points, BoundaryCurve};
use crate::linalg::{cond2, determinant, singular_values, DenseMatrix};
use crate::solvers::{solve_mtm, BoundaryData, Solution};

/// Matrix constructors exercised by the checks.
#[derive(Clone, Copy)]
pub struct Builders {
    pub t_r: fn(usize, f64, f64) -> DenseMatrix,
    pub t_theta: fn(usize, usize) -> DenseMatrix,
    pub k: fn(&MethodParams) -> DenseMatrix,
    pub s_r0: fn(usize, f64, f64) -> DenseMatrix,
}

impl Default for Builders {
    fn default() -> Self {
        Self {
            t_r: assembly::build_t_r,
            t_theta: assembly::build_t_theta,
            k: assembly::build_k,
            s_r0: assembly::build_s_r0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, measured: f64, bound: f64, what: &str) -> CheckResult {
    CheckResult {
        name,
        passed: measured <= bound,
        detail: format!("{what} = {measured:.3e} (bound {bound:.1e})"),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn params(n: usize, r: f64, r0: f64) -> MethodParams {
    MethodParams::new(r, r0, TrefftzDims::square(n).expect("odd N")).expect("positive radii")
}

/// Runs every check with the real builders.
pub fn run_checks() -> Vec<CheckResult> {
    run_checks_with(&Builders::default())
}

pub fn run_checks_with(b: &Builders) -> Vec<CheckResult> {
    vec![
        k_factorization(b),
        t_theta_orthogonality(b),
        t_theta_inverse(b),
        transform_determinants(b),
        determinant_multiplicativity(b),
        k_inverse(b),
        transform_condition_numbers(b),
        s_factorization(b),
        s_determinants(b),
        s_condition_formula(),
        optimal_characteristic_length(),
        sk_diagonalization(b),
        reduced_s_singular(),
        polar_sign_flip(b),
        fourier_coefficients(),
    ]
}

pub fn all_passed(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.passed)
}

/// One line per check: `PASS|FAIL  name  detail`.
pub fn render_table(results: &[CheckResult]) -> String {
    let width = results.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for r in results {
        let tag = if r.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{tag}  {:width$}  {}", r.name, r.detail);
    }
    let passed = results.iter().filter(|r| r.passed).count();
    let _ = writeln!(out, "{passed}/{} checks passed", results.len());
    out
}

fn k_factorization(b: &Builders) -> CheckResult {
    let mut worst = 0.0_f64;
    for (n, m) in [(7, 3), (21, 10), (9, 6), (15, 3)] {
        for (r, r0) in [(1.0, 1.0), (0.4, 1.0), (1.26, 1.0), (2.0, 0.8)] {
            let p = MethodParams::new(r, r0, TrefftzDims::new(n, m)).unwrap();
            let prod = (b.t_r)(m, r, r0).matmul(&(b.t_theta)(n, m));
            worst = worst.max((b.k)(&p).max_abs_diff(&prod));
        }
    }
    check("K = T_R T_theta", worst, 1e-14, "max |K - T_R T_theta|")
}

fn t_theta_orthogonality(b: &Builders) -> CheckResult {
    let mut worst = 0.0_f64;
    for n in [3usize, 8, 21, 101, 201] {
        let m = (n - 1) / 2;
        let t = (b.t_theta)(n, m);
        let gram = t.matmul(&t.transpose());
        let mut diag = vec![n as f64 / 2.0; 2 * m + 1];
        diag[0] = n as f64;
        let err = gram.max_abs_diff(&DenseMatrix::diagonal(&diag)) / n as f64;
        worst = worst.max(err);
    }
    check(
        "T_theta T_theta^T = (N/2) diag(2,1,...,1)",
        worst,
        1e-11,
        "max error / N",
    )
}

fn t_theta_inverse(b: &Builders) -> CheckResult {
    let mut worst = 0.0_f64;
    for n in [3usize, 7, 21] {
        let m = (n - 1) / 2;
        let inv = assembly::explicit_t_theta_inverse(n, m).unwrap();
        worst = worst.max((b.t_theta)(n, m).matmul(&inv).max_abs_diff(&DenseMatrix::identity(n)));
    }
    check("explicit T_theta inverse", worst, 1e-12, "max |T_theta X - I|")
}

fn transform_determinants(b: &Builders) -> CheckResult {
    let mut worst = 0.0_f64;
    for m in 1..=8 {
        let n = 2 * m + 1;
        for ratio in [0.5, 1.0, 1.3] {
            let d = determinant(&(b.t_r)(m, ratio, 1.0)).unwrap_or(f64::NAN);
            worst = worst.max(rel(d, analysis::det_t_r(m, ratio, 1.0)));
        }
        let d = determinant(&(b.t_theta)(n, m)).unwrap_or(f64::NAN);
        worst = worst.max(rel(d.abs(), analysis::det_t_theta(m)));
    }
    check(
        "det T_R, |det T_theta| closed forms",
        fix_nan(worst),
        1e-8,
        "max relative error",
    )
}

fn determinant_multiplicativity(b: &Builders) -> CheckResult {
    let mut worst = 0.0_f64;
    for m in 1..=8 {
        let n = 2 * m + 1;
        for (r, r0) in [(1.0, 1.0), (0.7, 1.0), (1.2, 0.9)] {
            let p = params(n, r, r0);
            let lhs = determinant(&(b.t_r)(m, r, r0)).unwrap() * determinant(&(b.t_theta)(n, m)).unwrap();
            let rhs = determinant(&(b.k)(&p)).unwrap();
            worst = worst.max(rel(lhs, rhs));
        }
    }
    check(
        "det K = det T_R det T_theta",
        fix_nan(worst),
        1e-8,
        "max relative error",
    )
}

fn k_inverse(b: &Builders) -> CheckResult {
    let mut worst = 0.0_f64;
    for n in [3usize, 7, 21] {
        for ratio in [0.5, 1.0, 2.0] {
            let p = params(n, ratio, 1.0);
            let inv = assembly::explicit_k_inverse(&p).unwrap();
            worst = worst.max((b.k)(&p).matmul(&inv).max_abs_diff(&DenseMatrix::identity(n)));
        }
    }
    check("explicit K inverse", worst, 1e-10, "max |K X - I|")
}

fn transform_condition_numbers(b: &Builders) -> CheckResult {
    let mut worst = 0.0_f64;
    for m in 1..=10 {
        let n = 2 * m + 1;
        let r = 0.75;
        let c_tr = cond2(&(b.t_r)(m, r, r)).unwrap_or(f64::NAN);
        let c_tt = cond2(&(b.t_theta)(n, m)).unwrap_or(f64::NAN);
        let c_k2 = cond2(&(b.k)(&params(n, r, r))).unwrap_or(f64::NAN);
        worst = worst
            .max(rel(c_tr, m as f64))
            .max(rel(c_tt, SQRT_2))
            .max(rel(c_k2, analysis::cond_k2(m)));
    }
    check(
        "cond T_R = M, cond T_theta = sqrt2, cond K2 = sqrt2 M",
        fix_nan(worst),
        1e-10,
        "max relative error",
    )
}

fn s_factorization(b: &Builders) -> CheckResult {
    let mut worst = 0.0_f64;
    for (rho, r0) in [(1.0, 1.0), (2.0, 1.0), (1.0, 1.3), (3.0, 2.9)] {
        let curve = BoundaryCurve::circle(rho).unwrap();
        for m in [1usize, 4, 10] {
            let n = 2 * m + 1;
            let coll = collocation_points(&curve, n).unwrap();
            let s = assembly::build_s(&coll, m, r0).unwrap();
            let prod = (b.t_theta)(n, m).transpose().matmul(&(b.s_r0)(m, r0, rho));
            worst = worst.max(s.max_abs_diff(&prod));
        }
    }
    check("S = T_theta^T S_R0 (circle)", worst, 1e-13, "max |S - T_theta^T S_R0|")
}

fn s_determinants(b: &Builders) -> CheckResult {
    let mut worst = 0.0_f64;
    for m in 1..=8 {
        let n = 2 * m + 1;
        for (rho, r0) in [(1.0, 1.0), (2.0, 1.5), (1.0, 1.1)] {
            let d = determinant(&(b.s_r0)(m, r0, rho)).unwrap();
            worst = worst.max(rel(d, analysis::det_s_r0(m, r0, rho)));
            let coll = collocation_points(&BoundaryCurve::circle(rho).unwrap(), n).unwrap();
            let ds = determinant(&assembly::build_s(&coll, m, r0).unwrap()).unwrap();
            worst = worst.max(rel(ds.abs(), analysis::det_s_circle(m, r0, rho)));
        }
    }
    check(
        "det S_R0, |det S| closed forms",
        fix_nan(worst),
        1e-8,
        "max relative error",
    )
}

fn s_condition_formula() -> CheckResult {
    let mut worst = 0.0_f64;
    let rho = 1.0;
    let curve = BoundaryCurve::circle(rho).unwrap();
    for m in [1usize, 4, 10] {
        let n = 2 * m + 1;
        let coll = collocation_points(&curve, n).unwrap();
        let knee = 2f64.powf(1.0 / (2.0 * m as f64));
        let mut grid: Vec<f64> = (0..=56).map(|i| 0.2 + 0.25 * i as f64).collect();
        for x in [1.0, knee, SQRT_2] {
            grid.extend([x * (1.0 - 1e-3), x, x * (1.0 + 1e-3)]);
        }
        for r0 in grid {
            let numeric = cond2(&assembly::build_s(&coll, m, r0).unwrap()).unwrap();
            worst = worst.max(rel(numeric, analytic_cond_s_circle(rho, m, r0)));
        }
    }
    check("cond S four-branch formula (circle)", worst, 1e-6, "max relative error")
}

fn optimal_characteristic_length() -> CheckResult {
    let curve = BoundaryCurve::circle(1.0).unwrap();
    let grid = analysis::uniform_grid(0.005, 3.0);
    let (r0, c) = analysis::cond_sweep_s(&curve, 21, 10, &grid)
        .ok()
        .and_then(|p| p.argmin())
        .unwrap_or((f64::NAN, f64::NAN));
    let (r0_opt, c_opt) = analytic_optimal_r0(1.0, 10);
    let passed = (r0 - r0_opt).abs() <= 0.005 && (c - c_opt).abs() <= 1e-3;
    CheckResult {
        name: "optimal R0 = 2^(1/(2M)) rho",
        passed,
        detail: format!("grid min {c:.5} at R0 = {r0:.3}; closed form {c_opt:.5} at {r0_opt:.5}"),
    }
}

fn sk_diagonalization(b: &Builders) -> CheckResult {
    let mut worst = 0.0_f64;
    let (n, m, rho) = (21, 10, 1.5);
    let coll = collocation_points(&BoundaryCurve::circle(rho).unwrap(), n).unwrap();
    for ratio in [0.3, 0.9] {
        for r0 in [0.7, rho, 2.0] {
            let r = ratio * rho;
            let sk = assembly::build_s(&coll, m, r0)
                .unwrap()
                .matmul(&(b.k)(&params(n, r, r0)));
            let t = (b.t_theta)(n, m);
            let diag = t.transpose().matmul(&assembly::build_lambda(m, r, rho)).matmul(&t);
            worst = worst.max(sk.max_abs_diff(&diag) / n as f64);
        }
    }
    check("SK = T_theta^T Lambda T_theta (circle)", worst, 1e-11, "max error / N")
}

fn reduced_s_singular() -> CheckResult {
    let mut worst = 0.0_f64;
    for m in [2usize, 5, 10] {
        let n = 2 * m;
        let coll = collocation_points(&BoundaryCurve::circle(1.0).unwrap(), n).unwrap();
        let reduced = assembly::build_s(&coll, m, 1.0).unwrap().without_column(0);
        let sv = singular_values(&reduced).unwrap();
        worst = worst.max(sv[sv.len() - 1] / sv[0]);
    }
    check(
        "S without constant column is singular for N = 2M",
        worst,
        1e-12,
        "max sigma_min / sigma_max",
    )
}

fn polar_sign_flip(b: &Builders) -> CheckResult {
    let mut worst = 0.0_f64;
    for m in [1usize, 3, 10] {
        let n = 2 * m + 1;
        let flip = |i: usize| if i == 0 { 1.0 } else { -1.0 };
        let t = (b.t_theta)(n, m);
        let t_flipped = DenseMatrix::from_fn(2 * m + 1, n, |i, j| flip(i) * t[(i, j)]);
        let mut d = vec![(n as f64 / 2.0).sqrt(); 2 * m + 1];
        d[0] *= SQRT_2;
        let q = DenseMatrix::from_fn(2 * m + 1, n, |i, j| t_flipped[(i, j)] / d[i]);
        worst = worst.max(q.matmul(&q.transpose()).max_abs_diff(&DenseMatrix::identity(2 * m + 1)));

        // K = (T_R' D)(D⁻¹ T_θ') with T_R' D positive diagonal
        let (r, r0) = (0.8, 1.1);
        let tr = (b.t_r)(m, r, r0);
        let scale: Vec<f64> = (0..2 * m + 1).map(|i| flip(i) * tr[(i, i)] * d[i]).collect();
        if scale.iter().any(|&s| s <= 0.0) {
            worst = f64::INFINITY;
        }
        let rebuilt = DenseMatrix::diagonal(&scale).matmul(&q);
        worst = worst.max(rebuilt.max_abs_diff(&(b.k)(&params(n, r, r0))));
    }
    check(
        "sign-flipped D^-1 T_theta orthogonal, K = (T_R D)(D^-1 T_theta)",
        worst,
        1e-12,
        "max error",
    )
}

fn fourier_coefficients() -> CheckResult {
    let mut worst = 0.0_f64;
    let f = BoundaryData::function(|t| 2.0 + 3.0 * (2.0 * t).cos() - t.sin());
    for (rho, r0) in [(1.0, 1.0), (2.0, 1.0), (1.5, 1.7)] {
        let curve = BoundaryCurve::circle(rho).unwrap();
        let Ok(report) = solve_mtm(&curve, &f, 11, 5, r0) else {
            return check(
                "MTM recovers Fourier coefficients",
                f64::INFINITY,
                1e-10,
                "solve failed",
            );
        };
        let Solution::Trefftz(c) = report.solution else {
            unreachable!()
        };
        let q = rho / r0;
        let mut expected = vec![0.0; 11];
        expected[0] = 2.0;
        expected[2] = -q;
        expected[3] = 3.0 * q * q;
        for (got, want) in c.to_vector().iter().zip(&expected) {
            worst = worst.max((got - want).abs());
        }
    }
    check(
        "MTM recovers Fourier coefficients",
        worst,
        1e-10,
        "max coefficient error",
    )
}

fn fix_nan(x: f64) -> f64 {
    if x.is_nan() {
        f64::INFINITY
    } else {
        x
    }
}

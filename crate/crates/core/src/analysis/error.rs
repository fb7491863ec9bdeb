use num_complex::Complex64;

use super::AnalysisError;
use crate::assembly::{self, MethodParams, TrefftzDims};
use crate::exact::ExactSolution;
use crate::geometry::{self, angle_grid, BoundaryCurve};
use crate::linalg::DenseMatrix;
use crate::solvers::SolveReport;

/// θ samples used for `e(r) = max_θ e(r, θ)` unless stated otherwise.
pub const DEFAULT_THETA_SAMPLES: usize = 1024;
pub const MIN_THETA_SAMPLES: usize = 360;

/// `|ũ(z) + c − u(z)|`, evaluated as `|ũ(z) − (u(z) − c)|`.
pub fn error_pointwise<E: ExactSolution + ?Sized>(
    report: &SolveReport,
    exact: &E,
    curve: &BoundaryCurve,
    r: f64,
    theta: f64,
) -> Result<f64, AnalysisError> {
    let rho = curve.rho(theta);
    if r < rho * (1.0 - 1e-12) {
        return Err(AnalysisError::PointInsideObstacle { r, theta, rho });
    }
    let z = Complex64::from_polar(r, theta);
    let approx = report.evaluate_shifted(z)?;
    Ok((approx - exact.value_minus(z, report.far_field)).abs())
}

/// `e(r)` over a uniform θ grid of `samples` points.
pub fn error_max_on_circle<E: ExactSolution + ?Sized>(
    report: &SolveReport,
    exact: &E,
    curve: &BoundaryCurve,
    r: f64,
    samples: usize,
) -> Result<f64, AnalysisError> {
    if samples < MIN_THETA_SAMPLES {
        return Err(AnalysisError::TooFewSamples {
            min: MIN_THETA_SAMPLES,
            found: samples,
        });
    }
    angle_grid(samples)
        .into_iter()
        .try_fold(0.0_f64, |m, t| Ok(m.max(error_pointwise(report, exact, curve, r, t)?)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorCurve {
    pub radii: Vec<f64>,
    pub errors: Vec<f64>,
    pub theta_samples: usize,
}

pub fn error_curve<E: ExactSolution + ?Sized>(
    report: &SolveReport,
    exact: &E,
    curve: &BoundaryCurve,
    radii: &[f64],
    samples: usize,
) -> Result<ErrorCurve, AnalysisError> {
    let errors = radii
        .iter()
        .map(|&r| error_max_on_circle(report, exact, curve, r, samples))
        .collect::<Result<_, _>>()?;
    Ok(ErrorCurve {
        radii: radii.to_vec(),
        errors,
        theta_samples: samples,
    })
}

/// `10^lo, 10^{lo+1}, …, 10^hi`.
pub fn decade_ladder(lo: i32, hi: i32) -> Vec<f64> {
    (lo..=hi).map(|e| 10f64.powi(e)).collect()
}

/// Distance between the MFS matrix `A` and the truncated product `SK`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkGap {
    pub m: usize,
    /// `‖A − SK‖_max`.
    pub max_gap: f64,
    /// `‖(A − SK) P‖_max` with `P = I − 11ᵀ/N`, the gap on weight vectors
    /// with `Σ w_j = 0`.
    pub mean_free_gap: f64,
}

/// `‖A − SK‖` along a ladder of truncation orders with `N` fixed. `S` is
/// `N × (2M+1)` and `K` is `(2M+1) × N`, so the product is always `N × N`.
pub fn sk_convergence(
    curve: &BoundaryCurve,
    n: usize,
    radius: f64,
    r0: f64,
    m_ladder: &[usize],
) -> Result<Vec<SkGap>, AnalysisError> {
    if m_ladder.windows(2).any(|w| w[1] <= w[0]) {
        return Err(AnalysisError::InvalidGrid("M ladder must be increasing".into()));
    }
    let coll = geometry::collocation_points(curve, n)?;
    let src = geometry::source_points(radius, n)?;
    let a = assembly::build_a(&coll, &src)?;
    let centering = DenseMatrix::from_fn(n, n, |i, j| f64::from(u8::from(i == j)) - 1.0 / n as f64);
    m_ladder
        .iter()
        .map(|&m| {
            let params = MethodParams::new(radius, r0, TrefftzDims::new(n, m))?;
            let sk = assembly::build_s(&coll, m, r0)?.matmul(&assembly::build_k(&params));
            let diff = DenseMatrix::from_fn(n, n, |i, j| a[(i, j)] - sk[(i, j)]);
            Ok(SkGap {
                m,
                max_gap: diff.max_abs(),
                mean_free_gap: diff.matmul(&centering).max_abs(),
            })
        })
        .collect()
}

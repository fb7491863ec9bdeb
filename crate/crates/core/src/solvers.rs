//! The five end-to-end methods and evaluation of their solutions.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

use crate::assembly::{self, AssemblyError, MethodParams, TrefftzDims, COINCIDENCE_TOL};
use crate::geometry::{self, BoundaryCurve, CollocationSet, GeometryError, SourceSet};
use crate::linalg::{self, DenseMatrix, LinalgError};

/// Relative size of `Σ w_j` (against `‖w‖₁`) above which the weights are
/// flagged as not decaying at infinity under the conventional basis.
pub const WEIGHT_SUM_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Assembly(#[from] AssemblyError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("source radius {radius} must be smaller than rho_min = {rho_min}")]
    SourceOutsideObstacle { radius: f64, rho_min: f64 },
    #[error("evaluation point coincides with source point {0}")]
    CoincidentPoints(usize),
    #[error("the modified basis is undefined at the origin")]
    PointAtOrigin,
    #[error("expected {expected} boundary samples, got {found}")]
    SampleCountMismatch { expected: usize, found: usize },
    #[error("{method} needs parameter `{name}`")]
    MissingParameter { method: MethodKind, name: &'static str },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MethodKind {
    /// Modified Trefftz method: `S y = f`, evaluated as a truncated series.
    Mtm,
    /// Conventional MFS, conventional basis: `A w = f`.
    CmfsCbf,
    /// Conventional MFS, modified basis: `Â w = f`.
    CmfsMbf,
    /// Modified MFS (`SK w = f`) evaluated with the conventional basis.
    MmfsCbf,
    /// Modified MFS (`SK w = f`) evaluated with the modified basis.
    MmfsMbf,
}

impl MethodKind {
    pub const ALL: [MethodKind; 5] = [
        MethodKind::Mtm,
        MethodKind::CmfsCbf,
        MethodKind::CmfsMbf,
        MethodKind::MmfsCbf,
        MethodKind::MmfsMbf,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Mtm => "MTM",
            Self::CmfsCbf => "CMFS-CBF",
            Self::CmfsMbf => "CMFS-MBF",
            Self::MmfsCbf => "MMFS-CBF",
            Self::MmfsMbf => "MMFS-MBF",
        }
    }

    /// Methods whose system involves `S` or `K` and so need `N = 2M + 1`.
    pub fn needs_square_trefftz(self) -> bool {
        matches!(self, Self::Mtm | Self::MmfsCbf | Self::MmfsMbf)
    }

    /// Methods with source points inside the obstacle.
    pub fn uses_sources(self) -> bool {
        !matches!(self, Self::Mtm)
    }

    pub fn basis(self) -> Option<Basis> {
        match self {
            Self::Mtm => None,
            Self::CmfsCbf | Self::MmfsCbf => Some(Basis::Conventional),
            Self::CmfsMbf | Self::MmfsMbf => Some(Basis::Modified),
        }
    }
}

impl fmt::Display for MethodKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown method `{0}` (expected MTM, CMFS-CBF, CMFS-MBF, MMFS-CBF or MMFS-MBF)")]
pub struct UnknownMethod(pub String);

impl FromStr for MethodKind {
    type Err = UnknownMethod;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_uppercase().replace('_', "-");
        MethodKind::ALL
            .into_iter()
            .find(|m| m.name() == key)
            .ok_or_else(|| UnknownMethod(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    /// `ln|z − ζ_j|`
    Conventional,
    /// `ln(|z − ζ_j| / |z|)`
    Modified,
}

/// Dirichlet data on the boundary, as a function of the polar angle or as
/// values at the collocation points.
#[derive(Clone)]
pub enum BoundaryData {
    Function(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
    Samples(Vec<f64>),
}

impl BoundaryData {
    pub fn function(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::Function(Arc::new(f))
    }

    pub fn constant(c: f64) -> Self {
        Self::function(move |_| c)
    }

    pub fn sample(&self, coll: &CollocationSet) -> Result<Vec<f64>, SolveError> {
        match self {
            Self::Function(f) => Ok(coll.angles().iter().map(|&t| f(t)).collect()),
            Self::Samples(v) if v.len() == coll.len() => Ok(v.clone()),
            Self::Samples(v) => Err(SolveError::SampleCountMismatch {
                expected: coll.len(),
                found: v.len(),
            }),
        }
    }
}

impl fmt::Debug for BoundaryData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Function(_) => f.write_str("BoundaryData::Function(..)"),
            Self::Samples(v) => f.debug_tuple("BoundaryData::Samples").field(v).finish(),
        }
    }
}

/// `θ ↦ f(θ) − c`: moves a far-field constant out of the data so the
/// remainder can decay at infinity.
pub fn shift_far_field(f: &BoundaryData, c: f64) -> BoundaryData {
    if c == 0.0 {
        return f.clone();
    }
    match f {
        BoundaryData::Function(g) => {
            let g = Arc::clone(g);
            BoundaryData::function(move |t| g(t) - c)
        }
        BoundaryData::Samples(v) => BoundaryData::Samples(v.iter().map(|x| x - c).collect()),
    }
}

/// `a₀ + Σ_k (a_k cos kθ + b_k sin kθ)(R₀/r)^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrefftzCoefficients {
    pub r0: f64,
    pub a0: f64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl TrefftzCoefficients {
    /// Splits `y = (a₀, a₁, b₁, …, a_M, b_M)`.
    pub fn from_vector(r0: f64, y: &[f64]) -> Self {
        assert!(y.len() % 2 == 1, "coefficient vector must have odd length");
        let (a, b) = y[1..].chunks(2).map(|p| (p[0], p[1])).unzip();
        Self { r0, a0: y[0], a, b }
    }

    pub fn to_vector(&self) -> Vec<f64> {
        let mut y = vec![self.a0];
        for (a, b) in self.a.iter().zip(&self.b) {
            y.push(*a);
            y.push(*b);
        }
        y
    }

    pub fn order(&self) -> usize {
        self.a.len()
    }

    pub fn evaluate(&self, r: f64, theta: f64) -> f64 {
        let q = self.r0 / r;
        let mut scale = 1.0;
        let mut sum = self.a0;
        for (k, (a, b)) in self.a.iter().zip(&self.b).enumerate() {
            scale *= q;
            let (s, c) = ((k + 1) as f64 * theta).sin_cos();
            sum += (a * c + b * s) * scale;
        }
        sum
    }
}

/// Truncated Trefftz series at polar point `(r, θ)`, `r > 0`.
pub fn evaluate_trefftz(c: &TrefftzCoefficients, r: f64, theta: f64) -> f64 {
    c.evaluate(r, theta)
}

/// `ln(|z − ζ| / |z|)`. Far from the source circle this is evaluated as
/// `½ ln1p((|ζ|² − 2 Re(z̄ζ)) / |z|²)` so it stays accurate as the ratio
/// approaches one.
fn log_ratio(z: Complex64, zeta: Complex64, abs_z: f64) -> f64 {
    let zeta_abs = zeta.norm();
    if abs_z > 2.0 * zeta_abs {
        let dot = z.re * zeta.re + z.im * zeta.im;
        0.5 * ((zeta_abs * zeta_abs - 2.0 * dot) / (abs_z * abs_z)).ln_1p()
    } else {
        (z - zeta).norm().ln() - abs_z.ln()
    }
}

/// MFS weights attached to their source points.
#[derive(Debug, Clone, PartialEq)]
pub struct MfsWeights {
    pub sources: SourceSet,
    pub w: Vec<f64>,
    pub basis: Basis,
}

impl MfsWeights {
    pub fn weight_sum(&self) -> f64 {
        self.w.iter().sum()
    }

    /// True when `|Σ w_j| > 1e-6 · ‖w‖₁`; with the conventional basis the
    /// solution then grows like `(Σ w_j) ln r`.
    pub fn sum_flagged(&self) -> bool {
        let l1: f64 = self.w.iter().map(|v| v.abs()).sum();
        self.weight_sum().abs() > WEIGHT_SUM_TOL * l1
    }

    pub fn with_basis(&self, basis: Basis) -> Self {
        Self { basis, ..self.clone() }
    }

    /// `y = K w` with `K` built for characteristic length `r0` and order `m`.
    pub fn to_trefftz(&self, r0: f64, m: usize) -> Result<TrefftzCoefficients, SolveError> {
        let params = MethodParams::new(self.sources.radius(), r0, TrefftzDims::new(self.w.len(), m))?;
        let y = assembly::build_k(&params).mat_vec(&self.w)?;
        Ok(TrefftzCoefficients::from_vector(r0, &y))
    }

    pub fn evaluate(&self, z: Complex64) -> Result<f64, SolveError> {
        let abs_z = z.norm();
        for (j, &zeta) in self.sources.points().iter().enumerate() {
            if (z - zeta).norm() < COINCIDENCE_TOL {
                return Err(SolveError::CoincidentPoints(j));
            }
        }
        let far = abs_z > 2.0 * self.sources.radius();
        match self.basis {
            Basis::Modified => {
                if abs_z == 0.0 {
                    return Err(SolveError::PointAtOrigin);
                }
                Ok(self
                    .w
                    .iter()
                    .zip(self.sources.points())
                    .map(|(w, &zeta)| w * log_ratio(z, zeta, abs_z))
                    .sum())
            }
            // ln|z − ζ| = ln|z| + ln(|z − ζ|/|z|); the split keeps the
            // (Σ w) ln r growth term exact far away.
            Basis::Conventional if far => {
                let tail: f64 = self
                    .w
                    .iter()
                    .zip(self.sources.points())
                    .map(|(w, &zeta)| w * log_ratio(z, zeta, abs_z))
                    .sum();
                Ok(self.weight_sum() * abs_z.ln() + tail)
            }
            Basis::Conventional => Ok(self
                .w
                .iter()
                .zip(self.sources.points())
                .map(|(w, &zeta)| w * (z - zeta).norm().ln())
                .sum()),
        }
    }
}

pub fn evaluate_mfs(wts: &MfsWeights, z: Complex64) -> Result<f64, SolveError> {
    wts.evaluate(z)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Solution {
    Trefftz(TrefftzCoefficients),
    Mfs(MfsWeights),
}

/// Result of one solve. `far_field` is the constant removed from the data
/// before solving; [`SolveReport::evaluate`] adds it back.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub method: MethodKind,
    pub solution: Solution,
    pub system: DenseMatrix,
    pub residual_norm: f64,
    pub cond2: f64,
    pub boundary_data: Vec<f64>,
    pub far_field: f64,
}

impl SolveReport {
    fn new(
        method: MethodKind,
        system: DenseMatrix,
        rhs: Vec<f64>,
        unknowns: &[f64],
        solution: Solution,
    ) -> Result<Self, SolveError> {
        let ax = system.mat_vec(unknowns)?;
        let residual_norm = ax.iter().zip(&rhs).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        let cond2 = linalg::cond2(&system)?;
        Ok(Self {
            method,
            solution,
            system,
            residual_norm,
            cond2,
            boundary_data: rhs,
            far_field: 0.0,
        })
    }

    pub fn with_far_field(mut self, c: f64) -> Self {
        self.far_field = c;
        self
    }

    /// `‖residual‖₂ / ‖f‖₂`, or the absolute residual when `f = 0`.
    pub fn relative_residual(&self) -> f64 {
        let norm = self.boundary_data.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            self.residual_norm
        } else {
            self.residual_norm / norm
        }
    }

    /// The approximation to the shifted problem, `ũ(z)`.
    pub fn evaluate_shifted(&self, z: Complex64) -> Result<f64, SolveError> {
        match &self.solution {
            Solution::Trefftz(c) => {
                if z.norm() == 0.0 {
                    return Err(SolveError::PointAtOrigin);
                }
                Ok(c.evaluate(z.norm(), z.arg()))
            }
            Solution::Mfs(w) => w.evaluate(z),
        }
    }

    /// The approximation to the original problem, `ũ(z) + c`.
    pub fn evaluate(&self, z: Complex64) -> Result<f64, SolveError> {
        Ok(self.evaluate_shifted(z)? + self.far_field)
    }

    pub fn evaluate_polar(&self, r: f64, theta: f64) -> Result<f64, SolveError> {
        self.evaluate(Complex64::from_polar(r, theta))
    }
}

fn require_inside(curve: &BoundaryCurve, radius: f64) -> Result<(), SolveError> {
    let rho_min = curve.rho_min();
    if radius >= rho_min {
        return Err(SolveError::SourceOutsideObstacle { radius, rho_min });
    }
    Ok(())
}

/// Modified Trefftz method: solves `S y = g` for `y = (a₀, a₁, b₁, …)`.
pub fn solve_mtm(
    curve: &BoundaryCurve,
    f: &BoundaryData,
    n: usize,
    m: usize,
    r0: f64,
) -> Result<SolveReport, SolveError> {
    let dims = TrefftzDims::new(n, m);
    if !dims.is_square() {
        return Err(AssemblyError::DimensionMismatch(format!("N = 2M + 1 required, got N = {n}, M = {m}")).into());
    }
    let coll = geometry::collocation_points(curve, n)?;
    let g = f.sample(&coll)?;
    let s = assembly::build_s(&coll, m, r0)?;
    let y = linalg::lu_solve(&s, &g)?;
    let coeffs = TrefftzCoefficients::from_vector(r0, &y);
    SolveReport::new(MethodKind::Mtm, s, g, &y, Solution::Trefftz(coeffs))
}

/// Conventional MFS with either basis: `A w = f` or `Â w = f`.
pub fn solve_mfs(
    curve: &BoundaryCurve,
    f: &BoundaryData,
    n: usize,
    radius: f64,
    basis: Basis,
) -> Result<SolveReport, SolveError> {
    let src = geometry::source_points(radius, n)?;
    require_inside(curve, radius)?;
    let coll = geometry::collocation_points(curve, n)?;
    let rhs = f.sample(&coll)?;
    let (method, a) = match basis {
        Basis::Conventional => (MethodKind::CmfsCbf, assembly::build_a(&coll, &src)?),
        Basis::Modified => (MethodKind::CmfsMbf, assembly::build_a_hat(&coll, &src)?),
    };
    let w = linalg::lu_solve(&a, &rhs)?;
    let weights = MfsWeights {
        sources: src,
        w: w.clone(),
        basis,
    };
    SolveReport::new(method, a, rhs, &w, Solution::Mfs(weights))
}

/// Modified MFS: solves `SK w = f`; `basis` selects how the weights are
/// evaluated afterwards.
pub fn solve_mmfs(
    curve: &BoundaryCurve,
    f: &BoundaryData,
    n: usize,
    m: usize,
    radius: f64,
    r0: f64,
    basis: Basis,
) -> Result<SolveReport, SolveError> {
    let params = MethodParams::new(radius, r0, TrefftzDims::new(n, m))?;
    let src = geometry::source_points(radius, n)?;
    require_inside(curve, radius)?;
    let coll = geometry::collocation_points(curve, n)?;
    let rhs = f.sample(&coll)?;
    let sk = assembly::build_sk(&coll, &params)?;
    let w = linalg::lu_solve(&sk, &rhs)?;
    let method = match basis {
        Basis::Conventional => MethodKind::MmfsCbf,
        Basis::Modified => MethodKind::MmfsMbf,
    };
    let weights = MfsWeights {
        sources: src,
        w: w.clone(),
        basis,
    };
    SolveReport::new(method, sk, rhs, &w, Solution::Mfs(weights))
}

/// A complete problem setup shared by all five methods.
#[derive(Debug, Clone)]
pub struct Problem {
    pub curve: BoundaryCurve,
    pub data: BoundaryData,
    pub n: usize,
    /// Truncation order; defaults to `(N − 1) / 2`.
    pub m: Option<usize>,
    /// Source radius `R`, needed by every MFS-type method.
    pub source_radius: Option<f64>,
    /// Characteristic length `R₀`; defaults to `R` (so `K = K₂`).
    pub char_length: Option<f64>,
    /// Far-field constant removed from the data before solving.
    pub far_field: f64,
}

impl Problem {
    pub fn new(curve: BoundaryCurve, data: BoundaryData, n: usize) -> Self {
        Self {
            curve,
            data,
            n,
            m: None,
            source_radius: None,
            char_length: None,
            far_field: 0.0,
        }
    }

    pub fn order(&self) -> usize {
        self.m.unwrap_or((self.n.saturating_sub(1)) / 2)
    }

    fn radius(&self, method: MethodKind) -> Result<f64, SolveError> {
        self.source_radius.ok_or(SolveError::MissingParameter {
            method,
            name: "source_radius",
        })
    }

    fn r0(&self, method: MethodKind) -> Result<f64, SolveError> {
        self.char_length
            .or(self.source_radius)
            .ok_or(SolveError::MissingParameter {
                method,
                name: "char_length",
            })
    }

    pub fn solve(&self, method: MethodKind) -> Result<SolveReport, SolveError> {
        let f = shift_far_field(&self.data, self.far_field);
        let report = match method {
            MethodKind::Mtm => solve_mtm(&self.curve, &f, self.n, self.order(), self.r0(method)?)?,
            MethodKind::CmfsCbf | MethodKind::CmfsMbf => {
                solve_mfs(&self.curve, &f, self.n, self.radius(method)?, method.basis().unwrap())?
            }
            MethodKind::MmfsCbf | MethodKind::MmfsMbf => solve_mmfs(
                &self.curve,
                &f,
                self.n,
                self.order(),
                self.radius(method)?,
                self.r0(method)?,
                method.basis().unwrap(),
            )?,
        };
        Ok(report.with_far_field(self.far_field))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn circle(r: f64) -> BoundaryCurve {
        BoundaryCurve::circle(r).unwrap()
    }

    fn coeffs(report: &SolveReport) -> &TrefftzCoefficients {
        match &report.solution {
            Solution::Trefftz(c) => c,
            _ => panic!("expected Trefftz coefficients"),
        }
    }

    fn weights(report: &SolveReport) -> &MfsWeights {
        match &report.solution {
            Solution::Mfs(w) => w,
            _ => panic!("expected MFS weights"),
        }
    }

    #[test]
    fn method_names_round_trip() {
        for m in MethodKind::ALL {
            assert_eq!(m.name().parse::<MethodKind>().unwrap(), m);
        }
        assert_eq!("mmfs_mbf".parse::<MethodKind>().unwrap(), MethodKind::MmfsMbf);
        assert!("BEM".parse::<MethodKind>().is_err());
    }

    #[test]
    fn mtm_constant_data() {
        let r = solve_mtm(&circle(1.7), &BoundaryData::constant(2.5), 9, 4, 1.2).unwrap();
        let c = coeffs(&r);
        assert_relative_eq!(c.a0, 2.5, epsilon = 1e-13);
        assert!(c.a.iter().chain(&c.b).all(|v| v.abs() < 1e-13));
    }

    #[test]
    fn mtm_single_cosine_mode() {
        let f = BoundaryData::function(f64::cos);
        let r = solve_mtm(&circle(1.0), &f, 7, 3, 1.0).unwrap();
        let c = coeffs(&r);
        assert_relative_eq!(c.a[0], 1.0, epsilon = 1e-13);
        assert!(c.a0.abs() < 1e-13);
        assert!(c.a[1..].iter().chain(&c.b).all(|v| v.abs() < 1e-13));

        let r = solve_mtm(&circle(2.0), &f, 7, 3, 1.0).unwrap();
        assert_relative_eq!(coeffs(&r).a[0], 2.0, epsilon = 1e-13);
    }

    #[test]
    fn mtm_requires_square() {
        let err = solve_mtm(&circle(1.0), &BoundaryData::constant(1.0), 8, 3, 1.0);
        assert!(matches!(
            err,
            Err(SolveError::Assembly(AssemblyError::DimensionMismatch(_)))
        ));
    }

    #[test]
    fn mfs_bases_agree_on_unit_circle() {
        let f = BoundaryData::function(|t| (2.0 * t).sin() + 0.3);
        let a = solve_mfs(&circle(1.0), &f, 11, 0.5, Basis::Conventional).unwrap();
        let b = solve_mfs(&circle(1.0), &f, 11, 0.5, Basis::Modified).unwrap();
        for (x, y) in weights(&a).w.iter().zip(&weights(&b).w) {
            assert_relative_eq!(x, y, max_relative = 1e-9);
        }
    }

    #[test]
    fn zero_data_zero_solution() {
        let f = BoundaryData::constant(0.0);
        let r = solve_mfs(&circle(1.0), &f, 9, 0.5, Basis::Conventional).unwrap();
        assert!(weights(&r).w.iter().all(|&v| v == 0.0));
        assert_eq!(r.residual_norm, 0.0);
        let r = solve_mmfs(&circle(1.0), &f, 9, 4, 0.5, 0.5, Basis::Modified).unwrap();
        assert!(weights(&r).w.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn sources_must_be_inside() {
        let f = BoundaryData::constant(1.0);
        let err = solve_mfs(&circle(1.0), &f, 9, 1.0, Basis::Modified).unwrap_err();
        assert!(matches!(err, SolveError::SourceOutsideObstacle { .. }));
        let ep = BoundaryCurve::epitrochoid(3.0, 1.0).unwrap();
        let err = solve_mmfs(&ep, &f, 9, 4, 3.2, 3.2, Basis::Modified).unwrap_err();
        assert!(matches!(err, SolveError::SourceOutsideObstacle { .. }));
    }

    #[test]
    fn sample_count_checked() {
        let f = BoundaryData::Samples(vec![1.0; 4]);
        assert!(matches!(
            solve_mfs(&circle(1.0), &f, 5, 0.5, Basis::Modified),
            Err(SolveError::SampleCountMismatch { expected: 5, found: 4 })
        ));
    }

    #[test]
    fn trefftz_evaluation() {
        let c = TrefftzCoefficients::from_vector(1.0, &[5.0, 0.0, 0.0]);
        assert_eq!(c.evaluate(3.0, 0.4), 5.0);
        let c = TrefftzCoefficients::from_vector(1.0, &[0.0, 1.0, 0.0]);
        assert_relative_eq!(evaluate_trefftz(&c, 4.0, 0.3), 0.3f64.cos() / 4.0);
        assert_eq!(c.to_vector(), vec![0.0, 1.0, 0.0]);
        let c = TrefftzCoefficients::from_vector(2.0, &[0.0, 1.0, -2.0, 0.5, 3.0]);
        let r = 1e10;
        let bound = (1.0 + 2.0 + 0.5 + 3.0) * (2.0 / r);
        assert!(c.evaluate(r, 1.1).abs() <= bound);
    }

    #[test]
    fn mfs_evaluation() {
        let r = 0.7;
        let sources = geometry::source_points(r, 4).unwrap();
        let mut w = vec![0.0; 4];
        w[0] = 1.0;
        let wts = MfsWeights {
            sources,
            w,
            basis: Basis::Conventional,
        };
        assert_relative_eq!(
            evaluate_mfs(&wts, Complex64::new(2.0 * r, 0.0)).unwrap(),
            r.ln(),
            epsilon = 1e-15
        );
        assert!(matches!(
            wts.evaluate(Complex64::new(r, 0.0)),
            Err(SolveError::CoincidentPoints(0))
        ));
        let modified = wts.with_basis(Basis::Modified);
        assert!(modified.evaluate(Complex64::new(1e12, 3.0)).unwrap().abs() < 1e-11);
        assert!(matches!(
            modified.evaluate(Complex64::new(0.0, 0.0)),
            Err(SolveError::PointAtOrigin)
        ));
    }

    #[test]
    fn conventional_basis_grows_like_log() {
        let sources = geometry::source_points(0.5, 5).unwrap();
        let wts = MfsWeights {
            sources,
            w: vec![0.4, 0.1, -0.2, 0.3, 0.2],
            basis: Basis::Conventional,
        };
        assert!(wts.sum_flagged());
        let s = wts.weight_sum();
        for r in [1e4, 1e8, 1e12] {
            let v = wts.evaluate(Complex64::from_polar(r, 0.9)).unwrap();
            assert!((v - s * f64::ln(r)).abs() < 1e-3 * (1e4 / r).max(1e-9) + 1e-12);
        }
        // split and direct branches agree near the switch radius
        let z1 = Complex64::from_polar(0.999_999 * 1.0, 0.3);
        let z2 = Complex64::from_polar(1.000_001 * 1.0, 0.3);
        let (v1, v2) = (wts.evaluate(z1).unwrap(), wts.evaluate(z2).unwrap());
        assert!((v1 - v2).abs() < 1e-5);
    }

    #[test]
    fn shift_far_field_behaviour() {
        let f = BoundaryData::function(|t| 1.0 + t);
        let g = shift_far_field(&f, 0.0);
        let coll = geometry::collocation_points(&circle(1.0), 4).unwrap();
        assert_eq!(f.sample(&coll).unwrap(), g.sample(&coll).unwrap());
        let h = shift_far_field(&BoundaryData::constant(1.0), 1.0);
        assert!(h.sample(&coll).unwrap().iter().all(|&v| v == 0.0));
        let s = shift_far_field(&BoundaryData::Samples(vec![3.0; 4]), 1.0);
        assert_eq!(s.sample(&coll).unwrap(), vec![2.0; 4]);
    }

    #[test]
    fn problem_dispatch() {
        let mut p = Problem::new(circle(1.0), BoundaryData::constant(3.0), 9);
        assert!(matches!(
            p.solve(MethodKind::CmfsCbf),
            Err(SolveError::MissingParameter { .. })
        ));
        p.source_radius = Some(0.5);
        p.far_field = 3.0;
        for m in MethodKind::ALL {
            let r = p.solve(m).unwrap();
            assert_eq!(r.method, m);
            assert!((r.evaluate_polar(5.0, 0.2).unwrap() - 3.0).abs() < 1e-12);
        }
    }
}

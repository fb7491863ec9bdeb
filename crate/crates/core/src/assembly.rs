//! Matrix assembly for the collocation systems and their closed-form factors.
//!
//! Trefftz-side matrices index the coefficient vector
//! `y = (a₀, a₁, b₁, …, a_M, b_M)`: zero-based row/column `0` is the constant
//! mode, `2k−1` the cosine of order `k` and `2k` the sine of order `k`.
//!
//! `K` and `S` are always assembled from their entrywise closed forms; the
//! factorizations `K = T_R T_θ`, `S = T_θᵀ S_{R₀}` and `SK = T_θᵀ Λ T_θ` are
//! available separately so tests can check one route against the other.

use num_complex::Complex64;
use thiserror::Error;

use crate::geometry::{angle_grid, CollocationSet, SourceSet};
use crate::linalg::DenseMatrix;

/// Distances below this between a collocation and a source point are rejected.
pub const COINCIDENCE_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AssemblyError {
    #[error("collocation point {row} coincides with source point {col} (distance {distance:e})")]
    CoincidentPoints { row: usize, col: usize, distance: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parameter `{name}` must be positive and finite, got {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("collocation point {0} is at the origin")]
    PointAtOrigin(usize),
}

/// Collocation count `N` and truncation order `M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrefftzDims {
    n: usize,
    m: usize,
}

impl TrefftzDims {
    /// Any `N ≥ 1`, `M ≥ 0`; used for rectangular `S` / `K`.
    pub fn new(n: usize, m: usize) -> Self {
        Self { n, m }
    }

    /// The square configuration `N = 2M + 1`.
    pub fn square(n: usize) -> Result<Self, AssemblyError> {
        if n < 3 || n.is_multiple_of(2) {
            return Err(AssemblyError::DimensionMismatch(format!(
                "N must be odd and at least 3 for a square system, got {n}"
            )));
        }
        Ok(Self { n, m: (n - 1) / 2 })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of Trefftz coefficients, `2M + 1`.
    pub fn modes(&self) -> usize {
        2 * self.m + 1
    }

    pub fn is_square(&self) -> bool {
        self.n == self.modes()
    }

    fn require_square(&self) -> Result<(), AssemblyError> {
        if self.is_square() {
            Ok(())
        } else {
            Err(AssemblyError::DimensionMismatch(format!(
                "N = 2M + 1 required, got N = {}, M = {}",
                self.n, self.m
            )))
        }
    }
}

/// Source radius `R`, characteristic length `R₀` and dimensions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MethodParams {
    source_radius: f64,
    char_length: f64,
    dims: TrefftzDims,
}

impl MethodParams {
    pub fn new(source_radius: f64, char_length: f64, dims: TrefftzDims) -> Result<Self, AssemblyError> {
        check_positive("R", source_radius)?;
        check_positive("R0", char_length)?;
        Ok(Self {
            source_radius,
            char_length,
            dims,
        })
    }

    pub fn source_radius(&self) -> f64 {
        self.source_radius
    }

    pub fn char_length(&self) -> f64 {
        self.char_length
    }

    pub fn dims(&self) -> TrefftzDims {
        self.dims
    }

    /// True when `R₀ > ρ_min`, so entries of `S` may exceed one. Not an error.
    pub fn r0_exceeds(&self, rho_min: f64) -> bool {
        self.char_length > rho_min
    }
}

fn check_positive(name: &'static str, value: f64) -> Result<(), AssemblyError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(AssemblyError::InvalidParameter { name, value })
    }
}

/// `diag(1, d(1), d(1), d(2), d(2), …, d(M), d(M))`.
fn mode_diagonal(m: usize, d: impl Fn(usize) -> f64) -> DenseMatrix {
    let mut diag = Vec::with_capacity(2 * m + 1);
    diag.push(1.0);
    for k in 1..=m {
        let v = d(k);
        diag.push(v);
        diag.push(v);
    }
    DenseMatrix::diagonal(&diag)
}

/// Value of the trigonometric mode for Trefftz index `idx` at angle `theta`.
fn mode_value(idx: usize, theta: f64) -> (usize, f64) {
    if idx == 0 {
        return (0, 1.0);
    }
    let k = idx.div_ceil(2);
    let v = if idx % 2 == 1 {
        (k as f64 * theta).cos()
    } else {
        (k as f64 * theta).sin()
    };
    (k, v)
}

fn log_distance_matrix(
    coll: &CollocationSet,
    src: &SourceSet,
    offset: impl Fn(Complex64) -> f64,
) -> Result<DenseMatrix, AssemblyError> {
    if coll.len() != src.len() {
        return Err(AssemblyError::DimensionMismatch(format!(
            "{} collocation points but {} sources",
            coll.len(),
            src.len()
        )));
    }
    let n = coll.len();
    let mut a = DenseMatrix::zeros(n, n);
    for (k, &z) in coll.points().iter().enumerate() {
        let shift = offset(z);
        for (j, &zeta) in src.points().iter().enumerate() {
            let distance = (z - zeta).norm();
            if distance < COINCIDENCE_TOL {
                return Err(AssemblyError::CoincidentPoints {
                    row: k,
                    col: j,
                    distance,
                });
            }
            a[(k, j)] = distance.ln() - shift;
        }
    }
    Ok(a)
}

/// Conventional MFS matrix `A_{k,j} = ln|z_k − ζ_j|`.
pub fn build_a(coll: &CollocationSet, src: &SourceSet) -> Result<DenseMatrix, AssemblyError> {
    log_distance_matrix(coll, src, |_| 0.0)
}

/// Modified-basis MFS matrix `Â_{k,j} = ln(|z_k − ζ_j| / |z_k|)`.
pub fn build_a_hat(coll: &CollocationSet, src: &SourceSet) -> Result<DenseMatrix, AssemblyError> {
    if let Some(k) = coll.points().iter().position(|z| z.norm() == 0.0) {
        return Err(AssemblyError::PointAtOrigin(k));
    }
    log_distance_matrix(coll, src, |z| z.norm().ln())
}

/// Trefftz collocation matrix, `N × (2M+1)`:
/// `S_{j,·} = (1, (R₀/ρ_j)^k cos kθ_j, (R₀/ρ_j)^k sin kθ_j, …)`.
pub fn build_s(coll: &CollocationSet, m: usize, r0: f64) -> Result<DenseMatrix, AssemblyError> {
    check_positive("R0", r0)?;
    let angles = coll.angles();
    let radii = coll.radii();
    Ok(DenseMatrix::from_fn(coll.len(), 2 * m + 1, |j, idx| {
        let (k, trig) = mode_value(idx, angles[j]);
        (r0 / radii[j]).powi(k as i32) * trig
    }))
}

/// `(T_θ)_{idx,j}`: mode `idx` evaluated at `θ_j`, `(2M+1) × N`.
pub fn build_t_theta(n: usize, m: usize) -> DenseMatrix {
    let angles = angle_grid(n);
    DenseMatrix::from_fn(2 * m + 1, n, |idx, j| mode_value(idx, angles[j]).1)
}

/// `T_R = diag(1, −(R/R₀), −(R/R₀), …, −(1/M)(R/R₀)^M, −(1/M)(R/R₀)^M)`.
pub fn build_t_r(m: usize, r: f64, r0: f64) -> DenseMatrix {
    let q = r / r0;
    mode_diagonal(m, |k| -q.powi(k as i32) / k as f64)
}

/// `S_{R₀} = diag(1, (R₀/ρ), (R₀/ρ), …, (R₀/ρ)^M, (R₀/ρ)^M)` for a circle of radius ρ.
pub fn build_s_r0(m: usize, r0: f64, rho: f64) -> DenseMatrix {
    let q = r0 / rho;
    mode_diagonal(m, |k| q.powi(k as i32))
}

/// `Λ = S_{R₀} T_R = diag(1, −(R/ρ), −(R/ρ), …, −(1/M)(R/ρ)^M, …)`.
pub fn build_lambda(m: usize, r: f64, rho: f64) -> DenseMatrix {
    let q = r / rho;
    mode_diagonal(m, |k| -q.powi(k as i32) / k as f64)
}

/// MFS→Trefftz transform `K`, `(2M+1) × N`:
/// `K_{2k,j} = −(1/k)(R/R₀)^k cos kθ_j`, first row all ones.
pub fn build_k(params: &MethodParams) -> DenseMatrix {
    let dims = params.dims();
    let angles = angle_grid(dims.n());
    let q = params.source_radius() / params.char_length();
    DenseMatrix::from_fn(dims.modes(), dims.n(), |idx, j| {
        let (k, trig) = mode_value(idx, angles[j]);
        if k == 0 {
            1.0
        } else {
            -q.powi(k as i32) / k as f64 * trig
        }
    })
}

/// Closed-form `T_θ⁻¹ = T_θᵀ D⁻²` for `N = 2M + 1`.
pub fn explicit_t_theta_inverse(n: usize, m: usize) -> Result<DenseMatrix, AssemblyError> {
    TrefftzDims::new(n, m).require_square()?;
    let angles = angle_grid(n);
    let nf = n as f64;
    Ok(DenseMatrix::from_fn(n, 2 * m + 1, |j, idx| {
        let (k, trig) = mode_value(idx, angles[j]);
        if k == 0 {
            1.0 / nf
        } else {
            2.0 / nf * trig
        }
    }))
}

/// Closed-form `K⁻¹ = T_θ⁻¹ T_R⁻¹`:
/// `(K⁻¹)_{j,2k} = −(2k/N)(R₀/R)^k cos kθ_j`, first column `1/N`.
pub fn explicit_k_inverse(params: &MethodParams) -> Result<DenseMatrix, AssemblyError> {
    let dims = params.dims();
    dims.require_square()?;
    let angles = angle_grid(dims.n());
    let nf = dims.n() as f64;
    let q = params.char_length() / params.source_radius();
    Ok(DenseMatrix::from_fn(dims.n(), dims.modes(), |j, idx| {
        let (k, trig) = mode_value(idx, angles[j]);
        if k == 0 {
            1.0 / nf
        } else {
            -2.0 * k as f64 / nf * q.powi(k as i32) * trig
        }
    }))
}

/// The modified-MFS system matrix `SK`, `N × N`, for `N = 2M + 1`.
pub fn build_sk(coll: &CollocationSet, params: &MethodParams) -> Result<DenseMatrix, AssemblyError> {
    let dims = params.dims();
    dims.require_square()?;
    if coll.len() != dims.n() {
        return Err(AssemblyError::DimensionMismatch(format!(
            "{} collocation points for N = {}",
            coll.len(),
            dims.n()
        )));
    }
    let s = build_s(coll, dims.m(), params.char_length())?;
    Ok(s.matmul(&build_k(params)))
}

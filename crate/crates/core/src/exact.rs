//! Closed-form exterior harmonic functions used as reference solutions.

use num_complex::Complex64;

use crate::geometry::BoundaryCurve;
use crate::solvers::BoundaryData;

pub trait ExactSolution: Sync {
    fn value(&self, z: Complex64) -> f64;

    /// `u(z) − c`. Implementations override this when the subtraction would
    /// cancel catastrophically far from the obstacle.
    fn value_minus(&self, z: Complex64, c: f64) -> f64 {
        self.value(z) - c
    }
}

impl<F: Fn(Complex64) -> f64 + Sync> ExactSolution for F {
    fn value(&self, z: Complex64) -> f64 {
        self(z)
    }
}

/// `u(x, y) = exp(x / (x² + y²)) cos(y / (x² + y²))`, i.e. `Re exp(1/z)`,
/// which tends to 1 at infinity.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExpInverse;

impl ExpInverse {
    fn args(z: Complex64) -> (f64, f64) {
        let q = z.norm_sqr();
        (z.re / q, z.im / q)
    }
}

impl ExactSolution for ExpInverse {
    fn value(&self, z: Complex64) -> f64 {
        let (a, b) = Self::args(z);
        a.exp() * b.cos()
    }

    fn value_minus(&self, z: Complex64, c: f64) -> f64 {
        // e^a cos b − 1 = expm1(a) cos b − 2 sin²(b/2)
        let (a, b) = Self::args(z);
        let half = (0.5 * b).sin();
        a.exp_m1() * b.cos() - 2.0 * half * half + (1.0 - c)
    }
}

/// The constant function.
#[derive(Debug, Clone, Copy)]
pub struct Constant(pub f64);

impl ExactSolution for Constant {
    fn value(&self, _z: Complex64) -> f64 {
        self.0
    }
}

/// Decaying exterior extension of Fourier data on a circle of radius `ρ`:
/// `a₀ + Σ_k (a_k cos kθ + b_k sin kθ)(ρ/r)^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleFourier {
    pub rho: f64,
    pub a0: f64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl CircleFourier {
    /// Boundary values `f(θ)` of the series on the circle itself.
    pub fn boundary_value(&self, theta: f64) -> f64 {
        self.value(Complex64::from_polar(self.rho, theta))
    }
}

impl ExactSolution for CircleFourier {
    fn value(&self, z: Complex64) -> f64 {
        let (r, theta) = z.to_polar();
        let q = self.rho / r;
        let order = self.a.len().max(self.b.len());
        let mut sum = self.a0;
        for k in 1..=order {
            let (s, c) = (k as f64 * theta).sin_cos();
            let ak = self.a.get(k - 1).copied().unwrap_or(0.0);
            let bk = self.b.get(k - 1).copied().unwrap_or(0.0);
            sum += (ak * c + bk * s) * q.powi(k as i32);
        }
        sum
    }
}

/// Restriction of `exact` to the boundary, `θ ↦ u(ρ(θ) e^{iθ})`.
pub fn boundary_trace<E>(curve: &BoundaryCurve, exact: E) -> BoundaryData
where
    E: ExactSolution + Send + 'static,
{
    let curve = curve.clone();
    BoundaryData::function(move |t| exact.value(Complex64::from_polar(curve.rho(t), t)))
}

//! Star-shaped obstacle boundaries `r = ρ(θ)` and the collocation / source
//! point sets placed on and inside them.

use std::f64::consts::TAU;

use num_complex::Complex64;
use thiserror::Error;

/// Default number of θ samples used for `ρ_min` / `ρ_max`.
pub const DEFAULT_EXTREMA_GRID: usize = 4096;

/// Smallest grid accepted by [`rho_extrema`].
pub const MIN_EXTREMA_GRID: usize = 360;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("curve parameter `{name}` must be positive and finite, got {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("need at least {min} points, got {found}")]
    TooFewPoints { min: usize, found: usize },
    #[error("extrema grid must have at least {MIN_EXTREMA_GRID} points, got {0}")]
    GridTooSmall(usize),
}

/// Radius samples on the uniform grid `θ_i = 2π i / n`, interpolated linearly
/// (periodically) between samples.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSamples(Vec<f64>);

impl RadialSamples {
    pub fn new(samples: Vec<f64>) -> Result<Self, GeometryError> {
        if samples.len() < 3 {
            return Err(GeometryError::TooFewPoints {
                min: 3,
                found: samples.len(),
            });
        }
        if let Some(&bad) = samples.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
            return Err(GeometryError::NonPositiveRadius(bad));
        }
        Ok(Self(samples))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    fn at(&self, theta: f64) -> f64 {
        let n = self.0.len();
        let pos = theta / TAU * n as f64;
        let i = (pos.floor() as usize).min(n - 1);
        let frac = pos - i as f64;
        let lo = self.0[i];
        let hi = self.0[(i + 1) % n];
        lo + frac * (hi - lo)
    }
}

/// Obstacle boundary `Γ = {(r, θ) : r = ρ(θ)}`.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryCurve {
    Circle {
        radius: f64,
    },
    /// `ρ = ab / sqrt(a² sin²θ + b² cos²θ)`
    Ellipse {
        a: f64,
        b: f64,
    },
    /// `ρ = sqrt((a+b)² + 1 − 2(a+b) cos(aθ/b))`
    Epitrochoid {
        a: f64,
        b: f64,
    },
    CustomRadial(RadialSamples),
}

impl BoundaryCurve {
    pub fn circle(radius: f64) -> Result<Self, GeometryError> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(GeometryError::NonPositiveRadius(radius));
        }
        Ok(Self::Circle { radius })
    }

    pub fn ellipse(a: f64, b: f64) -> Result<Self, GeometryError> {
        positive("a", a)?;
        positive("b", b)?;
        Ok(Self::Ellipse { a, b })
    }

    /// Epitrochoid. The minimum of `ρ²` is `(a+b−1)²`, so `a + b = 1` would
    /// put the curve through the origin.
    pub fn epitrochoid(a: f64, b: f64) -> Result<Self, GeometryError> {
        positive("a", a)?;
        positive("b", b)?;
        let min_sq = (a + b - 1.0).powi(2);
        if min_sq <= 0.0 {
            return Err(GeometryError::NonPositiveRadius(0.0));
        }
        Ok(Self::Epitrochoid { a, b })
    }

    pub fn custom(samples: Vec<f64>) -> Result<Self, GeometryError> {
        Ok(Self::CustomRadial(RadialSamples::new(samples)?))
    }

    /// `ρ(θ)` with θ reduced modulo 2π.
    pub fn rho(&self, theta: f64) -> f64 {
        let theta = theta.rem_euclid(TAU);
        match self {
            Self::Circle { radius } => *radius,
            Self::Ellipse { a, b } => {
                let (s, c) = theta.sin_cos();
                a * b / (a * a * s * s + b * b * c * c).sqrt()
            }
            Self::Epitrochoid { a, b } => {
                let ab = a + b;
                (ab * ab + 1.0 - 2.0 * ab * (a * theta / b).cos()).sqrt()
            }
            Self::CustomRadial(samples) => samples.at(theta),
        }
    }

    pub fn is_circle(&self) -> bool {
        matches!(self, Self::Circle { .. })
    }

    /// `(ρ_min, ρ_max)` over the default 4096-point grid.
    pub fn extrema(&self) -> (f64, f64) {
        rho_extrema(self, DEFAULT_EXTREMA_GRID).expect("default grid is large enough")
    }

    pub fn rho_min(&self) -> f64 {
        self.extrema().0
    }

    pub fn rho_max(&self) -> f64 {
        self.extrema().1
    }
}

fn positive(name: &'static str, value: f64) -> Result<(), GeometryError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(GeometryError::InvalidParameter { name, value })
    }
}

/// Minimum and maximum of `ρ` over a uniform θ grid. Exact for circles.
pub fn rho_extrema(curve: &BoundaryCurve, grid_size: usize) -> Result<(f64, f64), GeometryError> {
    if grid_size < MIN_EXTREMA_GRID {
        return Err(GeometryError::GridTooSmall(grid_size));
    }
    if let BoundaryCurve::Circle { radius } = curve {
        return Ok((*radius, *radius));
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..grid_size {
        let r = curve.rho(TAU * i as f64 / grid_size as f64);
        lo = lo.min(r);
        hi = hi.max(r);
    }
    // Sample-based curves attain their extrema exactly at the samples.
    if let BoundaryCurve::CustomRadial(s) = curve {
        for &r in s.values() {
            lo = lo.min(r);
            hi = hi.max(r);
        }
    }
    Ok((lo, hi))
}

/// The uniform angle grid `θ_j = 2π(j−1)/N`, zero-based here.
pub fn angle_grid(n: usize) -> Vec<f64> {
    (0..n).map(|j| TAU * j as f64 / n as f64).collect()
}

/// Collocation points `z_j = ρ(θ_j) e^{iθ_j}` on the boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct CollocationSet {
    angles: Vec<f64>,
    radii: Vec<f64>,
    points: Vec<Complex64>,
}

impl CollocationSet {
    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }
}

pub fn collocation_points(curve: &BoundaryCurve, n: usize) -> Result<CollocationSet, GeometryError> {
    if n < 3 {
        return Err(GeometryError::TooFewPoints { min: 3, found: n });
    }
    let angles = angle_grid(n);
    let radii: Vec<f64> = angles.iter().map(|&t| curve.rho(t)).collect();
    let points = angles
        .iter()
        .zip(&radii)
        .map(|(&t, &r)| Complex64::from_polar(r, t))
        .collect();
    Ok(CollocationSet { angles, radii, points })
}

/// Source points `ζ_j = R e^{iθ_j}` on a circle inside the obstacle.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceSet {
    radius: f64,
    angles: Vec<f64>,
    points: Vec<Complex64>,
}

impl SourceSet {
    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }
}

pub fn source_points(radius: f64, n: usize) -> Result<SourceSet, GeometryError> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(GeometryError::NonPositiveRadius(radius));
    }
    if n < 3 {
        return Err(GeometryError::TooFewPoints { min: 3, found: n });
    }
    let angles = angle_grid(n);
    let points = angles.iter().map(|&t| Complex64::from_polar(radius, t)).collect();
    Ok(SourceSet { radius, angles, points })
}

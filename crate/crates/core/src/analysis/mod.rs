//! Conditioning sweeps, closed-form condition numbers, error metrics and
//! growth-rate fits.

mod closed_form;
mod error;
mod fit;
mod sweep;

pub use closed_form::*;
pub use error::*;
pub use fit::*;
pub use sweep::*;

use thiserror::Error;

use crate::assembly::AssemblyError;
use crate::geometry::GeometryError;
use crate::linalg::LinalgError;
use crate::solvers::SolveError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Assembly(#[from] AssemblyError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("point (r = {r}, theta = {theta}) lies inside the obstacle (rho = {rho})")]
    PointInsideObstacle { r: f64, theta: f64, rho: f64 },
    #[error("need at least {min} theta samples, got {found}")]
    TooFewSamples { min: usize, found: usize },
    #[error("growth fit needs at least 4 points, got {0}")]
    TooFewPoints(usize),
    #[error("growth fit is degenerate: all N are equal")]
    DegenerateFit,
    #[error("invalid fit data: {0}")]
    InvalidData(String),
}

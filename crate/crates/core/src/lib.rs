//! Meshless solvers for the two-dimensional exterior Dirichlet problem of
//! the Laplace equation.
//!
//! Three families of methods are provided:
//!
//! - the method of fundamental solutions (MFS) with conventional basis
//!   functions `ln|z − ζ_j|` or decaying modified ones `ln(|z − ζ_j| / |z|)`,
//! - the modified Trefftz method (MTM), a truncated harmonic series scaled by
//!   a characteristic length `R₀`,
//! - the modified MFS (MMFS), which solves the transformed system `SK w = f`
//!   and evaluates the weights through either MFS basis.
//!
//! The [`analysis`] module carries the conditioning studies: condition-number
//! sweeps, closed-form condition numbers for circular boundaries, the optimal
//! characteristic length, far-field error curves and growth-rate fits.
//! [`verify`] bundles the closed-form identities into a self-check table.

pub mod analysis;
pub mod assembly;
pub mod exact;
pub mod geometry;
pub mod linalg;
pub mod solvers;
pub mod verify;

pub use assembly::{MethodParams, TrefftzDims};
pub use geometry::{BoundaryCurve, CollocationSet, SourceSet};
pub use linalg::DenseMatrix;
pub use solvers::{Basis, BoundaryData, MethodKind, SolveReport};

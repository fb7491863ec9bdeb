use std::io::{self, Write};

use rayon::prelude::*;

use super::AnalysisError;
use crate::assembly::{self, MethodParams, TrefftzDims};
use crate::geometry::{self, BoundaryCurve};
use crate::linalg::{self, is_reliable, LinalgError};

/// Step of the default `R₀` grid.
pub const DEFAULT_R0_STEP: f64 = 0.005;
/// Upper end of the default `R₀` grid.
pub const DEFAULT_R0_MAX: f64 = 15.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    R0,
    R,
    N,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            Self::R0 => "R0",
            Self::R => "R",
            Self::N => "N",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CondPoint {
    pub param: f64,
    /// `NaN` when the SVD failed to converge.
    pub cond: f64,
    pub reliable: bool,
}

/// `cond₂` along a parameter grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CondProfile {
    pub parameter: SweepParameter,
    pub points: Vec<CondPoint>,
}

impl CondProfile {
    pub fn grid(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.param).collect()
    }

    pub fn conds(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.cond).collect()
    }

    /// Smallest reliable condition number; ties go to the smaller parameter.
    pub fn argmin(&self) -> Option<(f64, f64)> {
        let mut best: Option<(f64, f64)> = None;
        for p in self.points.iter().filter(|p| p.reliable) {
            if best.is_none_or(|(_, c)| p.cond < c) {
                best = Some((p.param, p.cond));
            }
        }
        best
    }

    /// `param,cond2,reliable` with a header line.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "param,cond2,reliable")?;
        for p in &self.points {
            writeln!(out, "{:.16e},{:.16e},{}", p.param, p.cond, p.reliable)?;
        }
        Ok(())
    }
}

/// `step, 2·step, …` up to and including `stop` (within rounding).
pub fn uniform_grid(step: f64, stop: f64) -> Vec<f64> {
    assert!(step > 0.0 && stop >= step);
    let count = (stop / step + 1e-9).floor() as usize;
    (1..=count).map(|i| i as f64 * step).collect()
}

/// `(0, 15]` in steps of 0.005.
pub fn default_r0_grid() -> Vec<f64> {
    uniform_grid(DEFAULT_R0_STEP, DEFAULT_R0_MAX)
}

fn check_grid(grid: &[f64]) -> Result<(), AnalysisError> {
    if grid.is_empty() {
        return Err(AnalysisError::InvalidGrid("grid is empty".into()));
    }
    if grid.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(AnalysisError::InvalidGrid("grid values must be positive".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(AnalysisError::InvalidGrid("grid must be strictly increasing".into()));
    }
    Ok(())
}

/// Evaluates `cond` on every grid point in parallel; the result keeps grid order.
fn profile<F>(parameter: SweepParameter, grid: &[f64], cond: F) -> Result<CondProfile, AnalysisError>
where
    F: Fn(f64) -> Result<f64, AnalysisError> + Sync,
{
    check_grid(grid)?;
    let points = grid
        .par_iter()
        .map(|&param| match cond(param) {
            Ok(c) => Ok(CondPoint {
                param,
                cond: c,
                reliable: is_reliable(c),
            }),
            Err(AnalysisError::Linalg(LinalgError::NoConvergence { .. })) => Ok(CondPoint {
                param,
                cond: f64::NAN,
                reliable: false,
            }),
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CondProfile { parameter, points })
}

/// `cond₂(S)` against `R₀` for fixed `N = 2M + 1`.
pub fn cond_sweep_s(curve: &BoundaryCurve, n: usize, m: usize, r0_grid: &[f64]) -> Result<CondProfile, AnalysisError> {
    if !TrefftzDims::new(n, m).is_square() {
        return Err(crate::assembly::AssemblyError::DimensionMismatch(format!(
            "N = 2M + 1 required, got N = {n}, M = {m}"
        ))
        .into());
    }
    let coll = geometry::collocation_points(curve, n)?;
    profile(SweepParameter::R0, r0_grid, |r0| {
        Ok(linalg::cond2(&assembly::build_s(&coll, m, r0)?)?)
    })
}

/// Grid-search optimal `R₀` for each odd `N ≥ 5`.
pub fn optimal_r0_vs_n(
    curve: &BoundaryCurve,
    n_list: &[usize],
    r0_grid: &[f64],
) -> Result<Vec<(usize, f64)>, AnalysisError> {
    if let Some(bad) = n_list.iter().find(|&&n| n < 5 || n.is_multiple_of(2)) {
        return Err(AnalysisError::InvalidGrid(format!(
            "N must be odd and at least 5, got {bad}"
        )));
    }
    n_list
        .iter()
        .map(|&n| {
            let prof = cond_sweep_s(curve, n, (n - 1) / 2, r0_grid)?;
            let (r0, _) = prof
                .argmin()
                .ok_or_else(|| AnalysisError::InvalidGrid("no reliable point in sweep".into()))?;
            Ok((n, r0))
        })
        .collect()
}

/// `cond₂(K₁)` (`R₀ = 1`) and `cond₂(K₂)` (`R₀ = R`) against the source radius.
pub fn cond_k_comparison(n: usize, r_grid: &[f64]) -> Result<(CondProfile, CondProfile), AnalysisError> {
    let dims = TrefftzDims::square(n)?;
    let k_cond = |r: f64, r0: f64| -> Result<f64, AnalysisError> {
        let params = MethodParams::new(r, r0, dims)?;
        Ok(linalg::cond2(&assembly::build_k(&params))?)
    };
    let k1 = profile(SweepParameter::R, r_grid, |r| k_cond(r, 1.0))?;
    let k2 = profile(SweepParameter::R, r_grid, |r| k_cond(r, r))?;
    Ok((k1, k2))
}

/// `cond₂(A)` and `cond₂(SK)` (with `K = K₂`) against odd `N` for a fixed source radius.
pub fn cond_a_vs_sk(
    curve: &BoundaryCurve,
    radius: f64,
    n_list: &[usize],
) -> Result<(CondProfile, CondProfile), AnalysisError> {
    let grid: Vec<f64> = n_list.iter().map(|&n| n as f64).collect();
    let a = profile(SweepParameter::N, &grid, |nf| {
        let n = nf as usize;
        let coll = geometry::collocation_points(curve, n)?;
        let src = geometry::source_points(radius, n)?;
        Ok(linalg::cond2(&assembly::build_a(&coll, &src)?)?)
    })?;
    let sk = profile(SweepParameter::N, &grid, |nf| {
        let n = nf as usize;
        let coll = geometry::collocation_points(curve, n)?;
        let params = MethodParams::new(radius, radius, TrefftzDims::square(n)?)?;
        Ok(linalg::cond2(&assembly::build_sk(&coll, &params)?)?)
    })?;
    Ok((a, sk))
}

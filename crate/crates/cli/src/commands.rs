use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use rayon::prelude::*;

use extmfs::analysis::{
    self, cond_a_vs_sk, cond_k_comparison, cond_sweep_s, error_max_on_circle, error_pointwise, growth_fit,
    optimal_r0_vs_n, CondProfile,
};
use extmfs::geometry::angle_grid;
use extmfs::solvers::{MethodKind, Problem, SolveReport};
use extmfs::verify;

use crate::config::{self, check_n_list, check_odd, sweep_grid, MethodChoice, RunConfig, SolvePlan, SweepSpec};

/// Default upper end of the `R` grid in `k-vs-r` sweeps.
const DEFAULT_R_STOP: f64 = 3.0;

/// What a command produced: CSV text plus human-readable summary lines.
pub struct Output {
    pub csv: String,
    pub summary: Vec<String>,
    pub matrices: Vec<(String, String)>,
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn solve_one(plan: &SolvePlan, method: MethodKind) -> Result<SolveReport> {
    let mut problem = Problem::new(plan.curve.clone(), plan.data.clone(), plan.n);
    problem.m = Some(plan.m);
    problem.source_radius = plan.source_radius;
    problem.char_length = plan.char_length;
    problem.far_field = plan.far_field;
    problem.solve(method).with_context(|| format!("{method} solve failed"))
}

pub fn solve(cfg: &RunConfig, dump_matrices: bool) -> Result<Output> {
    let plan = SolvePlan::from_config(cfg)?;
    let methods = plan.choice.methods();
    let reports = methods
        .par_iter()
        .map(|&m| solve_one(&plan, m))
        .collect::<Result<Vec<_>>>()?;

    let mut summary = Vec::new();
    for r in &reports {
        let mut line = format!(
            "{}: cond2 = {:.4e}, relative residual = {:.2e}",
            r.method,
            r.cond2,
            r.relative_residual()
        );
        if !extmfs::linalg::is_reliable(r.cond2) {
            line.push_str(" (condition number beyond reliable range)");
        }
        if let extmfs::solvers::Solution::Mfs(w) = &r.solution {
            if w.basis == extmfs::solvers::Basis::Conventional && w.sum_flagged() {
                let _ = write!(
                    line,
                    ", sum of weights {:.3e} (solution grows like ln r)",
                    w.weight_sum()
                );
            }
        }
        summary.push(line);
    }

    let mut csv = String::new();
    match plan.choice {
        MethodChoice::All => {
            let exact = plan.exact.as_deref().expect("validated");
            let header: Vec<String> = reports.iter().map(|r| format!("error_{}", r.method)).collect();
            let _ = writeln!(csv, "r,{}", header.join(","));
            for &radius in &plan.radii {
                let errors = reports
                    .par_iter()
                    .map(|r| error_max_on_circle(r, exact, &plan.curve, radius, plan.theta_samples))
                    .collect::<Result<Vec<_>, _>>()
                    .context("error evaluation failed")?;
                let cells: Vec<String> = errors.into_iter().map(num).collect();
                let _ = writeln!(csv, "{},{}", num(radius), cells.join(","));
            }
        }
        MethodChoice::One(_) => {
            let report = &reports[0];
            let _ = writeln!(csv, "r,theta,value,error");
            for &radius in &plan.radii {
                for theta in angle_grid(plan.angles) {
                    let value = report
                        .evaluate_polar(radius, theta)
                        .with_context(|| format!("{} evaluation failed", report.method))?;
                    let error = match plan.exact.as_deref() {
                        Some(e) => num(error_pointwise(report, e, &plan.curve, radius, theta)?),
                        None => String::new(),
                    };
                    let _ = writeln!(csv, "{},{},{},{error}", num(radius), num(theta), num(value));
                }
            }
        }
    }

    let mut matrices = Vec::new();
    if dump_matrices {
        for r in &reports {
            let mut buf = Vec::new();
            r.system.write_csv(&mut buf)?;
            matrices.push((r.method.name().to_string(), String::from_utf8(buf)?));
        }
    }
    Ok(Output { csv, summary, matrices })
}

fn write_profiles(series: &[(&str, &CondProfile)]) -> String {
    let mut csv = String::from("series,param,cond2,reliable\n");
    for (name, prof) in series {
        for p in &prof.points {
            let _ = writeln!(csv, "{name},{},{},{}", num(p.param), num(p.cond), p.reliable);
        }
    }
    csv
}

fn single_profile(prof: &CondProfile) -> Result<String> {
    let mut buf = Vec::new();
    prof.write_csv(&mut buf)?;
    Ok(String::from_utf8(buf)?)
}

pub fn sweep(cfg: &RunConfig) -> Result<Output> {
    let spec = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| config::config_error("sweep", "section is required for sweep"))?;
    let mut summary = Vec::new();
    let csv = match spec {
        SweepSpec::SVsR0 { n, m, step, stop } => {
            check_odd("sweep.n", *n)?;
            let m = m.unwrap_or((n - 1) / 2);
            if 2 * m + 1 != *n {
                return Err(config::config_error("sweep.m", format!("N = 2M + 1 required, got M = {m}")).into());
            }
            let curve = cfg.curve()?;
            let grid = sweep_grid(*step, *stop, analysis::DEFAULT_R0_MAX)?;
            let prof = cond_sweep_s(&curve, *n, m, &grid)?;
            summary.push(match prof.argmin() {
                Some((r0, c)) => format!("min {c:.3} at R0={r0:.3}"),
                None => "no reliable condition number on the grid".into(),
            });
            single_profile(&prof)?
        }
        SweepSpec::KVsR { n, step, stop } => {
            check_odd("sweep.n", *n)?;
            let grid = sweep_grid(*step, *stop, DEFAULT_R_STOP)?;
            let (k1, k2) = cond_k_comparison(*n, &grid)?;
            if let Some((r, c)) = k1.argmin() {
                summary.push(format!("K1 (R0=1): min {c:.4} at R={r:.3}"));
            }
            let k2c = k2.conds();
            let mean = k2c.iter().sum::<f64>() / k2c.len() as f64;
            let dev = k2c.iter().map(|c| (c - mean).abs()).fold(0.0, f64::max);
            summary.push(format!("K2 (R0=R): constant {mean:.4} (max deviation {dev:.1e})"));
            write_profiles(&[("K1", &k1), ("K2", &k2)])
        }
        SweepSpec::AVsSk { source_radius, n_list } => {
            check_n_list("sweep.n_list", n_list, 3)?;
            let curve = cfg.curve()?;
            let rho_min = curve.rho_min();
            if !(*source_radius > 0.0 && *source_radius < rho_min) {
                return Err(config::config_error(
                    "sweep.source_radius",
                    format!("R must satisfy 0 < R < rho_min = {rho_min}, got {source_radius}"),
                )
                .into());
            }
            let (a, sk) = cond_a_vs_sk(&curve, *source_radius, n_list)?;
            for (name, prof) in [("A", &a), ("SK", &sk)] {
                match growth_fit(n_list, &prof.conds()) {
                    Ok(fit) => summary.push(format!("cond2({name}) = {:.3} x {:.3}^N", fit.amplitude, fit.base)),
                    Err(e) => summary.push(format!("cond2({name}): no fit ({e})")),
                }
            }
            write_profiles(&[("A", &a), ("SK", &sk)])
        }
        SweepSpec::R0OptVsN { n_list, step, stop } => {
            check_n_list("sweep.n_list", n_list, 5)?;
            let curve = cfg.curve()?;
            let grid = sweep_grid(*step, *stop, analysis::DEFAULT_R0_MAX)?;
            let opt = optimal_r0_vs_n(&curve, n_list, &grid)?;
            let lo = opt.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
            let hi = opt.iter().map(|p| p.1).fold(0.0, f64::max);
            summary.push(format!(
                "optimal R0 in [{lo:.3}, {hi:.3}], rho_min = {:.3}",
                curve.rho_min()
            ));
            let mut csv = String::from("n,r0_opt\n");
            for (n, r0) in opt {
                let _ = writeln!(csv, "{n},{}", num(r0));
            }
            csv
        }
    };
    Ok(Output {
        csv,
        summary,
        matrices: Vec::new(),
    })
}

/// Runs the self-check table; `Ok(false)` when any check failed.
pub fn verify() -> (String, bool) {
    let results = verify::run_checks();
    (verify::render_table(&results), verify::all_passed(&results))
}

/// `<dir>/<stem>.<method>.matrix.csv` next to the output file.
pub fn matrix_path(out: Option<&Path>, method: &str) -> PathBuf {
    let (dir, stem) = match out {
        Some(p) => (
            p.parent().map(Path::to_path_buf).unwrap_or_default(),
            p.file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "extmfs".into()),
        ),
        None => (PathBuf::new(), "extmfs".into()),
    };
    dir.join(format!("{stem}.{method}.matrix.csv"))
}

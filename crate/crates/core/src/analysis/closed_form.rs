//! Closed-form determinants and condition numbers for circular boundaries
//! and for the transform matrices `T_R`, `T_θ`, `K`.

use std::f64::consts::SQRT_2;

/// Exact `cond₂(S)` on a circle of radius `rho` with `N = 2M + 1`.
///
/// Piecewise in `R₀`, with breakpoints at `ρ`, `2^{1/(2M)} ρ` and `√2 ρ`.
pub fn analytic_cond_s_circle(rho: f64, m: usize, r0: f64) -> f64 {
    assert!(m >= 1, "order must be at least 1");
    let mf = m as f64;
    let q = r0 / rho;
    if r0 < rho {
        SQRT_2 * q.recip().powf(mf)
    } else if r0 < 2f64.powf(1.0 / (2.0 * mf)) * rho {
        SQRT_2 / q
    } else if r0 < SQRT_2 * rho {
        q.powf(mf - 1.0)
    } else {
        q.powf(mf) / SQRT_2
    }
}

/// Optimal characteristic length `2^{1/(2M)} ρ` and the minimum
/// `cond₂(S) = 2^{(M−1)/(2M)}` attained there.
pub fn analytic_optimal_r0(rho: f64, m: usize) -> (f64, f64) {
    assert!(m >= 1, "order must be at least 1");
    let mf = m as f64;
    (2f64.powf(1.0 / (2.0 * mf)) * rho, 2f64.powf((mf - 1.0) / (2.0 * mf)))
}

fn factorial(m: usize) -> f64 {
    (1..=m).map(|k| k as f64).product()
}

/// `det(T_R) = (R/R₀)^{M(M+1)} / (M!)²`.
pub fn det_t_r(m: usize, r: f64, r0: f64) -> f64 {
    (r / r0).powi((m * (m + 1)) as i32) / factorial(m).powi(2)
}

/// `det(T_θ) = N^{M+1/2} / 2^M` for `N = 2M + 1`.
pub fn det_t_theta(m: usize) -> f64 {
    let n = (2 * m + 1) as f64;
    n.powf(m as f64 + 0.5) / 2f64.powi(m as i32)
}

/// `det(S_{R₀}) = (R₀/ρ)^{M(M+1)}`.
pub fn det_s_r0(m: usize, r0: f64, rho: f64) -> f64 {
    (r0 / rho).powi((m * (m + 1)) as i32)
}

/// `det(S) = det(T_θ) det(S_{R₀})` on a circle.
pub fn det_s_circle(m: usize, r0: f64, rho: f64) -> f64 {
    det_t_theta(m) * det_s_r0(m, r0, rho)
}

/// `cond₂(K₂) = √2 M` (the `R₀ = R` transform), independent of `R`.
pub fn cond_k2(m: usize) -> f64 {
    SQRT_2 * m as f64
}

/// `cond₂` of `K` for arbitrary `R/R₀` with `N = 2M + 1`.
///
/// `K Kᵀ = (N/2) diag(2, q², q², …, (q^M/M)², (q^M/M)²)` with `q = R/R₀`,
/// so the singular values are proportional to `√2` and `q^k / k`.
pub fn analytic_cond_k(m: usize, ratio: f64) -> f64 {
    let mut lo = SQRT_2;
    let mut hi = SQRT_2;
    for k in 1..=m {
        let s = ratio.powi(k as i32) / k as f64;
        lo = lo.min(s);
        hi = hi.max(s);
    }
    hi / lo
}

use super::AnalysisError;

/// `cond ≈ amplitude · base^N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthFit {
    pub amplitude: f64,
    pub base: f64,
}

/// Least-squares fit of `ln cond = ln amplitude + N ln base`.
pub fn growth_fit(n_list: &[usize], conds: &[f64]) -> Result<GrowthFit, AnalysisError> {
    if n_list.len() != conds.len() {
        return Err(AnalysisError::InvalidData(format!(
            "{} values of N but {} condition numbers",
            n_list.len(),
            conds.len()
        )));
    }
    if n_list.len() < 4 {
        return Err(AnalysisError::TooFewPoints(n_list.len()));
    }
    if conds.iter().any(|c| !(c.is_finite() && *c > 0.0)) {
        return Err(AnalysisError::InvalidData(
            "condition numbers must be finite and positive".into(),
        ));
    }
    let xs: Vec<f64> = n_list.iter().map(|&n| n as f64).collect();
    let ys: Vec<f64> = conds.iter().map(|c| c.ln()).collect();
    let len = xs.len() as f64;
    let xbar = xs.iter().sum::<f64>() / len;
    let ybar = ys.iter().sum::<f64>() / len;
    let sxx: f64 = xs.iter().map(|x| (x - xbar).powi(2)).sum();
    if sxx == 0.0 {
        return Err(AnalysisError::DegenerateFit);
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xbar) * (y - ybar)).sum();
    let slope = sxy / sxx;
    Ok(GrowthFit {
        amplitude: (ybar - slope * xbar).exp(),
        base: slope.exp(),
    })
}

use serde::Serialize;

use crate::error::{Error, Result};

/// Ordinary least-squares line `y = slope * x + intercept`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual.
    pub residual: f64,
    pub points: usize,
}

pub fn ols(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() {
        return Err(Error::InvalidParameter("fit inputs differ in length".into()));
    }
    let n = x.len();
    if n < 3 {
        return Err(Error::DegenerateFit(format!("{n} points; at least 3 are required")));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::DegenerateFit("non-finite sample".into()));
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    if sxx <= 1e-300 {
        return Err(Error::DegenerateFit("all abscissae coincide".into()));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = x.iter().zip(y).map(|(a, b)| (b - slope * a - intercept).powi(2)).sum();
    Ok(LinearFit { slope, intercept, residual: (ss / n as f64).sqrt(), points: n })
}

/// Fit `log y = slope * log x + intercept`; every sample must be positive.
pub fn loglog_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if let Some(v) = x.iter().chain(y).find(|v| !(**v > 0.0)) {
        return Err(Error::DegenerateFit(format!("non-positive sample {v} in log-log fit")));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    ols(&lx, &ly)
}

//! Log-log least-squares fits for convergence rates.

use crate::error::{Error, Result};

/// Fitted line `ln err = slope·ln a + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square deviation of the samples from the line.
    pub residual: f64,
}

/// Least-squares line through `(ln a, ln err)`.
pub fn fit_loglog_slope(samples: &[(f64, f64)]) -> Result<LogLogFit> {
    if samples.len() < 3 {
        return Err(Error::Domain(format!("slope fit needs at least 3 samples, got {}", samples.len())));
    }
    if let Some(&(a, e)) = samples.iter().find(|(a, e)| !(*a > 0.0 && *e > 0.0 && a.is_finite() && e.is_finite())) {
        return Err(Error::Domain(format!("slope fit needs positive finite samples, got ({a}, {e})")));
    }
    let pts: Vec<(f64, f64)> = samples.iter().map(|&(a, e)| (a.ln(), e.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Domain("slope fit needs at least two distinct abscissae".into()));
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (pts.iter().map(|p| (p.1 - slope * p.0 - intercept).powi(2)).sum::<f64>() / n).sqrt();
    Ok(LogLogFit { slope, intercept, residual })
}

//! Composite Gauss-Legendre quadrature with panel doubling.

use std::sync::OnceLock;

use crate::error::{Error, Result};

const NODES: usize = 64;
const MAX_PANELS: usize = 1 << 14;

/// Nodes and weights of the 64-point rule on `[-1, 1]`, by Newton iteration
/// on the Legendre polynomial.
fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = NODES;
        let mut x = vec![0.0; n];
        let mut w = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut t = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, t);
                dp = d;
                let step = p / d;
                t -= step;
                if step.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, t);
            dp = if d != 0.0 { d } else { dp };
            x[i] = -t;
            x[n - 1 - i] = t;
            let wi = 2.0 / ((1.0 - t * t) * dp * dp);
            w[i] = wi;
            w[n - 1 - i] = wi;
        }
        (x, w)
    })
}

fn legendre(n: usize, t: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = t;
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * t * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (t * p1 - p0) / (t * t - 1.0);
    (p1, d)
}

fn composite<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, panels: usize) -> f64 {
    let (x, w) = rule();
    let h = (hi - lo) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = lo + (p as f64 + 0.5) * h;
        let half = 0.5 * h;
        let s: f64 = x.iter().zip(w).map(|(&xi, &wi)| wi * f(mid + half * xi)).sum();
        total += half * s;
    }
    total
}

/// Integrates `f` over `[lo, hi]` starting from `initial_panels` panels and
/// doubling until the relative change is at most `rel_tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, initial_panels: usize, rel_tol: f64) -> Result<f64> {
    let mut panels = initial_panels.max(1);
    let mut prev = composite(&f, lo, hi, panels);
    while panels < MAX_PANELS {
        panels *= 2;
        let cur = composite(&f, lo, hi, panels);
        if !cur.is_finite() {
            break;
        }
        if (cur - prev).abs() <= rel_tol * cur.abs().max(f64::MIN_POSITIVE) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::Accuracy(format!("integral over [{lo}, {hi}] did not settle to {rel_tol:e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        let (_, w) = rule();
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn polynomial_and_oscillatory() {
        let v = integrate(|x| x.powi(7) - 3.0 * x * x, 0.0, 2.0, 1, 1e-12).unwrap();
        assert!((v - (32.0 - 8.0)).abs() < 1e-12);
        let v = integrate(|x| (50.0 * x).sin().powi(2), 0.0, std::f64::consts::PI, 1, 1e-12).unwrap();
        assert!((v - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn reports_non_convergence() {
        assert!(integrate(|x| if x < 0.5 { f64::NAN } else { 1.0 }, 0.0, 1.0, 1, 1e-10).is_err());
    }
}

//! Rational eigen-series for the per-mode DtN maps and truncated triples.

use num_complex::Complex64;

use super::{lambda_plus, mode_eigen_data, steklov_lambda_minus, Geometry};
use crate::error::{Error, Result};
use crate::numerics::matrix::ComplexMatrix;
use crate::triple::TripleRealization;

const POLE_DISTANCE: f64 = 1.0e-8;

/// How the discarded eigenpairs are accounted for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SeriesForm {
    /// `Λ + z Σ_{k≤K} λ_k π_k² / (λ_k − z)`, the M-function of the truncated
    /// triple.
    #[default]
    Truncated,
    /// `Λ + z ‖Π e_n‖² + z² Σ_{k≤K} π_k² / (λ_k − z)`: the linear term uses the
    /// exact lift norm, so the remainder decays like the tail of `Σ π_k²/λ_k`.
    Completed,
}

fn evaluate(
    function: &'static str,
    base: f64,
    lambdas: impl Iterator<Item = f64>,
    pis: &[f64],
    lift_norm: f64,
    z: Complex64,
    form: SeriesForm,
) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("spectral parameter {z} is not finite")));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for (lam, &p) in lambdas.zip(pis) {
        let d = Complex64::new(lam, 0.0) - z;
        if d.norm() <= POLE_DISTANCE {
            return Err(Error::Pole { function, z: z.re, pole: lam });
        }
        sum += match form {
            SeriesForm::Truncated => p * p * lam / d,
            SeriesForm::Completed => p * p / d,
        };
    }
    Ok(match form {
        SeriesForm::Truncated => base + z * sum,
        SeriesForm::Completed => base + z * lift_norm + z * z * sum,
    })
}

/// Annulus DtN map of mode `n` from `k_trunc` eigenpairs, naive truncation.
pub fn m_plus_series(n: usize, z: Complex64, g: &Geometry, k_trunc: usize) -> Result<Complex64> {
    m_plus_series_with(n, z, g, k_trunc, SeriesForm::Truncated)
}

pub fn m_plus_series_with(n: usize, z: Complex64, g: &Geometry, k_trunc: usize, form: SeriesForm) -> Result<Complex64> {
    let data = mode_eigen_data(n, g, k_trunc)?;
    evaluate(
        "annulus eigen-series",
        lambda_plus(n, g)?,
        data.lambda_plus.iter().copied(),
        &data.pi_plus,
        data.lift_norm_plus,
        z,
        form,
    )
}

/// Contrast-weighted inner DtN map of mode `n` from `k_trunc` eigenpairs,
/// naive truncation.
pub fn m_minus_series(n: usize, z: Complex64, g: &Geometry, k_trunc: usize) -> Result<Complex64> {
    m_minus_series_with(n, z, g, k_trunc, SeriesForm::Truncated)
}

pub fn m_minus_series_with(n: usize, z: Complex64, g: &Geometry, k_trunc: usize, form: SeriesForm) -> Result<Complex64> {
    let data = mode_eigen_data(n, g, k_trunc)?;
    let a = g.contrast();
    evaluate(
        "inner eigen-series",
        a * steklov_lambda_minus(n, g)?,
        data.lambda_minus.iter().map(|&l| a * l),
        &data.pi_minus,
        data.lift_norm_minus,
        z,
        form,
    )
}

/// Mode-`n` triple with `a0 = diag(λ⁺_{1..K₊}, a λ⁻_{1..K₋})`, `pi = (π⁺; π⁻)`
/// and `lambda = Λ⁺_n + a Λ⁻_n`.
pub fn truncated_triple(n: usize, g: &Geometry, k_plus: usize, k_minus: usize) -> Result<TripleRealization> {
    let plus = mode_eigen_data(n, g, k_plus)?;
    let minus = mode_eigen_data(n, g, k_minus)?;
    let a = g.contrast();
    let diag: Vec<f64> =
        plus.lambda_plus.iter().copied().chain(minus.lambda_minus.iter().map(|&l| a * l)).collect();
    let pi: Vec<f64> = plus.pi_plus.iter().chain(&minus.pi_minus).copied().collect();
    let lambda = lambda_plus(n, g)? + a * steklov_lambda_minus(n, g)?;
    TripleRealization::new(
        ComplexMatrix::from_real_diagonal(&diag),
        ComplexMatrix::column(&pi),
        ComplexMatrix::scalar(Complex64::new(lambda, 0.0)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disk::{m_minus, m_plus};
    use crate::triple::m_function;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_gives_harmonic_value() {
        let g = Geometry::new(1.0, 2.0, 50.0).unwrap();
        for n in 0..3 {
            assert_eq!(m_plus_series(n, c(0.0, 0.0), &g, 20).unwrap(), c(lambda_plus(n, &g).unwrap(), 0.0));
            assert_eq!(m_minus_series(n, c(0.0, 0.0), &g, 20).unwrap(), c(-50.0 * n as f64, 0.0));
        }
    }

    #[test]
    fn herglotz_sign() {
        let g = Geometry::new(1.0, 2.0, 1.0).unwrap();
        assert!(m_plus_series(0, c(1.0, 1.0), &g, 200).unwrap().im > 0.0);
        assert!(m_minus_series(1, c(1.0, 1.0), &g, 50).unwrap().im > 0.0);
    }

    #[test]
    fn series_pole() {
        let g = Geometry::new(1.0, 2.0, 1.0).unwrap();
        let data = mode_eigen_data(0, &g, 5).unwrap();
        let pole = data.lambda_plus[1];
        assert!(matches!(m_plus_series(0, c(pole, 0.0), &g, 5), Err(Error::Pole { .. })));
    }

    #[test]
    fn truncated_triple_reproduces_split_series() {
        let g = Geometry::new(1.0, 2.0, 1e3).unwrap();
        for n in 0..3 {
            let t = truncated_triple(n, &g, 40, 30).unwrap();
            for z in [c(1.0, 1.0), c(3.5, 0.2), c(-2.0, 0.0)] {
                let m = m_function(&t, z).unwrap()[(0, 0)];
                let split = m_plus_series(n, z, &g, 40).unwrap() + m_minus_series(n, z, &g, 30).unwrap();
                assert!((m - split).norm() <= 1e-12 * split.norm().max(1.0), "n={n} z={z}");
            }
        }
    }

    #[test]
    fn completed_series_matches_closed_forms() {
        let g = Geometry::new(1.0, 2.0, 1.0).unwrap();
        let closed = m_plus(0, 1.0, &g).unwrap();
        let completed = m_plus_series_with(0, c(1.0, 0.0), &g, 400, SeriesForm::Completed).unwrap();
        assert!((completed.re - closed).abs() < 1e-5);
        let g = Geometry::new(1.0, 2.0, 1e3).unwrap();
        let closed = m_minus(1, 5.0, &g).unwrap();
        let completed = m_minus_series_with(1, c(5.0, 0.0), &g, 100, SeriesForm::Completed).unwrap();
        assert!((completed.re - closed).abs() < 1e-9 * closed.abs());
    }

    #[test]
    fn naive_truncation_error_is_the_parseval_tail() {
        let g = Geometry::new(1.0, 2.0, 1.0).unwrap();
        let data = mode_eigen_data(0, &g, 400).unwrap();
        let tail = data.lift_norm_plus - data.pi_plus.iter().map(|p| p * p).sum::<f64>();
        let closed = m_plus(0, 1.0, &g).unwrap();
        let naive = m_plus_series(0, c(1.0, 0.0), &g, 400).unwrap().re;
        assert!(((closed - naive) / tail - 1.0).abs() < 0.01);
    }
}

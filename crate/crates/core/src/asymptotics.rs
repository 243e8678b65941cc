//! Convergence harness for the high-contrast limit on truncated per-mode
//! realizations.

use std::fmt;
use std::ops::Range;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::disk::{
    m_minus_series_with, m_plus_series, m_minus_series, mode_eigen_data, mode_eigenvalues_plus, steklov_lambda_minus,
    truncated_triple, Geometry, SeriesForm,
};
use crate::error::{Error, Result};
use crate::numerics::fit::fit_loglog_slope;
use crate::numerics::matrix::ComplexMatrix;
use crate::numerics::operator_norm;
use crate::spectra::{effective_spectrum_dtn, transmission_spectrum, Route};
use crate::triple::{krein_resolvent, BoundaryCondition};

/// Agreement required between the two routes of [`generalized_resolvent`].
pub const CONSISTENCY_TOL: f64 = 1.0e-10;
/// Smallest admissible `|Im z|` for resolvent probes.
pub const MIN_PROBE_IMAG: f64 = 0.1;
/// Root tolerance used when tracking eigenvalues across contrasts.
pub const ROOT_TOL: f64 = 1.0e-12;

/// Quantity whose decay in `a` a report certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantity {
    EigenvalueGap,
    ResolventNorm,
    MMinusExpansion,
    GeneralizedResolventGap,
}

impl Quantity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Quantity::EigenvalueGap => "eigenvalue_gap",
            Quantity::ResolventNorm => "resolvent_norm",
            Quantity::MMinusExpansion => "m_minus_expansion",
            Quantity::GeneralizedResolventGap => "generalized_resolvent_gap",
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Settings a report was produced with.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceParams {
    pub modes: Range<usize>,
    /// Root index for eigenvalue gaps (0 is the root `z = 0`).
    pub index: Option<usize>,
    pub z_probe: Option<Complex64>,
    pub k_plus: usize,
    pub k_minus: usize,
}

/// Error samples over a contrast sweep with their log-log fit.
///
/// When every error is exactly zero the fit is reported as
/// `slope = intercept = residual = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub quantity: Quantity,
    pub samples: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    pub residual: f64,
    pub params: ConvergenceParams,
}

impl ConvergenceReport {
    fn new(quantity: Quantity, samples: Vec<(f64, f64)>, params: ConvergenceParams) -> Result<Self> {
        let (slope, intercept, residual) = if samples.len() >= 3 && samples.iter().all(|s| s.1 == 0.0) {
            (0.0, 0.0, 0.0)
        } else {
            let fit = fit_loglog_slope(&samples)?;
            (fit.slope, fit.intercept, fit.residual)
        };
        Ok(Self { quantity, samples, slope, intercept, residual, params })
    }
}

/// Resolvent blocks with respect to `L²(Ω₊) ⊕ L²(Ω₋)` in truncated
/// eigenbases.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveBlockResolvent {
    pub tl: ComplexMatrix,
    pub tr: ComplexMatrix,
    pub bl: ComplexMatrix,
    pub br: ComplexMatrix,
}

impl EffectiveBlockResolvent {
    pub fn assemble(&self) -> Result<ComplexMatrix> {
        ComplexMatrix::from_blocks(&self.tl, &self.tr, &self.bl, &self.br)
    }
}

fn check_contrasts(a_list: &[f64]) -> Result<()> {
    if a_list.len() < 3 {
        return Err(Error::Domain(format!("a sweep needs at least 3 contrasts, got {}", a_list.len())));
    }
    if let Some(a) = a_list.iter().find(|a| !(**a > 0.0 && a.is_finite())) {
        return Err(Error::Domain(format!("contrast {a} must be positive")));
    }
    Ok(())
}

fn check_probe(z: Complex64) -> Result<()> {
    if !(z.im.abs() >= MIN_PROBE_IMAG && z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("probe {z} must satisfy |Im z| >= {MIN_PROBE_IMAG}")));
    }
    Ok(())
}

/// `(A₀⁺ − z)⁻¹` on the first `k_plus` annulus eigenfunctions of mode `n`.
fn plus_resolvent(n: usize, g: &Geometry, z: Complex64, k_plus: usize) -> Result<ComplexMatrix> {
    let data = mode_eigen_data(n, g, k_plus)?;
    let d: Vec<Complex64> = data.lambda_plus.iter().map(|&l| (Complex64::new(l, 0.0) - z).inv()).collect();
    Ok(ComplexMatrix::from_diagonal(&d))
}

/// Column `(λ_k / (λ_k − z)) π_k`: the γ-field of the annulus part.
fn plus_gamma(n: usize, g: &Geometry, z: Complex64, k_plus: usize) -> Result<Vec<Complex64>> {
    let data = mode_eigen_data(n, g, k_plus)?;
    Ok(data.lambda_plus.iter().zip(&data.pi_plus).map(|(&l, &p)| p * l / (Complex64::new(l, 0.0) - z)).collect())
}

fn column(v: &[Complex64]) -> ComplexMatrix {
    ComplexMatrix::from_row_major(v.len(), 1, v.to_vec()).expect("column shape")
}

/// Per-mode truncation of `(A_a − z)⁻¹` by the Kreĭn formula with `α = 0`,
/// `β = I`; rows and columns ordered as `k_plus` annulus then `k_minus` inner
/// eigenfunctions.
pub fn full_resolvent_truncated(
    n: usize,
    g: &Geometry,
    z: Complex64,
    k_plus: usize,
    k_minus: usize,
) -> Result<ComplexMatrix> {
    let t = truncated_triple(n, g, k_plus, k_minus)?;
    krein_resolvent(&t, &BoundaryCondition::natural(1), z)
}

/// Compression of the resolvent to `Ω₊`,
/// `(A₀⁺ − z)⁻¹ − γ⁺_z (M⁺(z) + M⁻(z))⁻¹ (γ⁺_z̄)*`, checked against the
/// top-left block of [`full_resolvent_truncated`].
pub fn generalized_resolvent(
    n: usize,
    g: &Geometry,
    z: Complex64,
    k_plus: usize,
    k_minus: usize,
) -> Result<ComplexMatrix> {
    let full = full_resolvent_truncated(n, g, z, k_plus, k_minus)?;
    let block = full.block(0, 0, k_plus, k_plus);

    let m = m_plus_series(n, z, g, k_plus)? + m_minus_series(n, z, g, k_minus)?;
    if m.norm() == 0.0 {
        return Err(Error::BoundaryConditionSingular { z: z.to_string() });
    }
    let gz = plus_gamma(n, g, z, k_plus)?;
    let gzb = plus_gamma(n, g, z.conj(), k_plus)?;
    let mut formula = plus_resolvent(n, g, z, k_plus)?;
    let minv = m.inv();
    for i in 0..k_plus {
        for j in 0..k_plus {
            formula[(i, j)] -= gz[i] * minv * gzb[j].conj();
        }
    }

    let gap = (&formula - &block).max_abs();
    let scale = formula.max_abs().max(1.0);
    if gap > CONSISTENCY_TOL * scale {
        return Err(Error::Consistency(format!(
            "compressed resolvent routes differ by {gap:e} at z = {z}, mode {n}"
        )));
    }
    Ok(formula)
}

/// Limit blocks of mode `n`: the effective resolvent for `n = 0`, the
/// Dirichlet-decoupled annulus resolvent (zero elsewhere) for `n ≥ 1`.
pub fn effective_mode_block_resolvent(
    n: usize,
    g: &Geometry,
    z: Complex64,
    k_plus: usize,
    k_minus: usize,
) -> Result<EffectiveBlockResolvent> {
    let mut tl = plus_resolvent(n, g, z, k_plus)?;
    if n > 0 {
        return Ok(EffectiveBlockResolvent {
            tl,
            tr: ComplexMatrix::zeros(k_plus, k_minus),
            bl: ComplexMatrix::zeros(k_minus, k_plus),
            br: ComplexMatrix::zeros(k_minus, k_minus),
        });
    }
    let minus = mode_eigen_data(0, g, k_minus)?;
    let p_minus: Vec<Complex64> = minus.pi_minus.iter().map(|&p| Complex64::new(p, 0.0)).collect();
    let s = m_plus_series(0, z, g, k_plus)? + z * minus.pi_minus.iter().map(|p| p * p).sum::<f64>();
    if s.norm() <= f64::EPSILON * z.norm().max(1.0) {
        return Err(Error::Pole { function: "effective dispersion", z: z.re, pole: z.re });
    }
    let sinv = s.inv();
    let gz = plus_gamma(0, g, z, k_plus)?;
    let gzb_adj: Vec<Complex64> = plus_gamma(0, g, z.conj(), k_plus)?.iter().map(|c| c.conj()).collect();

    for i in 0..k_plus {
        for j in 0..k_plus {
            tl[(i, j)] -= gz[i] * sinv * gzb_adj[j];
        }
    }
    let gz_col = column(&gz);
    let gzb_row = ComplexMatrix::from_row_major(1, k_plus, gzb_adj).expect("row shape");
    let pm_col = column(&p_minus);
    let pm_row = pm_col.adjoint();
    let neg = -sinv;
    Ok(EffectiveBlockResolvent {
        tl,
        tr: (&gz_col * &pm_row).scale(neg),
        bl: (&pm_col * &gzb_row).scale(neg),
        br: (&pm_col * &pm_row).scale(neg),
    })
}

/// Mode-0 blocks of the effective resolvent (the only mode coupled to the
/// inner disk in the limit).
pub fn effective_block_resolvent(
    g: &Geometry,
    z: Complex64,
    k_plus: usize,
    k_minus: usize,
) -> Result<EffectiveBlockResolvent> {
    effective_mode_block_resolvent(0, g, z, k_plus, k_minus)
}

fn resolvent_gap(n: usize, g: &Geometry, z: Complex64, k_plus: usize, k_minus: usize) -> Result<f64> {
    let full = full_resolvent_truncated(n, g, z, k_plus, k_minus)?;
    let eff = effective_mode_block_resolvent(n, g, z, k_plus, k_minus)?.assemble()?;
    operator_norm(&(&full - &eff))
}

/// `‖(A_a − z)⁻¹ − R_eff(z)‖` over the direct sum of `modes`, per contrast.
pub fn resolvent_convergence(
    g: &Geometry,
    z: Complex64,
    a_list: &[f64],
    modes: Range<usize>,
    k_plus: usize,
    k_minus: usize,
) -> Result<ConvergenceReport> {
    check_probe(z)?;
    check_contrasts(a_list)?;
    if modes.is_empty() {
        return Err(Error::Domain("mode range is empty".into()));
    }
    let cells: Vec<(usize, usize)> =
        (0..a_list.len()).flat_map(|i| modes.clone().map(move |n| (i, n))).collect();
    let gaps: Vec<Result<f64>> = cells
        .par_iter()
        .map(|&(i, n)| resolvent_gap(n, &g.with_contrast(a_list[i])?, z, k_plus, k_minus))
        .collect();
    let mut err = vec![0.0_f64; a_list.len()];
    for (&(i, _), gap) in cells.iter().zip(gaps) {
        err[i] = err[i].max(gap?);
    }
    let samples = a_list.iter().copied().zip(err).collect();
    let params = ConvergenceParams { modes, index: None, z_probe: Some(z), k_plus, k_minus };
    ConvergenceReport::new(Quantity::ResolventNorm, samples, params)
}

/// `‖R_a(z) − R̃_eff,TL(z)‖` for one mode: the compressed resolvent against
/// its limit.
pub fn generalized_resolvent_convergence(
    n: usize,
    g: &Geometry,
    z: Complex64,
    a_list: &[f64],
    k_plus: usize,
    k_minus: usize,
) -> Result<ConvergenceReport> {
    check_probe(z)?;
    check_contrasts(a_list)?;
    let errs: Vec<Result<f64>> = a_list
        .par_iter()
        .map(|&a| {
            let ga = g.with_contrast(a)?;
            let r = generalized_resolvent(n, &ga, z, k_plus, k_minus)?;
            let eff = effective_mode_block_resolvent(n, &ga, z, k_plus, k_minus)?;
            operator_norm(&(&r - &eff.tl))
        })
        .collect();
    let samples = a_list.iter().copied().zip(errs).map(|(a, e)| e.map(|e| (a, e))).collect::<Result<Vec<_>>>()?;
    let params = ConvergenceParams { modes: n..n + 1, index: None, z_probe: Some(z), k_plus, k_minus };
    ConvergenceReport::new(Quantity::GeneralizedResolventGap, samples, params)
}

/// Limit eigenvalue of `mode`: the `index`-th nonzero effective root for
/// mode 0, the `index`-th annulus eigenvalue for `mode ≥ 1`, and 0 for
/// `index = 0`.
pub fn effective_eigenvalue(g: &Geometry, mode: usize, index: usize) -> Result<f64> {
    if index == 0 {
        return Ok(0.0);
    }
    if mode > 0 {
        return Ok(mode_eigenvalues_plus(mode, g, index)?[index - 1]);
    }
    // The k-th nonzero effective root lies below the (k+1)-th annulus eigenvalue.
    let bound = mode_eigenvalues_plus(0, g, index + 1)?[index];
    let report = effective_spectrum_dtn(g, (0.0, bound), ROOT_TOL)?;
    report
        .mode_roots(0, Route::EffectiveDtn)
        .get(index - 1)
        .copied()
        .ok_or_else(|| Error::Domain(format!("effective root {index} of mode 0 not found below {bound}")))
}

fn nearest_root(roots: &[f64], target: f64, tol: f64) -> Result<f64> {
    let mut by_distance: Vec<f64> = roots.to_vec();
    by_distance.sort_by(|a, b| (a - target).abs().total_cmp(&(b - target).abs()));
    match by_distance.as_slice() {
        [] => Err(Error::Matching { z: target, detail: "no transmission root in the window".into() }),
        [best, rest @ ..] => {
            if let Some(next) = rest.first() {
                if ((next - target).abs() - (best - target).abs()).abs() <= 10.0 * tol {
                    return Err(Error::Matching {
                        z: target,
                        detail: format!("roots {best} and {next} are equally close"),
                    });
                }
            }
            Ok(*best)
        }
    }
}

/// `|z_a − z_eff|` for the `index`-th root of `mode` (index 0 is `z = 0`).
pub fn eigenvalue_convergence(g: &Geometry, mode: usize, index: usize, a_list: &[f64]) -> Result<ConvergenceReport> {
    check_contrasts(a_list)?;
    if a_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("contrasts must be strictly increasing".into()));
    }
    let z_eff = effective_eigenvalue(g, mode, index)?;
    let errs: Vec<Result<f64>> = a_list
        .par_iter()
        .map(|&a| {
            if index == 0 {
                return Ok(0.0);
            }
            let ga = g.with_contrast(a)?;
            let window = (0.0, 2.0 * z_eff + 1.0);
            let report = transmission_spectrum(&ga, mode..mode + 1, window, ROOT_TOL)?;
            let roots = report.mode_roots(mode, Route::Transmission);
            Ok((nearest_root(&roots, z_eff, ROOT_TOL)? - z_eff).abs())
        })
        .collect();
    let samples = a_list.iter().copied().zip(errs).map(|(a, e)| e.map(|e| (a, e))).collect::<Result<Vec<_>>>()?;
    let params = ConvergenceParams { modes: mode..mode + 1, index: Some(index), z_probe: None, k_plus: 0, k_minus: 0 };
    ConvergenceReport::new(Quantity::EigenvalueGap, samples, params)
}

/// `|M⁻_n(z) − a Λ⁻_n − z p_n|` with `p_n = ‖Π₋e_n‖²`, from the completed
/// inner eigen-series.
pub fn m_minus_expansion_check(
    n: usize,
    z: Complex64,
    g: &Geometry,
    a_list: &[f64],
    k_minus: usize,
) -> Result<ConvergenceReport> {
    check_contrasts(a_list)?;
    let p = mode_eigen_data(n, g, k_minus)?.lift_norm_minus;
    let samples = a_list
        .iter()
        .map(|&a| {
            let ga = g.with_contrast(a)?;
            let m = m_minus_series_with(n, z, &ga, k_minus, SeriesForm::Completed)?;
            Ok((a, (m - a * steklov_lambda_minus(n, &ga)? - z * p).norm()))
        })
        .collect::<Result<Vec<_>>>()?;
    let params = ConvergenceParams { modes: n..n + 1, index: None, z_probe: Some(z), k_plus: 0, k_minus };
    ConvergenceReport::new(Quantity::MMinusExpansion, samples, params)
}

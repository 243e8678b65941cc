//! Transmission and effective spectra from scalar dispersion relations.
//!
//! Every dispersion function used here is a real Herglotz function of `z`:
//! increasing between consecutive poles, running from `−∞` to `+∞`. Roots are
//! therefore located one pole interval at a time.

use std::fmt;
use std::ops::Range;

use rayon::prelude::*;

use crate::disk::{
    bessel_zeros, m_minus_raw, m_plus_raw, mode_eigen_data, mode_eigenvalues_plus_below, steklov_lambda_minus,
    Geometry, MAX_COUNT, MAX_MODE,
};
use crate::error::{Error, Result};
use crate::numerics::roots::{refine, Refined, RootBracket};

/// Relative offset from a pole at which interval endpoints are sampled.
const POLE_OFFSET: f64 = 1.0e-9;

/// How a spectral point was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Route {
    Transmission,
    EffectiveSeries,
    EffectiveDtn,
    DirichletLimit,
}

impl Route {
    pub fn as_str(&self) -> &'static str {
        match self {
            Route::Transmission => "transmission",
            Route::EffectiveSeries => "effective_series",
            Route::EffectiveDtn => "effective_dtn",
            Route::DirichletLimit => "dirichlet_limit",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Route {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "transmission" => Ok(Route::Transmission),
            "effective_series" => Ok(Route::EffectiveSeries),
            "effective_dtn" => Ok(Route::EffectiveDtn),
            "dirichlet_limit" => Ok(Route::DirichletLimit),
            other => Err(Error::Domain(format!("unknown route {other}"))),
        }
    }
}

/// A located spectral point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionRoot {
    pub z: f64,
    pub mode: usize,
    /// 2 for `mode ≥ 1` (the pair `±n`), else 1.
    pub multiplicity: usize,
    /// Newton distance `|D(z) / D'(z)|` to the exact root; 0 for points
    /// known in closed form.
    pub residual: f64,
    pub route: Route,
}

/// Roots of one solver run, ascending in `z` (ties by mode).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub geometry: Geometry,
    pub roots: Vec<DispersionRoot>,
    pub window: (f64, f64),
    /// Eigen-series truncation; 0 for closed-form routes.
    pub truncation: usize,
}

impl SpectrumReport {
    /// Nonzero roots of one mode and route, ascending.
    pub fn mode_roots(&self, mode: usize, route: Route) -> Vec<f64> {
        self.roots.iter().filter(|r| r.mode == mode && r.route == route && r.z != 0.0).map(|r| r.z).collect()
    }

    pub fn contains_zero(&self) -> bool {
        self.roots.iter().any(|r| r.z == 0.0)
    }
}

fn multiplicity(mode: usize) -> usize {
    if mode == 0 {
        1
    } else {
        2
    }
}

fn check_window(window: (f64, f64), tol: f64) -> Result<()> {
    let (lo, hi) = window;
    if !(lo >= 0.0 && lo < hi && hi.is_finite()) {
        return Err(Error::Domain(format!("window [{lo}, {hi}] must satisfy 0 <= lo < hi")));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::Domain(format!("root tolerance {tol} must be positive")));
    }
    Ok(())
}

fn newton_distance<F: Fn(f64) -> f64>(f: &F, z: f64) -> f64 {
    let h = 1.0e-7 * z.abs().max(1.0);
    let slope = (f(z + h) - f(z - h)) / (2.0 * h);
    let v = f(z);
    if slope == 0.0 || !slope.is_finite() {
        v.abs()
    } else {
        (v / slope).abs()
    }
}

/// Roots of an increasing-between-poles function on `window`.
///
/// `vanishes_at_zero` marks functions with `f(0) = 0`: the interval from 0 to
/// the first pole then holds no further root and is skipped, which avoids
/// sampling `f` where it is dominated by rounding.
fn roots_between_poles<F: Fn(f64) -> f64>(
    f: F,
    poles: &[f64],
    window: (f64, f64),
    tol: f64,
    vanishes_at_zero: bool,
) -> Vec<(f64, f64)> {
    let (lo, hi) = window;
    let mut inside: Vec<f64> = poles.iter().copied().filter(|&p| p > lo && p < hi).collect();
    inside.sort_by(f64::total_cmp);
    inside.dedup();
    let offset = |p: f64| POLE_OFFSET * p.abs().max(1.0);

    let mut segments = Vec::with_capacity(inside.len() + 1);
    let mut start = lo;
    let mut skip_first = vanishes_at_zero && lo == 0.0;
    for &p in &inside {
        if !skip_first {
            segments.push((start, p - offset(p)));
        }
        skip_first = false;
        start = p + offset(p);
    }
    if !skip_first {
        segments.push((start, hi));
    }

    let mut out = Vec::new();
    for (a, b) in segments {
        if a >= b {
            continue;
        }
        let (fa, fb) = (f(a), f(b));
        if fa == 0.0 && a > 0.0 {
            out.push((a, 0.0));
            continue;
        }
        let Some(bracket) = RootBracket::new(a, b, fa, fb) else { continue };
        if let Refined::Root(z) = refine(&f, bracket, tol) {
            if inside.iter().all(|&p| (z - p).abs() > 10.0 * tol) {
                out.push((z, newton_distance(&f, z)));
            }
        }
    }
    out
}

/// Zeros of `J_n` below `x_max`.
fn bessel_zeros_below(n: usize, x_max: f64) -> Result<Vec<f64>> {
    if x_max <= n as f64 {
        return Ok(Vec::new());
    }
    let mut count = ((x_max / std::f64::consts::PI).ceil() as usize + 2).min(MAX_COUNT);
    loop {
        let zeros = bessel_zeros(n, count)?;
        if zeros.last().is_some_and(|&j| j > x_max) || count == MAX_COUNT {
            return Ok(zeros.into_iter().filter(|&j| j <= x_max).collect());
        }
        count = (count * 2).min(MAX_COUNT);
    }
}

/// Transmission dispersion `D_n(z) = M⁺_n(z) + M⁻_n(z)` (closed forms).
pub fn transmission_dispersion(n: usize, z: f64, g: &Geometry) -> f64 {
    m_plus_raw(n, z, g) + m_minus_raw(n, z, g)
}

/// Poles of `D_n` in `(0, hi]`: annulus eigenvalues and contrast-scaled inner
/// Dirichlet eigenvalues.
pub fn transmission_poles(n: usize, g: &Geometry, hi: f64) -> Result<Vec<f64>> {
    let mut poles = mode_eigenvalues_plus_below(n, g, hi)?;
    let x_max = g.r_in() * (hi / g.contrast()).sqrt();
    poles.extend(bessel_zeros_below(n, x_max)?.into_iter().map(|j| g.contrast() * (j / g.r_in()).powi(2)));
    poles.sort_by(f64::total_cmp);
    Ok(poles)
}

fn sort_roots(roots: &mut [DispersionRoot]) {
    roots.sort_by(|a, b| a.z.total_cmp(&b.z).then(a.mode.cmp(&b.mode)).then(a.route.cmp(&b.route)));
}

/// Spectrum of the transmission problem for the given modes.
pub fn transmission_spectrum(
    g: &Geometry,
    modes: Range<usize>,
    window: (f64, f64),
    tol: f64,
) -> Result<SpectrumReport> {
    check_window(window, tol)?;
    if modes.end > MAX_MODE + 1 {
        return Err(Error::Domain(format!("modes must not exceed {MAX_MODE}")));
    }
    let per_mode: Vec<Result<Vec<DispersionRoot>>> = modes
        .clone()
        .into_par_iter()
        .map(|n| {
            let poles = transmission_poles(n, g, window.1)?;
            let found = roots_between_poles(|z| transmission_dispersion(n, z, g), &poles, window, tol, n == 0);
            let mut roots: Vec<DispersionRoot> = found
                .into_iter()
                .map(|(z, residual)| DispersionRoot {
                    z,
                    mode: n,
                    multiplicity: multiplicity(n),
                    residual,
                    route: Route::Transmission,
                })
                .collect();
            if n == 0 && window.0 == 0.0 {
                roots.push(DispersionRoot { z: 0.0, mode: 0, multiplicity: 1, residual: 0.0, route: Route::Transmission });
            }
            Ok(roots)
        })
        .collect();
    let mut roots = Vec::new();
    for r in per_mode {
        roots.extend(r?);
    }
    sort_roots(&mut roots);
    Ok(SpectrumReport { geometry: *g, roots, window, truncation: 0 })
}

/// Annulus eigenvalues of every mode `n ≥ 1` inside the window: the part of
/// the effective spectrum carried by zero-mean eigenfunctions.
fn dirichlet_limit_roots(g: &Geometry, window: (f64, f64)) -> Result<Vec<DispersionRoot>> {
    let modes: Vec<usize> = (1..=MAX_MODE).take_while(|&n| (n as f64 / g.r_out()).powi(2) < window.1).collect();
    let per_mode: Vec<Result<Vec<DispersionRoot>>> = modes
        .into_par_iter()
        .map(|n| {
            Ok(mode_eigenvalues_plus_below(n, g, window.1)?
                .into_iter()
                .filter(|&z| z >= window.0)
                .map(|z| DispersionRoot { z, mode: n, multiplicity: 2, residual: 0.0, route: Route::DirichletLimit })
                .collect())
        })
        .collect();
    let mut out = Vec::new();
    for r in per_mode {
        out.extend(r?);
    }
    Ok(out)
}

/// Scalar effective dispersion `s(z) = M⁺₀(z) + z r_in / 2`.
pub fn effective_dispersion_dtn(z: f64, g: &Geometry) -> f64 {
    m_plus_raw(0, z, g) + 0.5 * z * g.r_in()
}

/// Effective spectrum from the scalar DtN relation `s(z) = 0`, plus `z = 0`
/// and the Dirichlet-limit eigenvalues of modes `n ≥ 1`.
pub fn effective_spectrum_dtn(g: &Geometry, window: (f64, f64), tol: f64) -> Result<SpectrumReport> {
    check_window(window, tol)?;
    let poles = mode_eigenvalues_plus_below(0, g, window.1)?;
    let mut roots: Vec<DispersionRoot> =
        roots_between_poles(|z| effective_dispersion_dtn(z, g), &poles, window, tol, true)
            .into_iter()
            .map(|(z, residual)| DispersionRoot { z, mode: 0, multiplicity: 1, residual, route: Route::EffectiveDtn })
            .collect();
    if window.0 == 0.0 {
        roots.push(DispersionRoot { z: 0.0, mode: 0, multiplicity: 1, residual: 0.0, route: Route::EffectiveDtn });
    }
    roots.extend(dirichlet_limit_roots(g, window)?);
    sort_roots(&mut roots);
    Ok(SpectrumReport { geometry: *g, roots, window, truncation: 0 })
}

/// Series dispersion `F(z) = |Ω| + z Σ_{k≤K} (∫φ⁺_{0,k})² / (λ⁺_{0,k} − z)`.
pub fn effective_dispersion_series(z: f64, g: &Geometry, k_trunc: usize) -> Result<f64> {
    let data = mode_eigen_data(0, g, k_trunc)?;
    let sum: f64 = data.lambda_plus.iter().zip(&data.mean_integrals).map(|(&l, &m)| m * m / (l - z)).sum();
    Ok(g.total_area() + z * sum)
}

/// Effective spectrum from the eigen-series relation `z F(z) = 0`, plus the
/// Dirichlet-limit eigenvalues of modes `n ≥ 1`.
pub fn effective_spectrum_series(
    g: &Geometry,
    k_trunc: usize,
    window: (f64, f64),
    tol: f64,
) -> Result<SpectrumReport> {
    check_window(window, tol)?;
    if k_trunc < 20 {
        return Err(Error::Domain(format!("series truncation {k_trunc} is below 20")));
    }
    let data = mode_eigen_data(0, g, k_trunc)?;
    let top = *data.lambda_plus.last().expect("nonempty eigen-data");
    if window.1 >= top {
        return Err(Error::Domain(format!(
            "window end {} reaches the last retained eigenvalue {top}; raise the truncation",
            window.1
        )));
    }
    let f = |z: f64| {
        let sum: f64 = data.lambda_plus.iter().zip(&data.mean_integrals).map(|(&l, &m)| m * m / (l - z)).sum();
        g.total_area() + z * sum
    };
    let mut roots: Vec<DispersionRoot> = roots_between_poles(f, &data.lambda_plus, window, tol, false)
        .into_iter()
        .map(|(z, residual)| DispersionRoot { z, mode: 0, multiplicity: 1, residual, route: Route::EffectiveSeries })
        .collect();
    if window.0 == 0.0 {
        roots.push(DispersionRoot { z: 0.0, mode: 0, multiplicity: 1, residual: 0.0, route: Route::EffectiveSeries });
    }
    roots.extend(dirichlet_limit_roots(g, window)?);
    sort_roots(&mut roots);
    Ok(SpectrumReport { geometry: *g, roots, window, truncation: k_trunc })
}

/// Steklov eigenvalues `(n, −n / r_in)` of the inner DtN map, mode 0 first.
pub fn steklov_spectrum(g: &Geometry, modes: Range<usize>) -> Result<Vec<(usize, f64)>> {
    modes.map(|n| Ok((n, steklov_lambda_minus(n, g)?))).collect()
}

/// Default window `[0, λ⁺_{0,3} + 1]`.
pub fn default_window(g: &Geometry) -> Result<(f64, f64)> {
    let ev = mode_eigen_data(0, g, 3)?;
    Ok((0.0, ev.lambda_plus[2] + 1.0))
}

//! Per-mode eigen-data of the decoupled operators and harmonic-lift
//! coupling coefficients.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use super::{bessel_zeros, check_mode, mode_eigenvalues_plus, Geometry, MAX_COUNT};
use crate::error::{Error, Result};
use crate::numerics::bessel::{bessel_pair, j_orders};
use crate::numerics::quadrature::integrate;

const NORM_TOL: f64 = 1.0e-10;

/// Eigen-data of one angular mode.
///
/// `pi_plus[k] = ⟨Π₊e_n, φ⁺_{n,k}⟩`, `pi_minus[k] = ⟨Π₋e_n, φ⁻_{n,k}⟩`, with
/// eigenfunctions normalised to unit `L²` norm; annulus eigenfunctions are
/// signed so that their radial derivative at the interface is positive.
/// `lambda_minus` is unweighted; multiply by the contrast where the stiff
/// operator is meant.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeData {
    pub mode: usize,
    pub lambda_plus: Vec<f64>,
    pub lambda_minus: Vec<f64>,
    pub pi_plus: Vec<f64>,
    pub pi_minus: Vec<f64>,
    /// `∫_{Ω₊} φ⁺_{0,k}`; empty for `mode ≥ 1`.
    pub mean_integrals: Vec<f64>,
    /// `‖Π₊e_n‖²`.
    pub lift_norm_plus: f64,
    /// `‖Π₋e_n‖²`.
    pub lift_norm_minus: f64,
}

impl ModeData {
    pub fn count(&self) -> usize {
        self.lambda_plus.len()
    }
}

type CacheKey = (usize, u64, u64, usize);

fn cache() -> &'static Mutex<HashMap<CacheKey, Arc<ModeData>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<ModeData>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Eigen-data of mode `n` with `count` eigenpairs on each side. Results are
/// memoised per `(n, r_in, r_out, count)`; the contrast does not enter.
pub fn mode_eigen_data(n: usize, g: &Geometry, count: usize) -> Result<Arc<ModeData>> {
    check_mode(n)?;
    if count > MAX_COUNT {
        return Err(Error::Domain(format!("eigenvalue count {count} exceeds {MAX_COUNT}")));
    }
    let key = (n, g.r_in().to_bits(), g.r_out().to_bits(), count);
    if let Some(hit) = cache().lock().expect("mode cache poisoned").get(&key) {
        return Ok(Arc::clone(hit));
    }
    let data = Arc::new(compute(n, g, count)?);
    let mut guard = cache().lock().expect("mode cache poisoned");
    Ok(Arc::clone(guard.entry(key).or_insert(data)))
}

fn compute(n: usize, g: &Geometry, count: usize) -> Result<ModeData> {
    let (r, big_r) = (g.r_in(), g.r_out());
    let lambda_plus = mode_eigenvalues_plus(n, g, count)?;
    let mut pi_plus = Vec::with_capacity(count);
    let mut mean_integrals = Vec::new();
    for &lam in &lambda_plus {
        let kappa = lam.sqrt();
        let profile = AnnulusProfile::new(n, kappa, g);
        let panels = (kappa * (big_r - r) / (2.0 * PI)).ceil() as usize + 1;
        let norm_sq = integrate(|rho| profile.value(rho).powi(2) * rho, r, big_r, panels, NORM_TOL)?;
        let c = norm_sq.sqrt().recip();
        let flux = c * kappa * profile.derivative_at_interface();
        pi_plus.push(flux * r.sqrt() / lam);
        if n == 0 {
            mean_integrals.push(flux * r * (2.0 * PI).sqrt() / lam);
        }
    }

    let zeros = bessel_zeros(n, count)?;
    let mut lambda_minus = Vec::with_capacity(count);
    let mut pi_minus = Vec::with_capacity(count);
    for &j in &zeros {
        let lam = (j / r).powi(2);
        let panels = (j / (2.0 * PI)).ceil() as usize + 1;
        let norm_sq = integrate(|rho| j_orders(n, j * rho / r)[n].powi(2) * rho, 0.0, r, panels, NORM_TOL)?;
        let c = norm_sq.sqrt().recip();
        let dj = bessel_pair(n, j).dj;
        pi_minus.push(-c * (j / r) * dj * r.sqrt() / lam);
        lambda_minus.push(lam);
    }

    Ok(ModeData {
        mode: n,
        lambda_plus,
        lambda_minus,
        pi_plus,
        pi_minus,
        mean_integrals,
        lift_norm_plus: lift_norm_plus(n, g)?,
        lift_norm_minus: lift_norm_minus(n, g)?,
    })
}

/// Radial profile `C(κρ) = Y_n'(κ r_out) J_n(κρ) − J_n'(κ r_out) Y_n(κρ)` of an
/// annulus eigenfunction, up to normalisation.
pub(crate) struct AnnulusProfile {
    n: usize,
    kappa: f64,
    r_in: f64,
    cj: f64,
    cy: f64,
}

impl AnnulusProfile {
    pub(crate) fn new(n: usize, kappa: f64, g: &Geometry) -> Self {
        let outer = bessel_pair(n, kappa * g.r_out());
        // Sign chosen so that the profile grows away from the interface.
        let mut p = Self { n, kappa, r_in: g.r_in(), cj: outer.dy, cy: -outer.dj };
        if p.derivative_at_interface() < 0.0 {
            p.cj = -p.cj;
            p.cy = -p.cy;
        }
        p
    }

    pub(crate) fn value(&self, rho: f64) -> f64 {
        let b = bessel_pair(self.n, self.kappa * rho);
        self.cj * b.j + self.cy * b.y
    }

    /// `C'(κ r_in)`, derivative with respect to the argument.
    pub(crate) fn derivative_at_interface(&self) -> f64 {
        let b = bessel_pair(self.n, self.kappa * self.r_in);
        self.cj * b.dj + self.cy * b.dy
    }
}

/// `‖Π₊e_n‖²`: squared norm of the harmonic lift into the annulus.
pub fn lift_norm_plus(n: usize, g: &Geometry) -> Result<f64> {
    check_mode(n)?;
    let (r, big_r) = (g.r_in(), g.r_out());
    if n == 0 {
        return Ok((big_r * big_r - r * r) / (2.0 * r));
    }
    // Lift profile (t^n + t^{-n}) / (s^n + s^{-n}) with t = ρ/r_out, s = r_in/r_out,
    // numerator and denominator multiplied by s^{2n}.
    let s = r / big_r;
    let nf = n as f64;
    let s2n = s.powi(2 * n as i32);
    let high = s2n * (1.0 - s.powi(2 * n as i32 + 2)) / (2.0 * nf + 2.0);
    let middle = s2n * (1.0 - s * s);
    let low = if n == 1 { s * s * (1.0 / s).ln() } else { (s * s - s2n) / (2.0 * nf - 2.0) };
    Ok(big_r * big_r / r * (high + middle + low) / (1.0 + s2n).powi(2))
}

/// `‖Π₋e_n‖² = r_in / (2n + 2)`.
pub fn lift_norm_minus(n: usize, g: &Geometry) -> Result<f64> {
    check_mode(n)?;
    Ok(g.r_in() / (2.0 * n as f64 + 2.0))
}

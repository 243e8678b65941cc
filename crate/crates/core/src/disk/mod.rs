//! The transmission problem on concentric disks, decomposed into angular
//! modes.
//!
//! Conventions: `Ω₋ = {ρ < r_in}` carries the stiff coefficient `a`,
//! `Ω₊ = {r_in < ρ < r_out}` has a Neumann outer wall. Both DtN maps carry a
//! minus sign, `Λ u = −∂u/∂n`, with `n₋` the outward radial direction and
//! `n₊` the inward one at the interface. Boundary functions are expanded in
//! `e_n(θ) = (2π r_in)^{-1/2} e^{inθ}`; modes `n ≥ 1` stand for the pair `±n`.

mod eigen_data;
mod series;

pub use eigen_data::{lift_norm_minus, lift_norm_plus, mode_eigen_data, ModeData};
pub use series::{m_minus_series, m_minus_series_with, m_plus_series, m_plus_series_with, truncated_triple, SeriesForm};

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::bessel::{bessel_pair, j_orders, j_ratio, log_bessel};
use crate::numerics::roots::{find_roots_with, ScanOptions};

/// Largest angular mode index supported.
pub const MAX_MODE: usize = 64;
/// Largest eigenvalue count per mode.
pub const MAX_COUNT: usize = 512;
/// Distance (in the Bessel argument) below which `m_minus` reports a pole.
pub const MINUS_POLE_DISTANCE: f64 = 1.0e-8;
/// Distance (in `z`) below which `m_plus` reports a pole.
pub const PLUS_POLE_DISTANCE: f64 = 1.0e-8;

const SCAN_POINTS_PER_CHUNK: usize = 256;

/// Concentric-disk problem data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    r_in: f64,
    r_out: f64,
    contrast: f64,
}

impl Geometry {
    pub fn new(r_in: f64, r_out: f64, contrast: f64) -> Result<Self> {
        if !(r_in > 0.0 && r_in < r_out && r_out.is_finite()) {
            return Err(Error::Domain(format!("radii must satisfy 0 < r_in < r_out, got {r_in}, {r_out}")));
        }
        if !(contrast > 0.0 && contrast.is_finite()) {
            return Err(Error::Domain(format!("contrast must be positive, got {contrast}")));
        }
        Ok(Self { r_in, r_out, contrast })
    }

    pub fn r_in(&self) -> f64 {
        self.r_in
    }

    pub fn r_out(&self) -> f64 {
        self.r_out
    }

    pub fn contrast(&self) -> f64 {
        self.contrast
    }

    /// Same radii, different contrast.
    pub fn with_contrast(&self, contrast: f64) -> Result<Self> {
        Self::new(self.r_in, self.r_out, contrast)
    }

    /// `|Γ| = 2π r_in`.
    pub fn interface_length(&self) -> f64 {
        2.0 * PI * self.r_in
    }

    /// `|Ω₋| = π r_in²`.
    pub fn inner_area(&self) -> f64 {
        PI * self.r_in * self.r_in
    }

    /// `|Ω₊| = π (r_out² − r_in²)`.
    pub fn annulus_area(&self) -> f64 {
        PI * (self.r_out * self.r_out - self.r_in * self.r_in)
    }

    /// `|Ω| = π r_out²`.
    pub fn total_area(&self) -> f64 {
        PI * self.r_out * self.r_out
    }
}

/// Orthonormal angular basis function `e_n` on the interface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryMode {
    pub mode: usize,
    r_in: f64,
}

impl BoundaryMode {
    pub fn new(mode: usize, g: &Geometry) -> Self {
        Self { mode, r_in: g.r_in }
    }

    /// `e_n(θ) = (2π r_in)^{-1/2} e^{inθ}`.
    pub fn value(&self, theta: f64) -> Complex64 {
        Complex64::from_polar((2.0 * PI * self.r_in).powf(-0.5), self.mode as f64 * theta)
    }
}

/// The normalised constant `ψ_* = |Γ|^{-1/2}` on the interface.
pub fn psi_star(g: &Geometry) -> f64 {
    g.interface_length().powf(-0.5)
}

fn check_mode(n: usize) -> Result<()> {
    if n > MAX_MODE {
        return Err(Error::Domain(format!("mode {n} exceeds {MAX_MODE}")));
    }
    Ok(())
}

fn check_z(z: f64) -> Result<()> {
    if !(z >= 0.0 && z.is_finite()) {
        return Err(Error::Domain(format!("spectral parameter {z} must be finite and nonnegative")));
    }
    Ok(())
}

/// Mode-`n` eigenvalue of the inner DtN map at unit contrast: `−n / r_in`.
pub fn steklov_lambda_minus(n: usize, g: &Geometry) -> Result<f64> {
    check_mode(n)?;
    Ok(-(n as f64) / g.r_in)
}

/// Mode-`n` eigenvalue of the annulus DtN map (Neumann outer wall):
/// `n (r_in^{2n} − r_out^{2n}) / (r_in (r_in^{2n} + r_out^{2n}))`.
pub fn lambda_plus(n: usize, g: &Geometry) -> Result<f64> {
    check_mode(n)?;
    Ok(lambda_plus_unchecked(n, g))
}

fn lambda_plus_unchecked(n: usize, g: &Geometry) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let q = (g.r_in / g.r_out).powi(2 * n as i32);
    n as f64 * (q - 1.0) / (g.r_in * (q + 1.0))
}

/// Inner DtN map `−a k J_n'(k r_in) / J_n(k r_in)`, `k = √(z/a)`, without
/// pole checks.
pub(crate) fn m_minus_raw(n: usize, z: f64, g: &Geometry) -> f64 {
    let a = g.contrast;
    let harmonic = -a * n as f64 / g.r_in;
    if z == 0.0 {
        return harmonic;
    }
    let k = (z / a).sqrt();
    harmonic + a * k * j_ratio(n, k * g.r_in)
}

/// Inner DtN map at real `z ≥ 0`, weighted by the contrast.
pub fn m_minus(n: usize, z: f64, g: &Geometry) -> Result<f64> {
    check_mode(n)?;
    check_z(z)?;
    let k = (z / g.contrast).sqrt();
    let x = k * g.r_in;
    if x >= n as f64 + 1.0 {
        let j = j_orders(n + 1, x);
        let dj = if n == 0 { -j[1] } else { n as f64 / x * j[n] - j[n + 1] };
        let step = j[n] / dj;
        if step.abs() <= MINUS_POLE_DISTANCE {
            let zero = x - step;
            return Err(Error::Pole {
                function: "inner Dirichlet-to-Neumann map",
                z,
                pole: g.contrast * (zero / g.r_in).powi(2),
            });
        }
    }
    Ok(m_minus_raw(n, z, g))
}

/// Annulus DtN map `u'(r_in)` for the solution with `u(r_in) = 1` and
/// `u'(r_out) = 0`, without pole checks.
pub(crate) fn m_plus_raw(n: usize, z: f64, g: &Geometry) -> f64 {
    if z == 0.0 {
        return lambda_plus_unchecked(n, g);
    }
    let kappa = z.sqrt();
    let x1 = kappa * g.r_in;
    let x2 = kappa * g.r_out;
    if n >= 1 && x2 * x2 < n as f64 {
        return m_plus_log(n, kappa, x1, x2);
    }
    let p1 = bessel_pair(n, x1);
    let p2 = bessel_pair(n, x2);
    let num = p2.dy * p1.dj - p2.dj * p1.dy;
    let den = p2.dy * p1.j - p2.dj * p1.y;
    kappa * num / den
}

/// Small-argument form: numerator and denominator divided by
/// `−J_n'(κ r_out) Y_n(κ r_in)`, all magnitudes kept as logarithms.
fn m_plus_log(n: usize, kappa: f64, x1: f64, x2: f64) -> f64 {
    let inner = log_bessel(n, x1);
    let outer = log_bessel(n, x2);
    // rho = Y'(x2) J(x1) / (J'(x2) Y(x1)); Y < 0 and J > 0 in this range.
    let ln_mag = outer.ln_neg_y + outer.dy_over_y.abs().ln() + inner.ln_j
        - outer.ln_j
        - outer.dj_over_j.abs().ln()
        - inner.ln_neg_y;
    let sign_dy2 = -outer.dy_over_y.signum();
    let sign_dj2 = outer.dj_over_j.signum();
    let rho = -sign_dy2 * sign_dj2 * ln_mag.exp();
    kappa * (inner.dy_over_y - rho * inner.dj_over_j) / (1.0 - rho)
}

/// Annulus DtN map at real `z ≥ 0`; equals [`lambda_plus`] at `z = 0`.
pub fn m_plus(n: usize, z: f64, g: &Geometry) -> Result<f64> {
    check_mode(n)?;
    check_z(z)?;
    if z > 0.0 {
        let kappa = z.sqrt();
        let x1 = kappa * g.r_in;
        let x2 = kappa * g.r_out;
        if !(n >= 1 && x2 * x2 < n as f64) {
            let p1 = bessel_pair(n, x1);
            let p2 = bessel_pair(n, x2);
            let nf = (n * n) as f64;
            let den = p2.dy * p1.j - p2.dj * p1.y;
            let d2y = -p2.dy / x2 - (1.0 - nf / (x2 * x2)) * p2.y;
            let d2j = -p2.dj / x2 - (1.0 - nf / (x2 * x2)) * p2.j;
            let dden = g.r_in * (p2.dy * p1.dj - p2.dj * p1.dy) + g.r_out * (d2y * p1.j - d2j * p1.y);
            let step = den / dden;
            if step.abs() < 1e-3 * kappa && (2.0 * kappa * step).abs() <= PLUS_POLE_DISTANCE {
                return Err(Error::Pole {
                    function: "annulus Dirichlet-to-Neumann map",
                    z,
                    pole: (kappa - step).powi(2),
                });
            }
        }
    }
    let v = m_plus_raw(n, z, g);
    if !v.is_finite() {
        return Err(Error::Accuracy(format!("annulus DtN map not representable at n = {n}, z = {z}")));
    }
    Ok(v)
}

/// Positive roots of `f` in increasing order, scanning `[start, ∞)` in chunks
/// of width `chunk` until `count` roots are found.
fn scan_roots<F: Fn(f64) -> f64>(f: F, start: f64, chunk: f64, count: usize) -> Result<Vec<f64>> {
    let mut roots: Vec<f64> = Vec::with_capacity(count);
    let mut lo = start;
    let options = ScanOptions { points: SCAN_POINTS_PER_CHUNK };
    while roots.len() < count {
        let hi = lo + chunk;
        let tol = 4.0 * f64::EPSILON * hi;
        for r in find_roots_with(&f, (lo, hi), SCAN_POINTS_PER_CHUNK, tol, options)? {
            if roots.last().is_none_or(|&last| r > last + tol) {
                roots.push(r);
            }
        }
        lo = hi;
    }
    roots.truncate(count);
    Ok(roots)
}

/// First `count` eigenvalues `λ⁺_{n,k} = κ²` of the annulus operator (Dirichlet
/// at `r_in`, Neumann at `r_out`): `κ` solves
/// `J_n(κ r_in) Y_n'(κ r_out) − Y_n(κ r_in) J_n'(κ r_out) = 0`.
pub fn mode_eigenvalues_plus(n: usize, g: &Geometry, count: usize) -> Result<Vec<f64>> {
    check_mode(n)?;
    check_count(count)?;
    let (r, big_r) = (g.r_in, g.r_out);
    let cross = |kappa: f64| {
        let p1 = bessel_pair(n, kappa * r);
        let p2 = bessel_pair(n, kappa * big_r);
        p1.j * p2.dy - p1.y * p2.dj
    };
    // Every eigenfunction oscillates, so κ r_out > n.
    let start = (n as f64 / big_r).max(1.0e-6 / big_r);
    let chunk = 4.0 * PI / (big_r - r);
    Ok(scan_roots(cross, start, chunk, count)?.into_iter().map(|k| k * k).collect())
}

/// First `count` positive zeros `j_{n,k}` of `J_n`.
pub fn bessel_zeros(n: usize, count: usize) -> Result<Vec<f64>> {
    check_mode(n)?;
    check_count(count)?;
    let start = (n as f64).max(1.0e-3);
    scan_roots(|x| j_orders(n, x)[n], start, 4.0 * PI, count)
}

/// First `count` Dirichlet eigenvalues `(j_{n,k} / r_in)²` of the unweighted
/// Laplacian on the inner disk.
pub fn mode_eigenvalues_minus(n: usize, g: &Geometry, count: usize) -> Result<Vec<f64>> {
    Ok(bessel_zeros(n, count)?.into_iter().map(|j| (j / g.r_in).powi(2)).collect())
}

fn check_count(count: usize) -> Result<()> {
    if count > MAX_COUNT {
        return Err(Error::Domain(format!("eigenvalue count {count} exceeds {MAX_COUNT}")));
    }
    Ok(())
}

/// Annulus eigenvalues of mode `n` not exceeding `hi`.
pub fn mode_eigenvalues_plus_below(n: usize, g: &Geometry, hi: f64) -> Result<Vec<f64>> {
    if hi <= 0.0 || (n as f64 / g.r_out).powi(2) >= hi {
        return Ok(Vec::new());
    }
    // Sturm comparison: consecutive κ differ by at least π/(r_out − r_in)
    // asymptotically; overshoot the estimate and trim.
    let estimate = (hi.sqrt() * (g.r_out - g.r_in) / PI).ceil() as usize + 2;
    let mut count = estimate.min(MAX_COUNT);
    loop {
        let values = mode_eigenvalues_plus(n, g, count)?;
        if values.last().is_some_and(|&v| v > hi) || count == MAX_COUNT {
            return Ok(values.into_iter().filter(|&v| v <= hi).collect());
        }
        count = (count * 2).min(MAX_COUNT);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> Geometry {
        Geometry::new(1.0, 2.0, 1.0).unwrap()
    }

    #[test]
    fn geometry_validation() {
        assert!(Geometry::new(2.0, 1.0, 1.0).is_err());
        assert!(Geometry::new(0.0, 1.0, 1.0).is_err());
        assert!(Geometry::new(1.0, 2.0, 0.0).is_err());
        let g = unit();
        assert!((g.interface_length() - 2.0 * PI).abs() < 1e-15);
        assert!((g.total_area() - g.inner_area() - g.annulus_area()).abs() < 1e-14);
    }

    #[test]
    fn steklov_values() {
        assert_eq!(steklov_lambda_minus(0, &unit()).unwrap(), 0.0);
        assert_eq!(steklov_lambda_minus(1, &unit()).unwrap(), -1.0);
        let g = Geometry::new(0.5, 2.0, 1.0).unwrap();
        assert_eq!(steklov_lambda_minus(2, &g).unwrap(), -4.0);
        assert!(steklov_lambda_minus(65, &g).is_err());
    }

    #[test]
    fn annulus_harmonic_values() {
        let g = unit();
        assert_eq!(lambda_plus(0, &g).unwrap(), 0.0);
        // u = (ρ + 4/ρ)/5 has u(1) = 1, u'(2) = 0, u'(1) = −3/5.
        assert!((lambda_plus(1, &g).unwrap() + 0.6).abs() < 1e-15);
        let v = lambda_plus(20, &g).unwrap();
        assert!((v / -20.0 - 1.0).abs() < 0.01);
    }

    #[test]
    fn harmonic_limits() {
        let g = Geometry::new(1.0, 2.0, 7.0).unwrap();
        for n in 0..5 {
            assert_eq!(m_minus(n, 0.0, &g).unwrap(), 7.0 * steklov_lambda_minus(n, &g).unwrap());
            let near = m_plus(n, 1e-12, &g).unwrap();
            assert!((near - lambda_plus(n, &g).unwrap()).abs() < 1e-8, "n={n} {near}");
        }
    }

    #[test]
    fn stiff_inner_map_leading_term() {
        let g = Geometry::new(1.0, 2.0, 1e6).unwrap();
        assert!((m_minus(0, 1.0, &g).unwrap() - 0.5).abs() < 1e-5);
    }

    #[test]
    fn inner_map_pole() {
        let g = Geometry::new(1.0, 2.0, 10.0).unwrap();
        let j01 = 2.404825557695773;
        let pole = 10.0 * j01 * j01;
        assert!(m_minus(0, pole - 1e-6, &g).unwrap().abs() > 1e6);
        match m_minus(0, pole, &g) {
            Err(Error::Pole { pole: p, .. }) => assert!((p - pole).abs() < 1e-9 * pole),
            other => panic!("expected pole, got {other:?}"),
        }
    }

    #[test]
    fn annulus_first_eigenvalue_and_pole() {
        let g = unit();
        let ev = mode_eigenvalues_plus(0, &g, 3).unwrap();
        let kappa = ev[0].sqrt();
        let p1 = bessel_pair(0, kappa);
        let p2 = bessel_pair(0, 2.0 * kappa);
        assert!((p1.j * p2.dy - p1.y * p2.dj).abs() < 1e-13);
        let below = m_plus(0, ev[0] - 0.1, &g).unwrap();
        let above = m_plus(0, ev[0] + 0.1, &g).unwrap();
        assert!(below * above < 0.0);
        assert!(matches!(m_plus(0, ev[0], &g), Err(Error::Pole { .. })));
    }

    #[test]
    fn annulus_eigenvalue_structure() {
        let g = unit();
        let ev0 = mode_eigenvalues_plus(0, &g, 22).unwrap();
        let ev1 = mode_eigenvalues_plus(1, &g, 1).unwrap();
        assert!(ev1[0] > ev0[0]);
        let gap = ev0[21].sqrt() - ev0[20].sqrt();
        assert!((gap / PI - 1.0).abs() < 0.02);
        assert!(ev0.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn bessel_zero_values() {
        let z = bessel_zeros(0, 2).unwrap();
        assert!((z[0] - 2.404825557695773).abs() < 1e-12);
        assert!((z[1] - 5.520078110286311).abs() < 1e-12);
        let z1 = bessel_zeros(1, 1).unwrap();
        assert!((z1[0] - 3.831705970207512).abs() < 1e-12);
    }

    #[test]
    fn log_path_matches_direct_at_crossover() {
        // At κ r_out slightly below √n the small-argument path takes over.
        let g = unit();
        let n = 16;
        let z_switch = n as f64 / 4.0;
        for z in [z_switch * 0.98, z_switch * 1.02] {
            let kappa = f64::sqrt(z);
            let p1 = bessel_pair(n, kappa);
            let p2 = bessel_pair(n, 2.0 * kappa);
            let direct = kappa * (p2.dy * p1.dj - p2.dj * p1.dy) / (p2.dy * p1.j - p2.dj * p1.y);
            let v = m_plus(n, z, &g).unwrap();
            assert!((v / direct - 1.0).abs() < 1e-11, "z={z}: {v} vs {direct}");
        }
    }

    #[test]
    fn high_mode_tiny_z_is_finite() {
        let g = unit();
        let v = m_plus(64, 1e-14, &g).unwrap();
        assert!((v - lambda_plus(64, &g).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn m_sum_increasing_between_poles() {
        let g = Geometry::new(1.0, 2.0, 100.0).unwrap();
        for n in 0..3 {
            let poles = mode_eigenvalues_plus(n, &g, 2).unwrap();
            let (lo, hi) = (poles[0] + 1e-3, poles[1] - 1e-3);
            let mut prev = f64::NEG_INFINITY;
            for i in 0..=200 {
                let z = lo + (hi - lo) * i as f64 / 200.0;
                let v = m_plus(n, z, &g).unwrap() + m_minus(n, z, &g).unwrap();
                assert!(v > prev, "n={n} z={z}");
                prev = v;
            }
        }
    }
}

//! Bracketing root search with pole rejection.

use crate::error::{Error, Result};

/// Default number of uniform scan points per window.
pub const DEFAULT_SCAN_POINTS: usize = 2048;

/// An interval on which `f` changes sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootBracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

impl RootBracket {
    /// Returns `None` unless `lo < hi` and the endpoint values have strictly
    /// opposite signs.
    pub fn new(lo: f64, hi: f64, f_lo: f64, f_hi: f64) -> Option<Self> {
        (lo < hi && f_lo * f_hi < 0.0).then_some(Self { lo, hi, f_lo, f_hi })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Outcome of refining a bracket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Refined {
    Root(f64),
    /// The sign change came from a pole: `|f|` grew during refinement.
    Pole(f64),
}

/// Bisects `bracket` down to width `tol` (or to floating-point resolution).
pub fn refine<F: Fn(f64) -> f64>(f: &F, bracket: RootBracket, tol: f64) -> Refined {
    let RootBracket { mut lo, mut hi, mut f_lo, mut f_hi } = bracket;
    let start = bracket.f_lo.abs().max(bracket.f_hi.abs());
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Refined::Root(mid);
        }
        if !fm.is_finite() {
            return Refined::Pole(mid);
        }
        if (fm < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
            f_hi = fm;
        }
    }
    let mid = 0.5 * (lo + hi);
    if f_lo.abs().min(f_hi.abs()) > start {
        Refined::Pole(mid)
    } else {
        Refined::Root(mid)
    }
}

/// Scan settings for [`find_roots_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    pub points: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self { points: DEFAULT_SCAN_POINTS }
    }
}

/// Ascending roots of `f` in `[lo, hi]` with the default scan grid.
pub fn find_roots<F: Fn(f64) -> f64>(f: F, window: (f64, f64), max_count: usize, tol: f64) -> Result<Vec<f64>> {
    find_roots_with(f, window, max_count, tol, ScanOptions::default())
}

/// Ascending roots of `f` in `[lo, hi]`.
///
/// Sign changes between consecutive finite grid values are refined by
/// bisection; brackets whose refinement shows `|f|` growing are poles and are
/// dropped. Grid points where `f` is not finite are skipped.
pub fn find_roots_with<F: Fn(f64) -> f64>(
    f: F,
    window: (f64, f64),
    max_count: usize,
    tol: f64,
    options: ScanOptions,
) -> Result<Vec<f64>> {
    let (lo, hi) = window;
    if !(lo < hi && lo.is_finite() && hi.is_finite()) {
        return Err(Error::Domain(format!("root window [{lo}, {hi}] is empty or not finite")));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Domain(format!("root tolerance {tol} must be positive")));
    }
    let points = options.points.max(2);
    let step = (hi - lo) / (points - 1) as f64;
    let grid: Vec<(f64, f64)> = (0..points)
        .map(|i| {
            let x = if i + 1 == points { hi } else { lo + i as f64 * step };
            (x, f(x))
        })
        .collect();
    if grid.iter().all(|(_, v)| !v.is_finite()) {
        return Err(Error::Evaluation { lo, hi });
    }

    let mut roots = Vec::new();
    let push = |r: f64, roots: &mut Vec<f64>| -> Result<()> {
        roots.push(r);
        if roots.len() > max_count {
            return Err(Error::RootCapacity { max_count, lo, hi });
        }
        Ok(())
    };
    for pair in grid.windows(2) {
        let (x0, f0) = pair[0];
        let (x1, f1) = pair[1];
        if !f0.is_finite() || !f1.is_finite() {
            continue;
        }
        if f0 == 0.0 {
            push(x0, &mut roots)?;
            continue;
        }
        if let Some(bracket) = RootBracket::new(x0, x1, f0, f1) {
            if let Refined::Root(r) = refine(&f, bracket, tol) {
                push(r, &mut roots)?;
            }
        }
    }
    if let Some(&(x, v)) = grid.last() {
        if v == 0.0 {
            push(x, &mut roots)?;
        }
    }
    Ok(roots)
}

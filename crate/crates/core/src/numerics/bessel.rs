//! Bessel functions of the first and second kind for integer order and
//! real, nonnegative argument.
//!
//! Scheme:
//! - `J_n`: Miller backward recurrence normalised by `J_0 + 2 sum J_2k = 1`
//!   for small arguments (or orders comparable to the argument), otherwise the
//!   Hankel asymptotic expansion for `J_0`, `J_1` followed by upward recurrence.
//! - `Y_n`: Neumann series in `J_k` for small arguments, Hankel expansion for
//!   large ones, upward recurrence in the order (stable for `Y`).

use std::f64::consts::{FRAC_2_PI, PI};

use crate::error::{Error, Result};

/// Largest order accepted by the public evaluators.
pub const MAX_ORDER: usize = 64;
/// Largest argument accepted by the public evaluators.
pub const MAX_ARGUMENT: f64 = 1.0e4;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const HANKEL_THRESHOLD: f64 = 25.0;
const RESCALE_LIMIT: f64 = 1.0e250;

fn check_order(n: usize) -> Result<()> {
    if n > MAX_ORDER {
        return Err(Error::Domain(format!("Bessel order {n} exceeds {MAX_ORDER}")));
    }
    Ok(())
}

fn check_argument(x: f64, allow_zero: bool) -> Result<()> {
    let ok = x.is_finite() && x <= MAX_ARGUMENT && if allow_zero { x >= 0.0 } else { x > 0.0 };
    if !ok {
        return Err(Error::Domain(format!("Bessel argument {x} outside the supported range")));
    }
    Ok(())
}

/// `J_n(x)` for `n <= 64`, `0 <= x <= 1e4`.
pub fn bessel_j(n: usize, x: f64) -> Result<f64> {
    check_order(n)?;
    check_argument(x, true)?;
    Ok(j_orders(n, x)[n])
}

/// `Y_n(x)` for `n <= 64`, `0 < x <= 1e4`.
///
/// Values that overflow `f64` (very small `x` at high order) are reported as
/// a domain error rather than an infinity.
pub fn bessel_y(n: usize, x: f64) -> Result<f64> {
    check_order(n)?;
    check_argument(x, false)?;
    let y = y_orders(n, x)[n];
    if !y.is_finite() {
        return Err(Error::Domain(format!("Y_{n}({x}) overflows")));
    }
    Ok(y)
}

/// `J_n'(x)` via `(J_{n-1} - J_{n+1}) / 2`, with `J_0' = -J_1`.
pub fn bessel_j_prime(n: usize, x: f64) -> Result<f64> {
    check_order(n)?;
    check_argument(x, true)?;
    let j = j_orders(n + 1, x);
    Ok(derivative_from_orders(&j, n))
}

/// `Y_n'(x)` via `(Y_{n-1} - Y_{n+1}) / 2`, with `Y_0' = -Y_1`.
pub fn bessel_y_prime(n: usize, x: f64) -> Result<f64> {
    check_order(n)?;
    check_argument(x, false)?;
    let y = y_orders(n + 1, x);
    let d = derivative_from_orders(&y, n);
    if !d.is_finite() {
        return Err(Error::Domain(format!("Y_{n}'({x}) overflows")));
    }
    Ok(d)
}

fn derivative_from_orders(c: &[f64], n: usize) -> f64 {
    if n == 0 {
        -c[1]
    } else {
        0.5 * (c[n - 1] - c[n + 1])
    }
}

/// Values and first derivatives of `J_n` and `Y_n` at one argument.
#[derive(Debug, Clone, Copy)]
pub(crate) struct BesselPair {
    pub j: f64,
    pub dj: f64,
    pub y: f64,
    pub dy: f64,
}

/// Unchecked evaluation used by the dispersion functions. `Y` entries may be
/// infinite for tiny arguments at high order.
pub(crate) fn bessel_pair(n: usize, x: f64) -> BesselPair {
    let j = j_orders(n + 1, x);
    let y = y_orders(n + 1, x);
    BesselPair {
        j: j[n],
        dj: derivative_from_orders(&j, n),
        y: y[n],
        dy: derivative_from_orders(&y, n),
    }
}

/// `J_0 ..= J_nmax` at `x >= 0`.
pub(crate) fn j_orders(nmax: usize, x: f64) -> Vec<f64> {
    if x == 0.0 {
        let mut out = vec![0.0; nmax + 1];
        out[0] = 1.0;
        return out;
    }
    if x < HANKEL_THRESHOLD || (nmax as f64) >= 0.5 * x {
        let mut all = j_miller(nmax, x);
        all.truncate(nmax + 1);
        return all;
    }
    let (j0, _) = hankel(0, x);
    let (j1, _) = hankel(1, x);
    upward(j0, j1, nmax, x)
}

/// `Y_0 ..= Y_nmax` at `x > 0`.
pub(crate) fn y_orders(nmax: usize, x: f64) -> Vec<f64> {
    let (y0, y1) = if x < HANKEL_THRESHOLD {
        neumann_y01(x)
    } else {
        (hankel(0, x).1, hankel(1, x).1)
    };
    upward(y0, y1, nmax, x)
}

fn upward(c0: f64, c1: f64, nmax: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(nmax + 1);
    out.push(c0);
    if nmax >= 1 {
        out.push(c1);
    }
    for k in 1..nmax {
        let next = 2.0 * k as f64 / x * out[k] - out[k - 1];
        out.push(next);
    }
    out
}

/// Miller backward recurrence. Returns `J_0 ..= J_m` for the start order `m`
/// (always at least `nmax`).
fn j_miller(nmax: usize, x: f64) -> Vec<f64> {
    let big = (nmax as f64).max(x);
    let mut m = (big + 15.0 + (60.0 * big).sqrt()).ceil() as usize;
    m = m.max(nmax + 2);
    if m % 2 == 1 {
        m += 1;
    }
    let mut out = vec![0.0; m + 1];
    let mut above = 0.0;
    let mut current = 1.0e-30;
    out[m] = current;
    let mut norm = 0.0;
    for k in (1..=m).rev() {
        let below = 2.0 * k as f64 / x * current - above;
        above = current;
        current = below;
        out[k - 1] = current;
        if (k - 1) % 2 == 0 && k > 1 {
            norm += 2.0 * current;
        }
        if current.abs() > RESCALE_LIMIT {
            let s = 1.0 / RESCALE_LIMIT;
            current *= s;
            above *= s;
            norm *= s;
            for v in &mut out[k - 1..] {
                *v *= s;
            }
        }
    }
    norm += out[0];
    for v in &mut out {
        *v /= norm;
    }
    out
}

/// `Y_0`, `Y_1` from their Neumann series in `J_k`.
fn neumann_y01(x: f64) -> (f64, f64) {
    let j = j_miller(1, x);
    let log_term = (0.5 * x).ln() + EULER_GAMMA;
    let mut s0 = 0.0;
    let mut k = 1;
    while 2 * k < j.len() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        s0 += sign * j[2 * k] / k as f64;
        k += 1;
    }
    let y0 = FRAC_2_PI * (log_term * j[0] - 2.0 * s0);

    let mut s1 = 0.0;
    let mut k = 1;
    while 2 * k + 1 < j.len() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let kf = k as f64;
        s1 += sign * (2.0 * kf + 1.0) * j[2 * k + 1] / (kf * (kf + 1.0));
        k += 1;
    }
    let y1 = FRAC_2_PI * (-j[0] / x + (log_term - 1.0) * j[1] - s1);
    (y0, y1)
}

/// Hankel asymptotic expansion for order 0 or 1; returns `(J, Y)`.
fn hankel(order: u32, x: f64) -> (f64, f64) {
    let mu = 4.0 * (order * order) as f64;
    let mut term = 1.0;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut last = f64::INFINITY;
    for k in 1..200usize {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (8.0 * k as f64 * x);
        if term.abs() > last {
            break;
        }
        last = term.abs();
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1.0e-18 {
            break;
        }
    }
    let phase = (0.5 * order as f64 + 0.25) * PI;
    let (sx, cx) = x.sin_cos();
    let (sp, cp) = phase.sin_cos();
    let cos_chi = cx * cp + sx * sp;
    let sin_chi = sx * cp - cx * sp;
    let amp = (FRAC_2_PI / x).sqrt();
    (amp * (p * cos_chi - q * sin_chi), amp * (p * sin_chi + q * cos_chi))
}

/// Logarithmic representation of `J_n`, `Y_n` and their logarithmic
/// derivatives for `n >= 1` and `x^2 < n`, where the plain values may over-
/// or underflow. Inside this range none of the four functions has a zero.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LogBessel {
    /// `ln J_n(x)`; `J_n(x) > 0` here.
    pub ln_j: f64,
    /// `J_n'(x) / J_n(x)`.
    pub dj_over_j: f64,
    /// `ln |Y_n(x)|`; `Y_n(x) < 0` here.
    pub ln_neg_y: f64,
    /// `Y_n'(x) / Y_n(x)`.
    pub dy_over_y: f64,
}

pub(crate) fn log_bessel(n: usize, x: f64) -> LogBessel {
    debug_assert!(n >= 1 && x > 0.0 && x * x < n as f64);
    // Scaled ascending series: J_v(x) = (x/2)^v / v! * s(v).
    let scaled = |v: usize| -> f64 {
        let q = -0.25 * x * x;
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..200usize {
            term *= q / (k as f64 * (v + k) as f64);
            sum += term;
            if term.abs() < 1.0e-17 * sum.abs() {
                break;
            }
        }
        sum
    };
    let nf = n as f64;
    let s_prev = scaled(n - 1);
    let s_mid = scaled(n);
    let s_next = scaled(n + 1);
    let ln_j = nf * (0.5 * x).ln() - ln_factorial(n) + s_mid.ln();
    let prev_ratio = 2.0 / x * nf * s_prev / s_mid;
    let next_ratio = 0.5 * x / (nf + 1.0) * s_next / s_mid;
    let dj_over_j = 0.5 * (prev_ratio - next_ratio);

    // Upward recurrence for Y with explicit rescaling; all Y_k < 0 here.
    let (y0, y1) = neumann_y01(x);
    let mut ln_scale = 0.0;
    let mut prev = y0;
    let mut cur = y1;
    for k in 1..=n {
        let next = 2.0 * k as f64 / x * cur - prev;
        prev = cur;
        cur = next;
        if cur.abs() > 1.0e100 {
            prev *= 1.0e-100;
            cur *= 1.0e-100;
            ln_scale += 100.0 * std::f64::consts::LN_10;
        }
    }
    // prev = Y_n, cur = Y_{n+1} (scaled); Y_{n-1} = 2n/x Y_n - Y_{n+1}.
    let y_n = prev;
    let y_next = cur;
    let y_prev = 2.0 * nf / x * y_n - y_next;
    LogBessel {
        ln_j,
        dj_over_j,
        ln_neg_y: (-y_n).ln() + ln_scale,
        dy_over_y: 0.5 * (y_prev - y_next) / y_n,
    }
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Ratio `J_{n+1}(x) / J_n(x)`.
///
/// Uses the continued fraction below the first zero region (`x < n + 1`),
/// where it converges quickly and is immune to underflow, and the direct
/// quotient elsewhere.
pub(crate) fn j_ratio(n: usize, x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if x < n as f64 + 1.0 {
        // Modified Lentz for J_{n+1}/J_n = 1/(2(n+1)/x - 1/(2(n+2)/x - ...)).
        let tiny = 1.0e-300;
        let mut f = tiny;
        let mut c = f;
        let mut d = 0.0;
        for i in 1..10_000usize {
            let b = 2.0 * (n + i) as f64 / x;
            let a = if i == 1 { 1.0 } else { -1.0 };
            d = b + a * d;
            if d.abs() < tiny {
                d = tiny;
            }
            c = b + a / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let delta = c * d;
            f *= delta;
            if (delta - 1.0).abs() < 1.0e-16 {
                break;
            }
        }
        return f;
    }
    let j = j_orders(n + 1, x);
    j[n + 1] / j[n]
}

#[cfg(test)]
mod tests {
    use super::*;

    // (n, x, J_n(x), Y_n(x)) from an independent 40-digit evaluation.
    const REFERENCE: &[(usize, f64, f64, f64)] = &[
        (0, 1e-06, 0.99999999999975, -8.869031481659444),
        (0, 0.5, 0.9384698072408129, -0.44451873350670656),
        (0, 1.0, 0.7651976865579666, 0.08825696421567696),
        (1, 1.0, 0.4400505857449335, -0.7812128213002887),
        (2, 3.7, 0.42832965620657587, 0.11915507531954182),
        (5, 10.0, -0.23406152818679363, 0.13540304768936232),
        (8, 0.3, 6.340502484263519e-12, -6279815900.097942),
        (3, 24.9, 0.11974280773254818, 0.10682044483174945),
        (0, 25.1, 0.10827567149994945, -0.11676770763803694),
        (1, 40.0, 0.126038318037585, -0.005793505821549633),
        (10, 30.0, -0.12987689399858876, 0.07505670212239711),
        (20, 5.0, 2.7703300521289416e-11, -593396529.6914321),
        (20, 50.0, -0.11670435275957974, 0.01644263394811578),
        (40, 35.0, 0.014965632617051043, -1.126666790758451),
        (64, 10.0, 2.9049360287291094e-45, -1.733413671038701e+42),
        (64, 100.0, 0.03998506945291834, 0.08176274673907619),
        (0, 1000.0, 0.024786686152420176, 0.0047159179776228135),
        (7, 1234.5, -0.01795064567181806, -0.013909455301936893),
        (64, 9999.0, -0.0023640770966683617, 0.007621075232612051),
        (1, 10000.0, 0.0036474507555295803, 0.007096342752536495),
        (30, 80.0, 0.09232703007883206, 0.007712745277003392),
    ];

    #[test]
    fn matches_reference_values() {
        for &(n, x, j_ref, y_ref) in REFERENCE {
            let j = bessel_j(n, x).unwrap();
            assert!(
                (j - j_ref).abs() <= 1e-12 * j_ref.abs().max(1.0),
                "J_{n}({x}) = {j}, expected {j_ref}"
            );
            let y = bessel_y(n, x).unwrap();
            assert!(
                (y - y_ref).abs() <= 1e-10 * y_ref.abs().max(1e-2),
                "Y_{n}({x}) = {y}, expected {y_ref}"
            );
        }
    }

    #[test]
    fn trivial_values() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(1, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_j_prime(1, 0.0).unwrap(), 0.5);
    }

    #[test]
    fn domain_errors() {
        assert!(bessel_j(65, 1.0).is_err());
        assert!(bessel_j(0, -1.0).is_err());
        assert!(bessel_j(0, 2.0e4).is_err());
        assert!(bessel_y(0, 0.0).is_err());
        assert!(bessel_y(0, -0.5).is_err());
        assert!(bessel_y_prime(3, 0.0).is_err());
    }

    #[test]
    fn y0_logarithmic_divergence() {
        let y = bessel_y(0, 1e-6).unwrap();
        assert!(y < -8.0);
        assert!(bessel_y(0, 1e-8).unwrap() < y);
    }

    #[test]
    fn j0_prime_is_minus_j1() {
        for x in [0.5, 1.0, 2.0] {
            let d = bessel_j_prime(0, x).unwrap();
            assert!((d + bessel_j(1, x).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn y_prime_matches_central_difference() {
        let h = 1e-6;
        let fd = (bessel_y(0, 1.0 + h).unwrap() - bessel_y(0, 1.0 - h).unwrap()) / (2.0 * h);
        assert!((bessel_y_prime(0, 1.0).unwrap() - fd).abs() < 1e-6);
        let fd = (bessel_y(3, 4.0 + h).unwrap() - bessel_y(3, 4.0 - h).unwrap()) / (2.0 * h);
        assert!((bessel_y_prime(3, 4.0).unwrap() - fd).abs() < 1e-6);
    }

    #[test]
    fn wronskian_on_grid() {
        for n in 0..=8 {
            let mut x = 0.1;
            while x <= 50.0 {
                let j = j_orders(n + 1, x);
                let y = y_orders(n + 1, x);
                let w = j[n + 1] * y[n] - j[n] * y[n + 1];
                let expected = 2.0 / (PI * x);
                assert!((w - expected).abs() < 1e-10, "n={n} x={x} w={w} expected={expected}");
                x += 0.37;
            }
        }
    }

    #[test]
    fn j_ratio_agrees_with_quotient() {
        for &(n, x) in &[(0usize, 0.3), (3, 2.0), (10, 4.5), (2, 7.5), (40, 12.0)] {
            let j = j_orders(n + 1, x);
            let direct = j[n + 1] / j[n];
            let r = j_ratio(n, x);
            assert!((r - direct).abs() < 1e-12 * direct.abs().max(1.0), "n={n} x={x}");
        }
    }

    #[test]
    fn log_bessel_agrees_with_direct_values() {
        for &(n, x) in &[(4usize, 0.5), (9, 1.2), (20, 0.01)] {
            let lb = log_bessel(n, x);
            let p = bessel_pair(n, x);
            assert!((lb.ln_j.exp() / p.j - 1.0).abs() < 1e-12);
            assert!((lb.dj_over_j - p.dj / p.j).abs() < 1e-10 * (p.dj / p.j).abs());
            assert!(((-p.y).ln() - lb.ln_neg_y).abs() < 1e-12 * lb.ln_neg_y.abs().max(1.0));
            assert!((lb.dy_over_y - p.dy / p.y).abs() < 1e-10 * (p.dy / p.y).abs());
        }
    }
}

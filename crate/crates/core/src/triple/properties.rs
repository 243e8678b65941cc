//! Randomized property suite for triple realizations.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    gamma_field, krein_resolvent, m_function, schur_frobenius_inverse, BlockMatrix, BoundaryCondition,
    TripleRealization,
};
use crate::error::Result;
use crate::numerics::eigen::hermitian_eig;
use crate::numerics::matrix::{invert, ComplexMatrix};

const IDENTITY_TOL: f64 = 1.0e-10;
const RESOLVENT_TOL: f64 = 1.0e-8;
const HERGLOTZ_PROBES: usize = 5;

/// Pass/fail tally of one property.
#[derive(Debug, Clone, PartialEq)]
pub struct PropertyCheck {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
}

/// Outcome of [`run_property_suite`].
#[derive(Debug, Clone, PartialEq)]
pub struct PropertyReport {
    pub triples: usize,
    pub checks: Vec<PropertyCheck>,
}

impl PropertyReport {
    pub fn total_failed(&self) -> usize {
        self.checks.iter().map(|c| c.failed).sum()
    }
}

fn gaussian_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let data = (0..rows * cols)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    ComplexMatrix::from_row_major(rows, cols, data).expect("finite random entries")
}

/// Unitary factor of a random complex matrix by modified Gram-Schmidt.
fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    loop {
        let mut q = gaussian_matrix(rng, n, n);
        let mut ok = true;
        for j in 0..n {
            for k in 0..j {
                let dot: Complex64 = (0..n).map(|i| q[(i, k)].conj() * q[(i, j)]).sum();
                for i in 0..n {
                    let v = q[(i, k)];
                    q[(i, j)] -= dot * v;
                }
            }
            let norm = (0..n).map(|i| q[(i, j)].norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-8 {
                ok = false;
                break;
            }
            for i in 0..n {
                q[(i, j)] /= norm;
            }
        }
        if ok {
            return q;
        }
    }
}

fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let g = gaussian_matrix(rng, n, n);
    (&g + &g.adjoint()).scale(Complex64::new(0.5, 0.0))
}

/// A random triple with `N ≤ 8`, `m ≤ min(3, N)`; `a0` has eigenvalues of
/// modulus in `[0.5, 5]` with random signs.
pub fn random_triple(rng: &mut ChaCha8Rng) -> TripleRealization {
    loop {
        let n = rng.random_range(1..=8usize);
        let m = rng.random_range(1..=n.min(3));
        let u = random_unitary(rng, n);
        let eigs: Vec<f64> = (0..n)
            .map(|_| {
                let mag = rng.random_range(0.5..5.0);
                if rng.random_bool(0.5) {
                    mag
                } else {
                    -mag
                }
            })
            .collect();
        let a0 = &(&u * &ComplexMatrix::from_real_diagonal(&eigs)) * &u.adjoint();
        let a0 = (&a0 + &a0.adjoint()).scale(Complex64::new(0.5, 0.0));
        let pi = gaussian_matrix(rng, n, m);
        let lambda = random_hermitian(rng, m);
        if let Ok(t) = TripleRealization::new(a0, pi, lambda) {
            return t;
        }
    }
}

fn upper_half_point(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.random_range(-6.0..6.0), rng.random_range(0.1..3.0))
}

fn close(lhs: &ComplexMatrix, rhs: &ComplexMatrix, tol: f64) -> bool {
    let scale = lhs.max_abs().max(rhs.max_abs()).max(1.0);
    (lhs - rhs).max_abs() <= tol * scale
}

fn herglotz(t: &TripleRealization, rng: &mut ChaCha8Rng) -> Result<bool> {
    for _ in 0..HERGLOTZ_PROBES {
        let z = upper_half_point(rng);
        let m = m_function(t, z)?;
        let im = (&m - &m.adjoint()).scale(Complex64::new(0.0, -0.5));
        let (vals, _) = hermitian_eig(&im)?;
        if vals[0] < -IDENTITY_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

fn symmetry(t: &TripleRealization, rng: &mut ChaCha8Rng) -> Result<bool> {
    let z = upper_half_point(rng);
    Ok(close(&m_function(t, z)?.adjoint(), &m_function(t, z.conj())?, IDENTITY_TOL))
}

fn kernel_identity(t: &TripleRealization, rng: &mut ChaCha8Rng) -> Result<bool> {
    let z = upper_half_point(rng);
    let w = upper_half_point(rng).conj();
    let lhs = &m_function(t, z)? - &m_function(t, w)?.adjoint();
    let rhs = (&gamma_field(t, w)?.adjoint() * &gamma_field(t, z)?).scale(z - w.conj());
    Ok(close(&lhs, &rhs, IDENTITY_TOL))
}

fn resolvent_identity(t: &TripleRealization, rng: &mut ChaCha8Rng) -> Result<bool> {
    let bc = BoundaryCondition::natural(t.boundary_dim());
    let z = upper_half_point(rng);
    let w = upper_half_point(rng);
    let rz = krein_resolvent(t, &bc, z)?;
    let rw = krein_resolvent(t, &bc, w)?;
    let lhs = &rz - &rw;
    let rhs = (&rz * &rw).scale(z - w);
    Ok(close(&lhs, &rhs, RESOLVENT_TOL))
}

fn krein_self_adjoint(t: &TripleRealization, rng: &mut ChaCha8Rng) -> Result<bool> {
    let bc = BoundaryCondition::natural(t.boundary_dim());
    let z = upper_half_point(rng);
    Ok(close(&krein_resolvent(t, &bc, z)?.adjoint(), &krein_resolvent(t, &bc, z.conj())?, IDENTITY_TOL))
}

fn schur_frobenius(rng: &mut ChaCha8Rng) -> Result<bool> {
    let p = rng.random_range(1..=5usize);
    let q = rng.random_range(1..=4usize);
    let shift = |m: ComplexMatrix, k: usize| &m + &ComplexMatrix::identity(k).scale(Complex64::new(3.0, 0.0));
    let a = shift(gaussian_matrix(rng, p, p), p);
    let d = shift(gaussian_matrix(rng, q, q), q);
    let b = gaussian_matrix(rng, p, q);
    let e = gaussian_matrix(rng, q, p);
    let bm = BlockMatrix::new(a, b, e, d)?;
    let blocks = schur_frobenius_inverse(&bm)?.assemble()?;
    let direct = invert(&bm.assemble()?, "assembled")?;
    Ok(close(&blocks, &direct, IDENTITY_TOL))
}

/// Runs every property on `count` random triples drawn from `seed`.
pub fn run_property_suite(count: usize, seed: u64) -> Result<PropertyReport> {
    type Check = fn(&TripleRealization, &mut ChaCha8Rng) -> Result<bool>;
    let properties: [(&'static str, Check); 5] = [
        ("herglotz", herglotz),
        ("m_symmetry", symmetry),
        ("nevanlinna_kernel", kernel_identity),
        ("krein_resolvent_identity", resolvent_identity),
        ("krein_self_adjoint", krein_self_adjoint),
    ];
    let mut checks: Vec<PropertyCheck> =
        properties.iter().map(|(name, _)| PropertyCheck { name, passed: 0, failed: 0 }).collect();
    checks.push(PropertyCheck { name: "schur_frobenius", passed: 0, failed: 0 });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..count {
        let t = random_triple(&mut rng);
        for (slot, (_, check)) in properties.iter().enumerate() {
            let ok = check(&t, &mut rng).unwrap_or(false);
            tally(&mut checks[slot], ok);
        }
        let ok = schur_frobenius(&mut rng).unwrap_or(false);
        let last = checks.len() - 1;
        tally(&mut checks[last], ok);
    }
    Ok(PropertyReport { triples: count, checks })
}

fn tally(check: &mut PropertyCheck, ok: bool) {
    if ok {
        check.passed += 1;
    } else {
        check.failed += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_triples_respect_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let t = random_triple(&mut rng);
            assert!(t.dim() <= 8 && t.boundary_dim() <= 3 && t.boundary_dim() <= t.dim());
            assert!(t.spectrum().iter().all(|v| (0.5 - 1e-9..=5.0 + 1e-9).contains(&v.abs())));
        }
    }

    #[test]
    fn suite_is_deterministic() {
        assert_eq!(run_property_suite(5, 11).unwrap(), run_property_suite(5, 11).unwrap());
    }
}

//! Hermitian eigendecomposition and the spectral norm.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

const HERMITIAN_TOL: f64 = 1.0e-12;
const MAX_SWEEPS: usize = 100;

/// Eigenvalues (ascending) and unitary eigenvectors (columns) of a Hermitian
/// matrix, by cyclic complex Jacobi rotations.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    if !m.is_square() {
        return Err(Error::Contract(format!("eigensolver needs a square matrix, got {}x{}", m.rows(), m.cols())));
    }
    if !m.is_finite() {
        return Err(Error::Contract("matrix entries must be finite".into()));
    }
    if !m.is_hermitian(HERMITIAN_TOL) {
        return Err(Error::Contract("matrix is not Hermitian".into()));
    }
    let n = m.rows();
    let mut a = m.clone();
    for i in 0..n {
        a[(i, i)] = Complex64::new(a[(i, i)].re, 0.0);
    }
    let mut v = ComplexMatrix::identity(n);
    let scale = m.frobenius_norm();

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1.0e-15 * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for r in 0..n {
            vectors[(r, dst)] = v[(r, src)];
        }
    }
    Ok((values, vectors))
}

/// One unitary rotation annihilating `a[p][q]`: a phase on column `q`
/// makes the pivot real, then a real Jacobi rotation finishes it.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let phase = (apq / mag).conj();
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    // Q = diag(1, phase) · [[c, s], [-s, c]] restricted to (p, q).
    let qpp = Complex64::new(c, 0.0);
    let qpq = Complex64::new(s, 0.0);
    let qqp = phase * (-s);
    let qqq = phase * c;

    let n = a.rows();
    for k in 0..n {
        let x = a[(k, p)];
        let y = a[(k, q)];
        a[(k, p)] = x * qpp + y * qqp;
        a[(k, q)] = x * qpq + y * qqq;
    }
    for k in 0..n {
        let x = a[(p, k)];
        let y = a[(q, k)];
        a[(p, k)] = qpp.conj() * x + qqp.conj() * y;
        a[(q, k)] = qpq.conj() * x + qqq.conj() * y;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
    for k in 0..n {
        let x = v[(k, p)];
        let y = v[(k, q)];
        v[(k, p)] = x * qpp + y * qqp;
        v[(k, q)] = x * qpq + y * qqq;
    }
}

/// Largest singular value.
pub fn operator_norm(m: &ComplexMatrix) -> Result<f64> {
    if !m.is_finite() {
        return Err(Error::Contract("matrix entries must be finite".into()));
    }
    if m.rows() == 0 || m.cols() == 0 {
        return Ok(0.0);
    }
    let svd = m.to_nalgebra().svd(false, false);
    Ok(svd.singular_values.iter().copied().fold(0.0, f64::max))
}

/// Smallest singular value.
pub fn smallest_singular_value(m: &ComplexMatrix) -> Result<f64> {
    if !m.is_finite() {
        return Err(Error::Contract("matrix entries must be finite".into()));
    }
    let svd = m.to_nalgebra().svd(false, false);
    Ok(svd.singular_values.iter().copied().fold(f64::INFINITY, f64::min))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_and_swap() {
        let (vals, _) = hermitian_eig(&ComplexMatrix::from_real_diagonal(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(vals, vec![1.0, 2.0, 3.0]);
        let swap = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let (vals, _) = hermitian_eig(&swap).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-14 && (vals[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn two_by_two_characteristic_roots() {
        // [[2, 1-i], [1+i, 3]]: trace 5, determinant 4.
        let m = ComplexMatrix::from_row_major(2, 2, vec![c(2.0, 0.0), c(1.0, -1.0), c(1.0, 1.0), c(3.0, 0.0)])
            .unwrap();
        let (vals, _) = hermitian_eig(&m).unwrap();
        let disc = (25.0f64 - 16.0).sqrt();
        assert!((vals[0] - (5.0 - disc) / 2.0).abs() < 1e-10);
        assert!((vals[1] - (5.0 + disc) / 2.0).abs() < 1e-10);
    }

    #[test]
    fn three_by_three_characteristic_roots() {
        // Tridiagonal [[2,-1,0],[-1,2,-1],[0,-1,2]]: 2 - sqrt2, 2, 2 + sqrt2.
        let m = ComplexMatrix::from_real_rows(&[&[2.0, -1.0, 0.0], &[-1.0, 2.0, -1.0], &[0.0, -1.0, 2.0]]).unwrap();
        let (vals, _) = hermitian_eig(&m).unwrap();
        let r2 = 2f64.sqrt();
        for (v, e) in vals.iter().zip([2.0 - r2, 2.0, 2.0 + r2]) {
            assert!((v - e).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(hermitian_eig(&m), Err(Error::Contract(_))));
    }

    #[test]
    fn operator_norm_closed_cases() {
        let d = ComplexMatrix::from_real_diagonal(&[1.0, -3.0, 2.0]);
        assert!((operator_norm(&d).unwrap() - 3.0).abs() < 1e-12);
        let u = ComplexMatrix::column(&[1.0, 2.0]);
        let v = ComplexMatrix::column(&[2.0, 0.0, 1.0]);
        let rank_one = &u * &v.adjoint();
        assert!((operator_norm(&rank_one).unwrap() - 5.0).abs() < 1e-12);
    }
}

//! Dense complex matrices and LU-based inversion.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Condition-number estimate above which an inverse is not trusted.
pub const CONDITION_LIMIT: f64 = 1.0e12;

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major entries; rejects wrong lengths and
    /// non-finite values.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension {
                expected: format!("{} entries", rows * cols),
                actual: format!("{} entries", data.len()),
            });
        }
        if data.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Contract("matrix entries must be finite".into()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::Dimension {
                    expected: format!("{c} columns"),
                    actual: format!("{} columns", row.len()),
                });
            }
            data.extend(row.iter().map(|&v| Complex64::new(v, 0.0)));
        }
        Self::from_row_major(r, c, data)
    }

    pub fn from_diagonal(values: &[Complex64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn from_real_diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    /// Column vector from real entries.
    pub fn column(values: &[f64]) -> Self {
        Self { rows: values.len(), cols: 1, data: values.iter().map(|&v| Complex64::new(v, 0.0)).collect() }
    }

    pub fn scalar(v: Complex64) -> Self {
        Self { rows: 1, cols: 1, data: vec![v] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v * s).collect() }
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    fn one_norm(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// `‖m − m*‖_F ≤ tol·max(‖m‖_F, 1)` style test used by contracts.
    pub fn is_hermitian(&self, rel_tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let scale = self.frobenius_norm().max(f64::MIN_POSITIVE);
        (self - &self.adjoint()).frobenius_norm() <= rel_tol * scale
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension {
                expected: format!("{} rows", self.cols),
                actual: format!("{} rows", rhs.rows),
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    fn check_same_shape(&self, rhs: &Self) -> Result<()> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Dimension {
                expected: format!("{}x{}", self.rows, self.cols),
                actual: format!("{}x{}", rhs.rows, rhs.cols),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.check_same_shape(rhs)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.check_same_shape(rhs)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        })
    }

    /// Copies a sub-block.
    pub fn block(&self, row0: usize, col0: usize, rows: usize, cols: usize) -> Self {
        let mut out = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out[(i, j)] = self[(row0 + i, col0 + j)];
            }
        }
        out
    }

    /// Writes `src` with its top-left corner at `(row0, col0)`.
    pub fn set_block(&mut self, row0: usize, col0: usize, src: &Self) {
        for i in 0..src.rows {
            for j in 0..src.cols {
                self[(row0 + i, col0 + j)] = src[(i, j)];
            }
        }
    }

    /// Assembles `[[a, b], [e, d]]`.
    pub fn from_blocks(a: &Self, b: &Self, e: &Self, d: &Self) -> Result<Self> {
        if a.rows != b.rows || e.rows != d.rows || a.cols != e.cols || b.cols != d.cols {
            return Err(Error::Dimension {
                expected: "conformable blocks".into(),
                actual: format!(
                    "{}x{}, {}x{}, {}x{}, {}x{}",
                    a.rows, a.cols, b.rows, b.cols, e.rows, e.cols, d.rows, d.cols
                ),
            });
        }
        let mut out = Self::zeros(a.rows + e.rows, a.cols + b.cols);
        out.set_block(0, 0, a);
        out.set_block(0, a.cols, b);
        out.set_block(a.rows, 0, e);
        out.set_block(a.rows, a.cols, d);
        Ok(out)
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(parts: &[Self]) -> Self {
        let rows = parts.iter().map(|p| p.rows).sum();
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r, mut c) = (0, 0);
        for p in parts {
            out.set_block(r, c, p);
            r += p.rows;
            c += p.cols;
        }
        out
    }

    pub fn to_nalgebra(&self) -> nalgebra::DMatrix<Complex64> {
        nalgebra::DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let v = self[(i, j)];
                write!(f, "{:+.6e}{:+.6e}i  ", v.re, v.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

// Operator impls panic on shape mismatch; fallible callers use try_*.
impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_mul(rhs).expect("matrix product shape mismatch")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_add(rhs).expect("matrix sum shape mismatch")
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_sub(rhs).expect("matrix difference shape mismatch")
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

/// LU factorisation with partial pivoting, `P·m = L·U`.
#[derive(Debug, Clone)]
pub struct Lu {
    n: usize,
    lu: Vec<Complex64>,
    perm: Vec<usize>,
    condition: f64,
}

/// Why a factorisation was refused.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LuFailure {
    Singular,
    IllConditioned(f64),
}

impl Lu {
    pub fn factor(m: &ComplexMatrix) -> std::result::Result<Self, LuFailure> {
        assert!(m.is_square(), "LU needs a square matrix");
        let n = m.rows;
        let mut lu = m.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let norm = m.one_norm();
        for k in 0..n {
            let (p, pivot) = (k..n)
                .map(|i| (i, lu[i * n + k].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot == 0.0 || !pivot.is_finite() || pivot <= f64::EPSILON * norm * 1e-4 {
                return Err(LuFailure::Singular);
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let inv = lu[k * n + k].inv();
            for i in k + 1..n {
                let f = lu[i * n + k] * inv;
                lu[i * n + k] = f;
                if f != Complex64::new(0.0, 0.0) {
                    for j in k + 1..n {
                        let u = lu[k * n + j];
                        lu[i * n + j] -= f * u;
                    }
                }
            }
        }
        let mut out = Self { n, lu, perm, condition: 0.0 };
        let inv = out.solve(&ComplexMatrix::identity(n));
        let condition = norm * inv.one_norm();
        if !condition.is_finite() {
            return Err(LuFailure::Singular);
        }
        if condition > CONDITION_LIMIT {
            return Err(LuFailure::IllConditioned(condition));
        }
        out.condition = condition;
        Ok(out)
    }

    /// 1-norm condition number `‖m‖₁·‖m⁻¹‖₁`.
    pub fn condition(&self) -> f64 {
        self.condition
    }

    #[allow(clippy::needless_range_loop)]
    pub fn solve(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        let n = self.n;
        assert_eq!(rhs.rows, n, "LU solve shape mismatch");
        let mut x = ComplexMatrix::zeros(n, rhs.cols);
        for c in 0..rhs.cols {
            let mut y: Vec<Complex64> = (0..n).map(|i| rhs[(self.perm[i], c)]).collect();
            for i in 0..n {
                let mut s = y[i];
                for j in 0..i {
                    s -= self.lu[i * n + j] * y[j];
                }
                y[i] = s;
            }
            for i in (0..n).rev() {
                let mut s = y[i];
                for j in i + 1..n {
                    s -= self.lu[i * n + j] * y[j];
                }
                y[i] = s / self.lu[i * n + i];
            }
            for i in 0..n {
                x[(i, c)] = y[i];
            }
        }
        x
    }
}

/// Inverse with the singularity/condition guard; `block` names the matrix in
/// error messages.
pub fn invert(m: &ComplexMatrix, block: &'static str) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::Dimension {
            expected: "square matrix".into(),
            actual: format!("{}x{}", m.rows, m.cols),
        });
    }
    match Lu::factor(m) {
        Ok(lu) => Ok(lu.solve(&ComplexMatrix::identity(m.rows))),
        Err(LuFailure::Singular) => Err(Error::Singular { block }),
        Err(LuFailure::IllConditioned(condition)) => Err(Error::IllConditioned { block, condition }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_bad_construction() {
        assert!(ComplexMatrix::from_row_major(2, 2, vec![c(1.0, 0.0); 3]).is_err());
        assert!(ComplexMatrix::from_row_major(1, 1, vec![c(f64::NAN, 0.0)]).is_err());
    }

    #[test]
    fn inverse_of_two_by_two() {
        let m = ComplexMatrix::from_row_major(2, 2, vec![c(2.0, 0.0), c(1.0, 1.0), c(0.0, -1.0), c(3.0, 0.0)])
            .unwrap();
        let inv = invert(&m, "test").unwrap();
        let prod = &m * &inv;
        assert!((&prod - &ComplexMatrix::identity(2)).max_abs() < 1e-14);
    }

    #[test]
    fn singular_and_ill_conditioned() {
        let s = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]).unwrap();
        assert_eq!(invert(&s, "s"), Err(Error::Singular { block: "s" }));
        let ill = ComplexMatrix::from_real_diagonal(&[1.0, 1e-14]);
        assert!(matches!(invert(&ill, "ill"), Err(Error::IllConditioned { .. })));
    }

    #[test]
    fn blocks_round_trip() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]).unwrap();
        let b = ComplexMatrix::column(&[5.0, 6.0]);
        let e = ComplexMatrix::from_real_rows(&[&[7.0, 8.0]]).unwrap();
        let d = ComplexMatrix::scalar(c(9.0, 0.0));
        let full = ComplexMatrix::from_blocks(&a, &b, &e, &d).unwrap();
        assert_eq!(full.block(0, 0, 2, 2), a);
        assert_eq!(full.block(2, 2, 1, 1), d);
        assert_eq!(full[(2, 1)], c(8.0, 0.0));
        assert!(ComplexMatrix::from_blocks(&a, &e, &b, &d).is_err());
    }

    #[test]
    fn adjoint_conjugates_and_transposes() {
        let m = ComplexMatrix::from_row_major(1, 2, vec![c(1.0, 2.0), c(3.0, -4.0)]).unwrap();
        let h = m.adjoint();
        assert_eq!(h.rows(), 2);
        assert_eq!(h[(1, 0)], c(3.0, 4.0));
    }
}

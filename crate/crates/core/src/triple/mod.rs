//! Finite-dimensional boundary triples: gamma field, M-function, Krein
//! resolvent formula and Schur-Frobenius block inversion.

mod properties;

pub use properties::{random_triple, run_property_suite, PropertyCheck, PropertyReport};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::eigen::{hermitian_eig, smallest_singular_value};
use crate::numerics::matrix::{invert, ComplexMatrix, Lu, LuFailure};

const HERMITIAN_TOL: f64 = 1.0e-12;
/// Minimum distance between `z` and the spectrum of `a0`.
pub const NEAR_SINGULAR_DISTANCE: f64 = 1.0e-10;

/// A realization `(a0, pi, lambda)` of a triple on `C^N` with boundary
/// space `C^m`.
#[derive(Debug, Clone)]
pub struct TripleRealization {
    a0: ComplexMatrix,
    pi: ComplexMatrix,
    lambda: ComplexMatrix,
    spectrum: Vec<f64>,
    diagonal: bool,
}

impl TripleRealization {
    /// Validates shapes, Hermitian symmetry, invertibility of `a0` and
    /// injectivity of `pi`.
    pub fn new(a0: ComplexMatrix, pi: ComplexMatrix, lambda: ComplexMatrix) -> Result<Self> {
        let n = a0.rows();
        if !a0.is_square() || n == 0 {
            return Err(Error::Dimension { expected: "nonempty square a0".into(), actual: format!("{}x{}", n, a0.cols()) });
        }
        if pi.rows() != n {
            return Err(Error::Dimension { expected: format!("pi with {n} rows"), actual: format!("{} rows", pi.rows()) });
        }
        let m = pi.cols();
        if m == 0 || m > n {
            return Err(Error::Dimension { expected: format!("1..={n} boundary columns"), actual: m.to_string() });
        }
        if lambda.rows() != m || lambda.cols() != m {
            return Err(Error::Dimension {
                expected: format!("{m}x{m} lambda"),
                actual: format!("{}x{}", lambda.rows(), lambda.cols()),
            });
        }
        if !(a0.is_finite() && pi.is_finite() && lambda.is_finite()) {
            return Err(Error::Contract("triple entries must be finite".into()));
        }
        if !a0.is_hermitian(HERMITIAN_TOL) {
            return Err(Error::Contract("a0 is not Hermitian".into()));
        }
        if !lambda.is_hermitian(HERMITIAN_TOL) {
            return Err(Error::Contract("lambda is not Hermitian".into()));
        }
        let diagonal = (0..n).all(|i| (0..n).all(|j| i == j || a0[(i, j)] == Complex64::new(0.0, 0.0)));
        let spectrum = if diagonal {
            let mut d: Vec<f64> = (0..n).map(|i| a0[(i, i)].re).collect();
            d.sort_by(f64::total_cmp);
            d
        } else {
            hermitian_eig(&a0)?.0
        };
        if spectrum.contains(&0.0) {
            return Err(Error::Contract("a0 is not invertible".into()));
        }
        let pi_scale = pi.frobenius_norm();
        if pi_scale == 0.0 || smallest_singular_value(&pi)? <= 1.0e-12 * pi_scale {
            return Err(Error::Contract("pi is not injective".into()));
        }
        Ok(Self { a0, pi, lambda, spectrum, diagonal })
    }

    pub fn a0(&self) -> &ComplexMatrix {
        &self.a0
    }

    pub fn pi(&self) -> &ComplexMatrix {
        &self.pi
    }

    pub fn lambda(&self) -> &ComplexMatrix {
        &self.lambda
    }

    /// Eigenvalues of `a0`, ascending.
    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    /// Internal dimension `N`.
    pub fn dim(&self) -> usize {
        self.a0.rows()
    }

    /// Boundary dimension `m`.
    pub fn boundary_dim(&self) -> usize {
        self.pi.cols()
    }

    fn check_regular(&self, z: Complex64) -> Result<()> {
        for &ev in &self.spectrum {
            let distance = (z - ev).norm();
            if distance <= NEAR_SINGULAR_DISTANCE {
                return Err(Error::NearSingular { z: z.to_string(), eigenvalue: ev, distance });
            }
        }
        Ok(())
    }

    /// `(a0 − z)⁻¹`.
    pub fn resolvent(&self, z: Complex64) -> Result<ComplexMatrix> {
        self.check_regular(z)?;
        let n = self.dim();
        if self.diagonal {
            let d: Vec<Complex64> = (0..n).map(|i| (self.a0[(i, i)] - z).inv()).collect();
            return Ok(ComplexMatrix::from_diagonal(&d));
        }
        let shifted = &self.a0 - &ComplexMatrix::identity(n).scale(z);
        match Lu::factor(&shifted) {
            Ok(lu) => Ok(lu.solve(&ComplexMatrix::identity(n))),
            Err(LuFailure::Singular) => Err(Error::Singular { block: "a0 - z" }),
            Err(LuFailure::IllConditioned(condition)) => Err(Error::IllConditioned { block: "a0 - z", condition }),
        }
    }
}

/// Boundary condition `α Γ₀ u + β Γ₁ u = 0` given by `m×m` matrices.
#[derive(Debug, Clone)]
pub struct BoundaryCondition {
    pub alpha: ComplexMatrix,
    pub beta: ComplexMatrix,
}

impl BoundaryCondition {
    pub fn new(alpha: ComplexMatrix, beta: ComplexMatrix) -> Result<Self> {
        if !alpha.is_square() || alpha.rows() != beta.rows() || alpha.cols() != beta.cols() {
            return Err(Error::Dimension {
                expected: "equal square alpha and beta".into(),
                actual: format!("{}x{} and {}x{}", alpha.rows(), alpha.cols(), beta.rows(), beta.cols()),
            });
        }
        if !(alpha.is_finite() && beta.is_finite()) {
            return Err(Error::Contract("boundary condition entries must be finite".into()));
        }
        Ok(Self { alpha, beta })
    }

    /// `α = 0, β = I`.
    pub fn natural(m: usize) -> Self {
        Self { alpha: ComplexMatrix::zeros(m, m), beta: ComplexMatrix::identity(m) }
    }

    /// `α = I, β = 0`.
    pub fn dirichlet(m: usize) -> Self {
        Self { alpha: ComplexMatrix::identity(m), beta: ComplexMatrix::zeros(m, m) }
    }

    /// `‖αβ* − βα*‖ ≤ tol` (self-adjoint pair).
    pub fn is_self_adjoint_pair(&self, tol: f64) -> bool {
        let lhs = &self.alpha * &self.beta.adjoint();
        let rhs = &self.beta * &self.alpha.adjoint();
        (&lhs - &rhs).max_abs() <= tol
    }
}

/// Two-by-two block matrix `[[a, b], [e, d]]`.
#[derive(Debug, Clone)]
pub struct BlockMatrix {
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    pub e: ComplexMatrix,
    pub d: ComplexMatrix,
}

impl BlockMatrix {
    pub fn new(a: ComplexMatrix, b: ComplexMatrix, e: ComplexMatrix, d: ComplexMatrix) -> Result<Self> {
        let out = Self { a, b, e, d };
        let full = out.assemble()?;
        if !full.is_square() || !out.a.is_square() {
            return Err(Error::Dimension {
                expected: "square assembly with square leading block".into(),
                actual: format!("{}x{}", full.rows(), full.cols()),
            });
        }
        Ok(out)
    }

    pub fn assemble(&self) -> Result<ComplexMatrix> {
        ComplexMatrix::from_blocks(&self.a, &self.b, &self.e, &self.d)
    }
}

/// `γ(z) = (I − z a0⁻¹)⁻¹ pi = (a0 − z)⁻¹ a0 pi`.
pub fn gamma_field(t: &TripleRealization, z: Complex64) -> Result<ComplexMatrix> {
    if z == Complex64::new(0.0, 0.0) {
        return Ok(t.pi.clone());
    }
    let r = t.resolvent(z)?;
    Ok(&r * &(&t.a0 * &t.pi))
}

/// `M(z) = lambda + z pi* γ(z)`.
pub fn m_function(t: &TripleRealization, z: Complex64) -> Result<ComplexMatrix> {
    if z == Complex64::new(0.0, 0.0) {
        return Ok(t.lambda.clone());
    }
    let g = gamma_field(t, z)?;
    Ok(&t.lambda + &(&t.pi.adjoint() * &g).scale(z))
}

/// Resolvent of the extension with boundary condition `bc`:
/// `(a0 − z)⁻¹ − γ(z) [α + β M(z)]⁻¹ β γ(z̄)*`.
pub fn krein_resolvent(t: &TripleRealization, bc: &BoundaryCondition, z: Complex64) -> Result<ComplexMatrix> {
    let m = t.boundary_dim();
    if bc.alpha.rows() != m {
        return Err(Error::Dimension { expected: format!("{m}x{m} boundary condition"), actual: bc.alpha.rows().to_string() });
    }
    let r0 = t.resolvent(z)?;
    let mz = m_function(t, z)?;
    let core = &bc.alpha + &(&bc.beta * &mz);
    let inv = invert(&core, "alpha + beta M(z)").map_err(|_| Error::BoundaryConditionSingular { z: z.to_string() })?;
    let g = &r0 * &(&t.a0 * &t.pi);
    let g_bar_adj = &(&t.pi.adjoint() * &t.a0) * &r0;
    let correction = &(&g * &inv) * &(&bc.beta * &g_bar_adj);
    Ok(&r0 - &correction)
}

/// Block inverse via the Schur complement `s = d − e a⁻¹ b`.
pub fn schur_frobenius_inverse(bm: &BlockMatrix) -> Result<BlockMatrix> {
    let a_inv = invert(&bm.a, "leading")?;
    let s = &bm.d - &(&(&bm.e * &a_inv) * &bm.b);
    let s_inv = invert(&s, "Schur complement")?;
    let a_inv_b = &a_inv * &bm.b;
    let e_a_inv = &bm.e * &a_inv;
    let tr = -&(&a_inv_b * &s_inv);
    let bl = -&(&s_inv * &e_a_inv);
    let tl = &a_inv + &(&(&a_inv_b * &s_inv) * &e_a_inv);
    Ok(BlockMatrix { a: tl, b: tr, e: bl, d: s_inv })
}

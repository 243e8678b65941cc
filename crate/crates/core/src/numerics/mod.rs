//! Special functions, root bracketing and dense complex linear algebra.

pub mod bessel;
pub mod eigen;
pub mod fit;
pub mod matrix;
pub mod quadrature;
pub mod roots;

pub use bessel::{bessel_j, bessel_j_prime, bessel_y, bessel_y_prime};
pub use eigen::{hermitian_eig, operator_norm, smallest_singular_value};
pub use fit::{fit_loglog_slope, LogLogFit};
pub use matrix::{invert, ComplexMatrix, Lu};
pub use roots::{find_roots, find_roots_with, RootBracket, ScanOptions};

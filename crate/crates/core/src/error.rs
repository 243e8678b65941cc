use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("found more than {max_count} roots in [{lo}, {hi}]")]
    RootCapacity { max_count: usize, lo: f64, hi: f64 },

    #[error("function has no finite value on the scan grid of [{lo}, {hi}]")]
    Evaluation { lo: f64, hi: f64 },

    #[error("matrix contract violated: {0}")]
    Contract(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: String, actual: String },

    #[error("z = {z} lies within {distance:e} of the eigenvalue {eigenvalue} of the reference operator")]
    NearSingular { z: String, eigenvalue: f64, distance: f64 },

    #[error("singular {block} block")]
    Singular { block: &'static str },

    #[error("ill-conditioned {block} (condition estimate {condition:e})")]
    IllConditioned { block: &'static str, condition: f64 },

    #[error("alpha + beta M(z) is singular at z = {z}; z belongs to the spectrum")]
    BoundaryConditionSingular { z: String },

    #[error("pole of the {function} at z = {pole} (evaluated at {z})")]
    Pole { function: &'static str, z: f64, pole: f64 },

    #[error("quadrature did not converge: {0}")]
    Accuracy(String),

    #[error("ambiguous root matching near z = {z}: {detail}")]
    Matching { z: f64, detail: String },

    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

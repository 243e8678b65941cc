//! Boundary-triple calculus for high-contrast transmission problems on
//! concentric disks.

pub mod asymptotics;
pub mod disk;
pub mod error;
pub mod numerics;
pub mod spectra;
pub mod triple;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use asymptotics::{ConvergenceParams, ConvergenceReport, EffectiveBlockResolvent, Quantity};
pub use disk::{BoundaryMode, Geometry, ModeData, SeriesForm};
pub use numerics::ComplexMatrix;
pub use spectra::{DispersionRoot, Route, SpectrumReport};
pub use triple::{BlockMatrix, BoundaryCondition, TripleRealization};

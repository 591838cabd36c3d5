//! Exact computations for log symplectic torus models: log de Rham cohomology
//! of hypersurface arrangements, symbolic calculus for log forms and
//! multivector fields with trigonometric-polynomial coefficients,
//! partitionability analysis, Poisson cohomology via a closed-form
//! decomposition, and an independent truncated Fourier oracle to cross-check
//! the results.

pub mod arrangement;
pub mod decomposition;
mod error;
pub mod graded;
pub mod logcohom;
pub mod oracle;
pub mod poisson;
pub mod symcalc;

pub use arrangement::{Arrangement, Hypersurface, Role, Stratum};
pub use decomposition::{ClassDecomposition, ComponentRule, Partition, PartitionabilityReport};
pub use error::Error;
pub use graded::BettiVector;
pub use poisson::{IndexCollection, PoissonReport};
pub use symcalc::{Certification, LogForm, Multivector, Parity, TrigPoly};

pub type Result<T> = std::result::Result<T, Error>;

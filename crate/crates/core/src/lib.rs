//! Exact symbolic calculus for Lie algebroids over polynomial charts.

pub mod algebroid;
pub mod calculus;
pub mod error;
pub mod lifts;
pub mod poisson;
pub mod random;
pub mod ring;
pub mod suites;
pub mod tensor;

pub use algebroid::Algebroid;
pub use error::{Error, Result};
pub use poisson::PoissonStructure;
pub use ring::{parse_poly, Chart, Poly, Rational};
pub use tensor::{GradedTensor, Kind};

//! Mixing-time machinery for the top to bottom-k shuffle.

pub mod coupling;
pub mod error;
pub mod exact;
pub mod flow;
pub mod group;
pub mod measure;
pub mod report;
pub mod scalar;
pub mod wilson;

pub use error::{Error, Result};
pub use group::{PermRank, Permutation};
pub use measure::SparseMeasure;
pub use num_complex::Complex64;
pub use num_rational::BigRational;
pub use scalar::{Real, Weight};

/// Measure with double precision weights.
pub type Measure = SparseMeasure<f64>;
/// Measure with exact rational weights.
pub type ExactMeasure = SparseMeasure<BigRational>;
/// Dense distribution in double precision.
pub type Distribution = exact::DenseDistribution<f64>;
/// Flow with exact rational weights.
pub type ExactFlow = flow::Flow<BigRational>;
/// Wilson lower-bound parameters in double precision.
pub type Params = wilson::WilsonParams<f64>;

//! Exact evolution of the walk over all of `S_n` for small `n`.

mod checks;
mod dense;
mod mixing;
mod spectrum;

pub use checks::*;
pub use dense::{DenseDistribution, StepTable, DENSE_CAP};
pub use mixing::{mixing_time, Metric, MixingReport, Profile, ProfileRow};
pub use spectrum::{
    beta_min_bound_check, beta_min_formula, spectrum, transition_matrix, BetaMinCheck, SpectrumReport,
    EIGEN_CAP, EIGEN_CAP_LARGE,
};

//! Annealed statistics of random shuffling maps.
//!
//! A [`MapMeasure`] draws the image of each state independently; under it
//! the truncator step becomes a Markov chain whose one-step law is the
//! dense [`step_matrix`]. On top sit exact kernel-size laws with their
//! Poisson limit, the two-step consistency check, increment laws of the
//! annealed power sequence, and first-return distributions — each exact
//! computation paired with a seeded Monte Carlo counterpart.

mod chain;
mod kernel_stats;
mod matrix;
mod measure;

pub use chain::{
    chapman_check, increment_chain_law, increment_chain_monte_carlo, return_time_distribution,
    ChapmanCheck, EmpiricalReturns, ReturnCurve, MIN_TRIALS,
};
pub use kernel_stats::{
    kernel_pmf_exact, kernel_pmf_limit, kernel_size_counts, kernel_size_pmf, poisson_sup_distance,
};
pub use matrix::{step_matrix, TransitionMatrix};
pub use measure::{sample_uniform_map, MapMeasure, MeasureSampler, DENSE_LIMIT_BITS};

pub(crate) use measure::check_dense_bits;

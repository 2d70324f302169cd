//! Goodness-of-fit machinery and discrete entropies.

mod entropy;
mod ks;
mod linear;

pub use entropy::{discrete_relative_entropy, shannon_entropy, tsallis_entropy, NORMALIZATION_TOL};
pub use ks::{critical_coefficient, ks_statistic, ks_test, ks_test_bootstrap, KsResult, DEFAULT_BOOTSTRAP_RESAMPLES};
pub use linear::{linear_fit, LinearFit};

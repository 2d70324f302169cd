//! Non-extensive risk measurement for return series.
//!
//! The crate fits q-Gaussian densities to periodic returns by maximum
//! likelihood, scores a security against a reference index with Tsallis
//! relative entropy (and three comparison measures: Kullback-Leibler relative
//! entropy, CAPM beta and relative standard deviation), and runs rolling
//! risk-binned portfolio backtests that relate risk to excess return.
//!
//! Everything here is `no_std` + `alloc`; file formats, configuration and the
//! command-line front end live in the `qrisk` companion crate.
#![no_std]
// When std is anywhere in the build graph its inherent float methods shadow
// `num_traits::Float`, which the no_std build needs.
#![allow(unused_imports)]
// `!(x > 0.0)` is used on purpose so NaN is rejected along with the rest.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod backtest;
pub mod data;
mod error;
pub mod qgaussian;
pub mod quadrature;
pub mod risk;
pub mod special;
pub mod stats;
pub mod synthetic;

pub use error::{Error, Result};
pub use qgaussian::{
    fit_fixed_q, fit_full, ln_q, moments, normalization_constant, MomentSummary, QGaussian, QGaussianFit,
};
pub use risk::{klre, rel_std, tre, RiskMeasure, RiskValue};

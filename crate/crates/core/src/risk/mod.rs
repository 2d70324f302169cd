//! Relative risk of a security against a reference index.
//!
//! Four measures are provided: Tsallis relative entropy between two fitted
//! q-Gaussians sharing `q` ([`tre`]), its Gaussian limit the Kullback-Leibler
//! relative entropy ([`klre`]), CAPM beta ([`beta`]) and the ratio of standard
//! deviations ([`rel_std`]).

mod beta;
mod returns;

pub use beta::{beta, beta_from_returns, BetaEstimate};
pub use returns::{compute_returns, month_end_prices, Period, ReturnSeries};

use alloc::format;
use alloc::string::String;
use core::fmt;
use core::str::FromStr;

use chrono::NaiveDate;
use num_traits::Float;

use crate::qgaussian::{ln_q, MomentSummary, QGaussian};
use crate::{Error, Result};

/// Tolerance on `|q_P − q_R|` accepted by [`tre`].
pub const Q_MATCH_TOL: f64 = 1e-12;

/// Rounding slack below zero that relative entropies are clamped from.
pub const NEGATIVE_ROUNDING: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RiskMeasure {
    Tre,
    Klre,
    Beta,
    RelStd,
}

impl RiskMeasure {
    pub const ALL: [RiskMeasure; 4] = [
        RiskMeasure::Tre,
        RiskMeasure::Klre,
        RiskMeasure::Beta,
        RiskMeasure::RelStd,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RiskMeasure::Tre => "tre",
            RiskMeasure::Klre => "klre",
            RiskMeasure::Beta => "beta",
            RiskMeasure::RelStd => "relstd",
        }
    }
}

impl fmt::Display for RiskMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RiskMeasure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tre" => Ok(RiskMeasure::Tre),
            "klre" => Ok(RiskMeasure::Klre),
            "beta" => Ok(RiskMeasure::Beta),
            "relstd" | "rel_std" => Ok(RiskMeasure::RelStd),
            _ => Err(Error::InvalidInput(format!("unknown risk measure {s:?}"))),
        }
    }
}

/// A risk score of one security over one estimation window. Entropies are in
/// nats; beta and relative standard deviation are dimensionless.
#[derive(Debug, Clone, PartialEq)]
pub struct RiskValue {
    pub measure: RiskMeasure,
    pub value: f64,
    pub ticker: String,
    pub window: (NaiveDate, NaiveDate),
}

/// Tsallis relative entropy `S_T(P‖R)` of two q-Gaussians with common `q`:
///
/// ```text
/// S_T = −ln_q(γ) + ½·γ^(1−q)·[(γ² − 1) + (3−q)·B_R·(M_P − M_R)²],  γ = √(B_R/B_P)
/// ```
pub fn tre(p: &QGaussian, r: &QGaussian) -> Result<f64> {
    let q = r.q();
    if (p.q() - q).abs() > Q_MATCH_TOL {
        return Err(Error::QMismatch { p: p.q(), r: q });
    }
    let gamma = (r.precision() / p.precision()).sqrt();
    let dm = p.location() - r.location();
    let bracket = (gamma * gamma - 1.0) + (3.0 - q) * r.precision() * dm * dm;
    let value = -ln_q(gamma, q)? + 0.5 * gamma.powf(1.0 - q) * bracket;
    clamp_non_negative(value)
}

/// Kullback-Leibler relative entropy of two Gaussians given by their moments.
pub fn klre(p: &MomentSummary, r: &MomentSummary) -> Result<f64> {
    if !(p.sigma > 0.0) || !(r.sigma > 0.0) {
        return Err(Error::DegenerateData("zero standard deviation"));
    }
    let ratio = p.sigma / r.sigma;
    let dm = p.mu - r.mu;
    let value = -ratio.ln() + 0.5 * (ratio * ratio - 1.0) + dm * dm / (2.0 * r.sigma * r.sigma);
    clamp_non_negative(value)
}

/// `σ_P / σ_R`.
pub fn rel_std(p: &MomentSummary, r: &MomentSummary) -> Result<f64> {
    if !(r.sigma > 0.0) {
        return Err(Error::DegenerateData("reference standard deviation is zero"));
    }
    if !(p.sigma >= 0.0) {
        return Err(Error::Domain {
            what: "sigma",
            value: p.sigma,
        });
    }
    Ok(p.sigma / r.sigma)
}

fn clamp_non_negative(value: f64) -> Result<f64> {
    if value >= 0.0 {
        Ok(value)
    } else if value > -NEGATIVE_ROUNDING {
        Ok(0.0)
    } else {
        Err(Error::Internal(format!(
            "relative entropy evaluated negative: {value:e}"
        )))
    }
}

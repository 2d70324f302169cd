use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use chrono::NaiveDate;

use crate::risk::{Period, RiskMeasure};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Procedure {
    /// Fixed universe, equal-count bins per cycle ("I").
    #[default]
    EqualCount,
    /// Growing universe, bin edges frozen at the first cycle ("II").
    FixedEdges,
}

impl fmt::Display for Procedure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Procedure::EqualCount => "I",
            Procedure::FixedEdges => "II",
        })
    }
}

impl FromStr for Procedure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "I" | "1" => Ok(Procedure::EqualCount),
            "II" | "2" => Ok(Procedure::FixedEdges),
            _ => Err(Error::InvalidInput(format!(
                "unknown procedure {s:?}, expected I or II"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BacktestConfig {
    pub procedure: Procedure,
    pub window_years: u32,
    pub shift_months: u32,
    pub horizon_months: u32,
    pub securities_per_bin: usize,
    /// Overrides `securities_per_bin` with `⌊N / n_bins⌋` when set.
    pub n_bins: Option<usize>,
    pub measures: Vec<RiskMeasure>,
    pub q_refresh_months: u32,
    pub reference_ticker: String,
    pub start_date: NaiveDate,
    pub end_date: NaiveDate,
    /// Return frequency used for beta inside the estimation window.
    pub beta_period: Period,
}

impl BacktestConfig {
    /// Default parameters: five-year window, six-month shift and horizon,
    /// 25 securities per bin, `q` refreshed every twelve months.
    pub fn new(reference_ticker: impl Into<String>, start_date: NaiveDate, end_date: NaiveDate) -> Self {
        BacktestConfig {
            procedure: Procedure::EqualCount,
            window_years: 5,
            shift_months: 6,
            horizon_months: 6,
            securities_per_bin: 25,
            n_bins: None,
            measures: RiskMeasure::ALL.to_vec(),
            q_refresh_months: 12,
            reference_ticker: reference_ticker.into(),
            start_date,
            end_date,
            beta_period: Period::Monthly,
        }
    }

    pub fn window_months(&self) -> u32 {
        self.window_years * 12
    }

    /// Every violated constraint, empty when the configuration is usable.
    pub fn validate(&self) -> Vec<String> {
        let mut errs = Vec::new();
        if self.window_years < 1 {
            errs.push(String::from("window_years must be at least 1"));
        }
        if self.shift_months < 1 {
            errs.push(String::from("shift_months must be at least 1"));
        }
        if self.horizon_months < 1 {
            errs.push(String::from("horizon_months must be at least 1"));
        }
        if self.horizon_months > self.shift_months {
            errs.push(format!(
                "horizon_months ({}) must not exceed shift_months ({})",
                self.horizon_months, self.shift_months
            ));
        }
        if self.securities_per_bin < 1 {
            errs.push(String::from("securities_per_bin must be at least 1"));
        }
        if self.n_bins == Some(0) {
            errs.push(String::from("n_bins must be at least 1"));
        }
        if self.q_refresh_months < 1 {
            errs.push(String::from("q_refresh_months must be at least 1"));
        }
        if self.measures.is_empty() {
            errs.push(String::from("at least one risk measure is required"));
        }
        for (i, m) in self.measures.iter().enumerate() {
            if self.measures[..i].contains(m) {
                errs.push(format!("measure {m} listed twice"));
            }
        }
        if self.reference_ticker.is_empty() {
            errs.push(String::from("reference_ticker must not be empty"));
        }
        if self.start_date >= self.end_date {
            errs.push(format!(
                "start_date {} must precede end_date {}",
                self.start_date, self.end_date
            ));
        }
        errs
    }
}

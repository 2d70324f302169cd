//! Backtest configuration files (TOML). Every key is optional.
//!
//! ```toml
//! procedure = "I"            # or "II"
//! window_years = 5
//! shift_months = 6
//! horizon_months = 6
//! securities_per_bin = 25
//! # n_bins = 10            # overrides securities_per_bin
//! measures = ["tre", "klre", "beta", "relstd"]
//! q_refresh_months = 12
//! reference_ticker = "SPX"
//! # start_date = 2000-01-04 # default: first month with a full estimation window
//! # end_date = 2018-05-30   # default: last date in the panel
//! alpha = 0.05
//! beta_period = "monthly"
//! plot = false
//! ks_resamples = 0          # > 0 switches the KS test to a parametric bootstrap
//! ks_seed = 0               # bootstrap seed; cycle k uses ks_seed + k
//! ```

use std::fs;
use std::path::Path;

use chrono::NaiveDate;
use qrisk_core::backtest::{BacktestConfig, Procedure};
use qrisk_core::data::Month;
use qrisk_core::risk::Period;
use qrisk_core::RiskMeasure;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_REFERENCE: &str = "SPX";
pub const DEFAULT_ALPHA: f64 = 0.05;

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum DateValue {
    Toml(toml::value::Datetime),
    Text(String),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    procedure: Option<String>,
    window_years: Option<u32>,
    shift_months: Option<u32>,
    horizon_months: Option<u32>,
    securities_per_bin: Option<usize>,
    n_bins: Option<usize>,
    measures: Option<Vec<String>>,
    q_refresh_months: Option<u32>,
    reference_ticker: Option<String>,
    start_date: Option<DateValue>,
    end_date: Option<DateValue>,
    alpha: Option<f64>,
    beta_period: Option<String>,
    plot: Option<bool>,
    ks_resamples: Option<usize>,
    ks_seed: Option<u64>,
}

/// A parsed configuration. Dates left out are filled in from the price data
/// by [`RunConfig::resolve`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    #[serde(serialize_with = "display")]
    pub procedure: Procedure,
    pub window_years: u32,
    pub shift_months: u32,
    pub horizon_months: u32,
    pub securities_per_bin: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_bins: Option<usize>,
    #[serde(serialize_with = "display_all")]
    pub measures: Vec<RiskMeasure>,
    pub q_refresh_months: u32,
    pub reference_ticker: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub start_date: Option<NaiveDate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub end_date: Option<NaiveDate>,
    pub alpha: f64,
    #[serde(serialize_with = "display")]
    pub beta_period: Period,
    pub plot: bool,
    pub ks_resamples: usize,
    pub ks_seed: u64,
}

fn display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn display_all<T: std::fmt::Display, S: serde::Serializer>(v: &[T], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

impl Default for RunConfig {
    fn default() -> Self {
        let base = BacktestConfig::new(DEFAULT_REFERENCE, NaiveDate::MIN, NaiveDate::MIN);
        RunConfig {
            procedure: base.procedure,
            window_years: base.window_years,
            shift_months: base.shift_months,
            horizon_months: base.horizon_months,
            securities_per_bin: base.securities_per_bin,
            n_bins: base.n_bins,
            measures: base.measures,
            q_refresh_months: base.q_refresh_months,
            reference_ticker: base.reference_ticker,
            start_date: None,
            end_date: None,
            alpha: DEFAULT_ALPHA,
            beta_period: base.beta_period,
            plot: false,
            ks_resamples: 0,
            ks_seed: 0,
        }
    }
}

fn date(field: &str, v: DateValue, errors: &mut Vec<String>) -> Option<NaiveDate> {
    let text = match v {
        DateValue::Toml(d) => d.to_string(),
        DateValue::Text(s) => s,
    };
    match NaiveDate::parse_from_str(&text, "%Y-%m-%d") {
        Ok(d) => Some(d),
        Err(_) => {
            errors.push(format!("{field}: {text:?} is not a YYYY-MM-DD date"));
            None
        }
    }
}

impl RunConfig {
    /// Parses TOML text, collecting every problem before failing.
    pub fn from_toml(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Validation(vec![e.message().to_owned()]))?;
        let mut errors = Vec::new();
        let mut cfg = RunConfig::default();
        if let Some(p) = raw.procedure {
            match p.parse() {
                Ok(p) => cfg.procedure = p,
                Err(e) => errors.push(format!("procedure: {e}")),
            }
        }
        if let Some(m) = raw.measures {
            let mut parsed = Vec::new();
            for name in m {
                match name.parse::<RiskMeasure>() {
                    Ok(x) if parsed.contains(&x) => errors.push(format!("measures: {name} listed twice")),
                    Ok(x) => parsed.push(x),
                    Err(e) => errors.push(format!("measures: {e}")),
                }
            }
            cfg.measures = parsed;
        }
        if let Some(p) = raw.beta_period {
            match p.parse() {
                Ok(p) => cfg.beta_period = p,
                Err(e) => errors.push(format!("beta_period: {e}")),
            }
        }
        cfg.start_date = raw.start_date.and_then(|d| date("start_date", d, &mut errors));
        cfg.end_date = raw.end_date.and_then(|d| date("end_date", d, &mut errors));
        macro_rules! take {
            ($($field:ident),*) => { $(if let Some(v) = raw.$field { cfg.$field = v; })* };
        }
        take!(
            window_years,
            shift_months,
            horizon_months,
            securities_per_bin,
            q_refresh_months,
            reference_ticker,
            alpha,
            plot,
            ks_resamples,
            ks_seed
        );
        cfg.n_bins = raw.n_bins;
        if !(cfg.alpha > 0.0 && cfg.alpha < 1.0) {
            errors.push(format!("alpha must lie in (0, 1), got {}", cfg.alpha));
        }
        if let (Some(s), Some(e)) = (cfg.start_date, cfg.end_date) {
            if s >= e {
                errors.push(format!("start_date {s} is not before end_date {e}"));
            }
        }
        let probe = cfg.backtest_config(NaiveDate::MIN, NaiveDate::MAX);
        errors.extend(probe.validate());
        if errors.is_empty() {
            Ok(cfg)
        } else {
            Err(Error::Validation(errors))
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }

    /// The configuration as TOML, for echoing into reports.
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Serialize {
            what: "configuration",
            message: e.to_string(),
        })
    }

    fn backtest_config(&self, start: NaiveDate, end: NaiveDate) -> BacktestConfig {
        BacktestConfig {
            procedure: self.procedure,
            window_years: self.window_years,
            shift_months: self.shift_months,
            horizon_months: self.horizon_months,
            securities_per_bin: self.securities_per_bin,
            n_bins: self.n_bins,
            measures: self.measures.clone(),
            q_refresh_months: self.q_refresh_months,
            reference_ticker: self.reference_ticker.clone(),
            start_date: start,
            end_date: end,
            beta_period: self.beta_period,
        }
    }

    /// Fills missing dates from the sorted trading calendar: the start is the
    /// first trading day of the first month preceded by a full estimation
    /// window, the end is the last trading day.
    pub fn resolve(&self, calendar: &[NaiveDate]) -> Result<BacktestConfig> {
        let (Some(&first), Some(&last)) = (calendar.first(), calendar.last()) else {
            return Err(Error::Usage("price panel is empty".into()));
        };
        let start = match self.start_date {
            Some(s) => s,
            None => {
                let month = Month::of(first).offset(self.window_years as i32 * 12);
                let from = month.first_day();
                *calendar.iter().find(|d| **d >= from).ok_or_else(|| {
                    Error::Usage(format!(
                        "data ending {last} is shorter than the {}-year window",
                        self.window_years
                    ))
                })?
            }
        };
        Ok(self.backtest_config(start, self.end_date.unwrap_or(last)))
    }
}

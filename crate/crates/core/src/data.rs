//! Price panels and calendar months.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use chrono::{Datelike, NaiveDate};

use crate::{Error, Result};

/// A calendar month, stored as `year·12 + (month − 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Month(i32);

impl Month {
    pub fn new(year: i32, month: u32) -> Self {
        debug_assert!((1..=12).contains(&month));
        Month(year * 12 + month as i32 - 1)
    }

    pub fn of(date: NaiveDate) -> Self {
        Month::new(date.year(), date.month())
    }

    pub fn year(self) -> i32 {
        self.0.div_euclid(12)
    }

    /// 1-based month of year.
    pub fn month(self) -> u32 {
        self.0.rem_euclid(12) as u32 + 1
    }

    pub fn offset(self, months: i32) -> Self {
        Month(self.0 + months)
    }

    /// Signed number of months from `other` to `self`.
    pub fn since(self, other: Month) -> i32 {
        self.0 - other.0
    }

    pub fn first_day(self) -> NaiveDate {
        NaiveDate::from_ymd_opt(self.year(), self.month(), 1).expect("valid month")
    }

    pub fn last_day(self) -> NaiveDate {
        self.offset(1).first_day().pred_opt().expect("valid date")
    }
}

impl fmt::Display for Month {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year(), self.month())
    }
}

/// Adjusted close prices keyed by ticker, each series sorted by date.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PricePanel {
    series: BTreeMap<String, Vec<(NaiveDate, f64)>>,
}

impl PricePanel {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts one ticker's prices. Dates are sorted; duplicates and
    /// non-positive prices are rejected.
    pub fn insert(&mut self, ticker: impl Into<String>, mut prices: Vec<(NaiveDate, f64)>) -> Result<()> {
        let ticker = ticker.into();
        prices.sort_by_key(|p| p.0);
        validate_prices(&prices)?;
        if self.series.contains_key(&ticker) {
            return Err(Error::InvalidInput(format!("duplicate ticker {ticker}")));
        }
        self.series.insert(ticker, prices);
        Ok(())
    }

    pub fn get(&self, ticker: &str) -> Option<&[(NaiveDate, f64)]> {
        self.series.get(ticker).map(Vec::as_slice)
    }

    pub fn tickers(&self) -> impl Iterator<Item = &str> {
        self.series.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[(NaiveDate, f64)])> {
        self.series.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    pub fn len(&self) -> usize {
        self.series.len()
    }

    pub fn is_empty(&self) -> bool {
        self.series.is_empty()
    }

    pub fn row_count(&self) -> usize {
        self.series.values().map(Vec::len).sum()
    }

    /// Sorted union of all dates in the panel.
    pub fn calendar(&self) -> Vec<NaiveDate> {
        let mut dates: Vec<NaiveDate> = self.series.values().flatten().map(|p| p.0).collect();
        dates.sort_unstable();
        dates.dedup();
        dates
    }
}

pub(crate) fn validate_prices(prices: &[(NaiveDate, f64)]) -> Result<()> {
    for w in prices.windows(2) {
        if w[1].0 <= w[0].0 {
            return Err(Error::InvalidInput(format!(
                "dates not strictly increasing at {}",
                w[1].0
            )));
        }
    }
    if let Some(&(d, p)) = prices.iter().find(|p| !(p.1 > 0.0) || !p.1.is_finite()) {
        return Err(Error::InvalidInput(format!("non-positive price {p} on {d}")));
    }
    Ok(())
}

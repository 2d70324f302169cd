use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use chrono::NaiveDate;

use crate::data::{validate_prices, Month};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Period {
    Daily,
    #[default]
    Monthly,
}

impl fmt::Display for Period {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Period::Daily => "daily",
            Period::Monthly => "monthly",
        })
    }
}

impl FromStr for Period {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "daily" => Ok(Period::Daily),
            "monthly" => Ok(Period::Monthly),
            _ => Err(Error::InvalidInput(alloc::format!("unknown period {s:?}"))),
        }
    }
}

/// Fractional periodic returns (0.01 = 1%) of one security, in date order.
///
/// Monthly observations are dated on the last calendar day of their month so
/// series from different securities align on the same keys.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnSeries {
    pub ticker: String,
    pub period: Period,
    pub observations: Vec<(NaiveDate, f64)>,
}

impl ReturnSeries {
    pub fn values(&self) -> Vec<f64> {
        self.observations.iter().map(|o| o.1).collect()
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    /// Observations with `from <= date <= to`.
    pub fn between(&self, from: NaiveDate, to: NaiveDate) -> ReturnSeries {
        ReturnSeries {
            ticker: self.ticker.clone(),
            period: self.period,
            observations: self
                .observations
                .iter()
                .copied()
                .filter(|o| o.0 >= from && o.0 <= to)
                .collect(),
        }
    }
}

/// Last price of each calendar month.
pub fn month_end_prices(prices: &[(NaiveDate, f64)]) -> BTreeMap<Month, f64> {
    let mut out = BTreeMap::new();
    for &(d, p) in prices {
        out.insert(Month::of(d), p);
    }
    out
}

/// Simple returns `(X(t) − X(t−τ))/X(t−τ)` with τ one period.
///
/// Daily returns use consecutive observations. Monthly returns use the last
/// price of each calendar month; a month is skipped when the preceding
/// calendar month has no price.
pub fn compute_returns(ticker: &str, prices: &[(NaiveDate, f64)], period: Period) -> Result<ReturnSeries> {
    validate_prices(prices)?;
    let observations: Vec<(NaiveDate, f64)> = match period {
        Period::Daily => {
            if prices.len() < 2 {
                return Err(Error::InsufficientData {
                    needed: 2,
                    got: prices.len(),
                });
            }
            prices
                .windows(2)
                .map(|w| (w[1].0, (w[1].1 - w[0].1) / w[0].1))
                .collect()
        }
        Period::Monthly => {
            let ends = month_end_prices(prices);
            if ends.len() < 2 {
                return Err(Error::InsufficientData {
                    needed: 2,
                    got: ends.len(),
                });
            }
            let ends: Vec<(Month, f64)> = ends.into_iter().collect();
            ends.windows(2)
                .filter(|w| w[1].0.since(w[0].0) == 1)
                .map(|w| (w[1].0.last_day(), (w[1].1 - w[0].1) / w[0].1))
                .collect()
        }
    };
    Ok(ReturnSeries {
        ticker: String::from(ticker),
        period,
        observations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn d(y: i32, m: u32, day: u32) -> NaiveDate {
        NaiveDate::from_ymd_opt(y, m, day).unwrap()
    }

    #[test]
    fn daily_simple_returns() {
        let r = compute_returns("X", &[(d(2000, 1, 3), 100.0), (d(2000, 1, 4), 110.0)], Period::Daily).unwrap();
        assert!((r.values()[0] - 0.10).abs() < 1e-15);
        let r = compute_returns(
            "X",
            &[(d(2000, 1, 3), 100.0), (d(2000, 1, 4), 50.0), (d(2000, 1, 5), 100.0)],
            Period::Daily,
        )
        .unwrap();
        assert_eq!(r.values(), vec![-0.5, 1.0]);
    }

    #[test]
    fn constant_prices_give_zero_returns() {
        let p: Vec<_> = (1..=20).map(|i| (d(2001, 3, i), 42.0)).collect();
        let r = compute_returns("X", &p, Period::Daily).unwrap();
        assert!(r.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn monthly_uses_month_end_prices() {
        let p = vec![
            (d(2000, 1, 3), 90.0),
            (d(2000, 1, 31), 100.0),
            (d(2000, 2, 15), 500.0),
            (d(2000, 2, 28), 120.0),
            (d(2000, 3, 30), 60.0),
            // April missing: May's return has no base and is skipped
            (d(2000, 5, 31), 70.0),
            (d(2000, 6, 30), 77.0),
        ];
        let r = compute_returns("X", &p, Period::Monthly).unwrap();
        let expect = [(d(2000, 2, 29), 0.2), (d(2000, 3, 31), -0.5), (d(2000, 6, 30), 0.1)];
        assert_eq!(r.len(), expect.len());
        for (got, want) in r.observations.iter().zip(expect) {
            assert_eq!(got.0, want.0);
            assert!((got.1 - want.1).abs() < 1e-12);
        }
    }

    #[test]
    fn too_few_prices() {
        assert!(matches!(
            compute_returns("X", &[(d(2000, 1, 3), 1.0)], Period::Daily),
            Err(Error::InsufficientData { .. })
        ));
        assert!(matches!(
            compute_returns("X", &[(d(2000, 1, 3), 1.0), (d(2000, 1, 4), 1.1)], Period::Monthly),
            Err(Error::InsufficientData { .. })
        ));
    }

    #[test]
    fn rejects_bad_prices() {
        assert!(compute_returns("X", &[(d(2000, 1, 3), 1.0), (d(2000, 1, 4), -1.0)], Period::Daily).is_err());
        assert!(compute_returns("X", &[(d(2000, 1, 4), 1.0), (d(2000, 1, 3), 1.0)], Period::Daily).is_err());
    }
}

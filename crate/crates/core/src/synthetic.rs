//! Synthetic single-factor markets with known betas.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Float;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StudentT};

use crate::data::{Month, PricePanel};
use crate::{Error, Result};

/// Monthly returns below this are clipped so prices stay positive.
const RETURN_FLOOR: f64 = -0.95;

/// A universe where every security follows `R_j = β_j·R_m + ε_j`, with the
/// market and the idiosyncratic noise drawn from unit-variance Student-t
/// distributions.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedUniverse {
    pub n_securities: usize,
    /// Betas are spaced evenly over this closed range.
    pub beta_range: (f64, f64),
    /// Expected market return per month.
    pub market_drift: f64,
    pub market_sigma: f64,
    pub noise_sigma: f64,
    /// Degrees of freedom of both market and noise draws (> 2).
    pub tail_dof: f64,
    pub first_month: Month,
    pub months: usize,
    pub reference_ticker: String,
    /// Every `listing_stride`-th security starts trading `listing_delay`
    /// months late; zero stride lists everything at the first month.
    pub listing_stride: usize,
    pub listing_delay: usize,
}

/// Generated prices plus the planted betas.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedMarket {
    pub panel: PricePanel,
    pub betas: BTreeMap<String, f64>,
}

impl PlantedUniverse {
    /// 100 securities with betas on [0.5, 2], 4% monthly market and noise
    /// volatility, 1% monthly market drift and t(4) tails, from 1994-12 to
    /// 2018-05.
    pub fn new(reference_ticker: impl Into<String>) -> Self {
        PlantedUniverse {
            n_securities: 100,
            beta_range: (0.5, 2.0),
            market_drift: 0.01,
            market_sigma: 0.04,
            noise_sigma: 0.04,
            tail_dof: 4.0,
            first_month: Month::new(1994, 12),
            months: 282,
            reference_ticker: reference_ticker.into(),
            listing_stride: 0,
            listing_delay: 0,
        }
    }

    pub fn ticker(i: usize) -> String {
        format!("S{i:03}")
    }

    pub fn beta(&self, i: usize) -> f64 {
        let (lo, hi) = self.beta_range;
        if self.n_securities < 2 {
            return lo;
        }
        lo + (hi - lo) * i as f64 / (self.n_securities - 1) as f64
    }

    /// Month-end prices, one per month, starting at 100.
    pub fn generate(&self, seed: u64) -> Result<PlantedMarket> {
        if !(self.tail_dof > 2.0) {
            return Err(Error::Domain {
                what: "tail_dof",
                value: self.tail_dof,
            });
        }
        if self.months < 2 {
            return Err(Error::InsufficientData {
                needed: 2,
                got: self.months,
            });
        }
        let t = StudentT::new(self.tail_dof).map_err(|_| Error::Domain {
            what: "tail_dof",
            value: self.tail_dof,
        })?;
        let unit = (self.tail_dof / (self.tail_dof - 2.0)).sqrt();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let draw = |rng: &mut ChaCha8Rng| t.sample(rng) / unit;

        let market: Vec<f64> = (1..self.months)
            .map(|_| self.market_drift + self.market_sigma * draw(&mut rng))
            .collect();
        let dates: Vec<_> = (0..self.months)
            .map(|k| self.first_month.offset(k as i32).last_day())
            .collect();
        let path = |returns: &mut dyn Iterator<Item = f64>| {
            let mut price = 100.0;
            let mut out = Vec::with_capacity(self.months);
            out.push(price);
            for r in returns {
                price *= 1.0 + r.max(RETURN_FLOOR);
                out.push(price);
            }
            out
        };

        let mut panel = PricePanel::new();
        let ref_prices = path(&mut market.iter().copied());
        panel.insert(
            self.reference_ticker.clone(),
            dates.iter().copied().zip(ref_prices).collect(),
        )?;
        let mut betas = BTreeMap::new();
        for i in 0..self.n_securities {
            let beta = self.beta(i);
            let noise: Vec<f64> = market.iter().map(|_| self.noise_sigma * draw(&mut rng)).collect();
            let prices = path(&mut market.iter().zip(&noise).map(|(m, e)| beta * m + e));
            let skip = if self.listing_stride > 0 && i % self.listing_stride == 0 {
                self.listing_delay
            } else {
                0
            };
            let series: Vec<_> = dates.iter().copied().zip(prices).skip(skip).collect();
            if series.len() < 2 {
                continue;
            }
            let ticker = Self::ticker(i);
            panel.insert(ticker.clone(), series)?;
            betas.insert(ticker, beta);
        }
        Ok(PlantedMarket { panel, betas })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_and_determinism() {
        let u = PlantedUniverse {
            n_securities: 5,
            months: 30,
            ..PlantedUniverse::new("MKT")
        };
        let a = u.generate(1).unwrap();
        assert_eq!(a.panel.len(), 6);
        assert_eq!(a.panel.get("S000").unwrap().len(), 30);
        assert_eq!(a, u.generate(1).unwrap());
        assert_ne!(a, u.generate(2).unwrap());
        assert_eq!(a.betas["S004"], 2.0);
    }

    #[test]
    fn late_listings() {
        let u = PlantedUniverse {
            n_securities: 6,
            months: 30,
            listing_stride: 3,
            listing_delay: 12,
            ..PlantedUniverse::new("MKT")
        };
        let m = u.generate(1).unwrap();
        assert_eq!(m.panel.get("S000").unwrap().len(), 18);
        assert_eq!(m.panel.get("S001").unwrap().len(), 30);
        assert_eq!(m.panel.get("S003").unwrap().len(), 18);
    }
}

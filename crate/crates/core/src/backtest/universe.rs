use alloc::string::{String, ToString};
use alloc::vec::Vec;

use chrono::NaiveDate;

use super::{BacktestConfig, CycleWindow, Procedure};
use crate::data::{Month, PricePanel};
use crate::{Error, Result};

/// A security qualifies for a cycle when its history starts in or before the
/// first month of the estimation window.
pub fn is_eligible(prices: &[(NaiveDate, f64)], cycle: &CycleWindow) -> bool {
    prices.first().is_some_and(|p| Month::of(p.0) <= cycle.estimation_first)
}

/// Eligible tickers for one cycle, sorted, excluding the reference.
pub fn select_universe(panel: &PricePanel, cycle: &CycleWindow, config: &BacktestConfig) -> Result<Vec<String>> {
    let tickers: Vec<String> = panel
        .iter()
        .filter(|(t, p)| *t != config.reference_ticker && is_eligible(p, cycle))
        .map(|(t, _)| t.to_string())
        .collect();
    if tickers.is_empty() {
        return Err(Error::EmptyUniverse(cycle.start));
    }
    Ok(tickers)
}

/// Per-cycle universes. The equal-count procedure keeps the first cycle's
/// list throughout; the fixed-edge procedure re-selects every cycle.
pub fn plan_universes(panel: &PricePanel, cycles: &[CycleWindow], config: &BacktestConfig) -> Result<Vec<Vec<String>>> {
    match config.procedure {
        Procedure::EqualCount => {
            let Some(first) = cycles.first() else {
                return Ok(Vec::new());
            };
            let fixed = select_universe(panel, first, config)?;
            Ok(cycles.iter().map(|_| fixed.clone()).collect())
        }
        Procedure::FixedEdges => cycles.iter().map(|c| select_universe(panel, c, config)).collect(),
    }
}

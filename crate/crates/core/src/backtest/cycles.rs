use alloc::format;
use alloc::vec::Vec;

use chrono::{Months, NaiveDate};

use super::BacktestConfig;
use crate::data::Month;
use crate::{Error, Result};

/// One rebalancing cycle.
///
/// Months are calendar months: the forward window starts with the month that
/// contains `start`, and the estimation window is the `window_years · 12`
/// months before it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CycleWindow {
    pub index: usize,
    pub start: NaiveDate,
    pub estimation_first: Month,
    pub estimation_last: Month,
    pub forward_first: Month,
    pub forward_last: Month,
}

impl CycleWindow {
    fn new(index: usize, start: NaiveDate, config: &BacktestConfig) -> Self {
        let forward_first = Month::of(start);
        CycleWindow {
            index,
            start,
            estimation_first: forward_first.offset(-(config.window_months() as i32)),
            estimation_last: forward_first.offset(-1),
            forward_first,
            forward_last: forward_first.offset(config.horizon_months as i32 - 1),
        }
    }

    pub fn estimation_months(&self) -> usize {
        (self.estimation_last.since(self.estimation_first) + 1) as usize
    }

    pub fn forward_months(&self) -> usize {
        (self.forward_last.since(self.forward_first) + 1) as usize
    }
}

fn add_months(date: NaiveDate, months: u32) -> Result<NaiveDate> {
    date.checked_add_months(Months::new(months))
        .ok_or_else(|| Error::InvalidInput(format!("date overflow adding {months} months to {date}")))
}

/// Cycles starting at `start_date + k·shift_months` for as long as the last
/// forward month is no later than the month of the end date.
///
/// `calendar` is the sorted set of available trading dates; when non-empty it
/// must reach back to the first estimation month, and its last date caps
/// `end_date`.
pub fn enumerate_cycles(config: &BacktestConfig, calendar: &[NaiveDate]) -> Result<Vec<CycleWindow>> {
    let mut end = config.end_date;
    if let (Some(&first), Some(&last)) = (calendar.first(), calendar.last()) {
        let first_needed = CycleWindow::new(0, config.start_date, config).estimation_first;
        if Month::of(first) > first_needed {
            return Err(Error::InsufficientSpan(format!(
                "data start {first} is after the first estimation month {first_needed}"
            )));
        }
        end = end.min(last);
    }
    let last_month = Month::of(end);
    let mut cycles = Vec::new();
    for k in 0u32.. {
        let cycle = CycleWindow::new(
            k as usize,
            add_months(config.start_date, k * config.shift_months)?,
            config,
        );
        if cycle.forward_last > last_month {
            break;
        }
        cycles.push(cycle);
    }
    if cycles.is_empty() {
        return Err(Error::InsufficientSpan(format!(
            "no {}-month forward window fits between {} and {end}",
            config.horizon_months, config.start_date
        )));
    }
    Ok(cycles)
}

/// `⌊(span − window − horizon)/shift⌋ + 1`, all in whole months, or zero when
/// the span is too short.
pub fn expected_cycle_count(span_months: u32, window_months: u32, horizon_months: u32, shift_months: u32) -> u32 {
    match span_months.checked_sub(window_months + horizon_months) {
        Some(rest) => rest / shift_months + 1,
        None => 0,
    }
}

/// For each cycle, the index of the cycle whose reference fit supplies `q`.
/// A cycle refits `q` when at least `q_refresh_months` have passed since the
/// last refit; cycle 0 always refits.
pub fn plan_q_refresh(cycles: &[CycleWindow], q_refresh_months: u32) -> Vec<usize> {
    let mut plan = Vec::with_capacity(cycles.len());
    let mut last: Option<&CycleWindow> = None;
    for c in cycles {
        let refresh = match last {
            None => true,
            Some(prev) => c.forward_first.since(prev.forward_first) >= q_refresh_months as i32,
        };
        if refresh {
            last = Some(c);
        }
        plan.push(last.map_or(c.index, |p| p.index));
    }
    plan
}

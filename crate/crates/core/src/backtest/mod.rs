//! Rolling risk-binned portfolio backtests.
//!
//! Each cycle estimates every risk model on `window_years` of monthly
//! returns before the cycle start, sorts the universe into risk bins, and
//! records the equal-weight mean monthly return of each bin over the next
//! `horizon_months` in excess of the reference index. Cycles advance by
//! `shift_months`. Bin risks and excess returns are then averaged over all
//! cycles into one risk-return profile per measure, with a straight-line fit.
//!
//! Two procedures are supported:
//!
//! * [`Procedure::EqualCount`]: a universe fixed at the first cycle and
//!   equal-count bins recomputed every cycle.
//! * [`Procedure::FixedEdges`]: a universe that grows as securities acquire a
//!   full estimation window, binned on edges frozen at the first cycle.

mod binning;
mod config;
mod cycles;
mod engine;
mod profile;
mod universe;

pub use binning::{assign_excess_returns, bin_equal_count, bin_fixed_edges, equal_count_edges, BinnedPortfolio};
pub use config::{BacktestConfig, Procedure};
pub use cycles::{enumerate_cycles, expected_cycle_count, plan_q_refresh, CycleWindow};
pub use engine::{run_backtest, BacktestInputs, BacktestOutcome, CycleResult, SecurityRecord};
pub use profile::{aggregate_profile, ProfilePoint, RiskReturnProfile};
pub use universe::{is_eligible, plan_universes, select_universe};

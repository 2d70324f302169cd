//! Parallel backtest driver.

use std::collections::BTreeMap;

use chrono::NaiveDate;
use qrisk_core::backtest::{BacktestConfig, BacktestInputs, RiskReturnProfile};
use qrisk_core::data::PricePanel;
use qrisk_core::stats::{ks_test, ks_test_bootstrap, KsResult};
use qrisk_core::RiskMeasure;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleDiagnostic {
    pub index: usize,
    pub start: NaiveDate,
    pub q_used: f64,
    pub q_refreshed: bool,
    pub reference_location: f64,
    pub reference_precision: f64,
    pub universe_size: usize,
    pub fitted: usize,
    pub dropped: Vec<(String, String)>,
}

/// KS check of a reference fit that set `q`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KsSummary {
    pub cycle: usize,
    pub q: f64,
    pub converged: bool,
    pub n: usize,
    pub d_max: f64,
    pub d_crit: f64,
    pub alpha: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub config: RunConfig,
    /// The configuration with dates filled in from the data.
    pub resolved: BacktestConfig,
    pub profiles: BTreeMap<RiskMeasure, RiskReturnProfile>,
    pub cycles: Vec<CycleDiagnostic>,
    pub ks: Vec<KsSummary>,
}

/// Runs the backtest with reference `q` fits and cycles spread over the
/// rayon pool. Results are gathered in cycle order, so the report does not
/// depend on scheduling.
pub fn run(panel: &PricePanel, config: &RunConfig) -> Result<RunReport> {
    let resolved = config.resolve(&panel.calendar())?;
    let inputs = BacktestInputs::prepare(panel, &resolved)?;
    let refresh = inputs.refresh_cycles();
    let fits: Vec<(usize, qrisk_core::QGaussianFit, KsResult)> = refresh
        .par_iter()
        .map(|&k| {
            let fit = inputs.fit_reference_q(k)?;
            let data = inputs.reference_window_returns(k);
            let ks = if config.ks_resamples > 0 {
                ks_test_bootstrap(
                    &data,
                    &fit.model,
                    config.alpha,
                    config.ks_resamples,
                    config.ks_seed + k as u64,
                )?
            } else {
                ks_test(&data, &fit.model, config.alpha)?
            };
            Ok((k, fit, ks))
        })
        .collect::<Result<_>>()?;
    let q_of: BTreeMap<usize, f64> = fits.iter().map(|(k, f, _)| (*k, f.q())).collect();
    let results = (0..inputs.cycles().len())
        .into_par_iter()
        .map(|k| inputs.run_cycle(k, q_of[&inputs.q_plan()[k]]))
        .collect::<qrisk_core::Result<Vec<_>>>()?;
    let cycles = results
        .iter()
        .map(|r| CycleDiagnostic {
            index: r.index,
            start: r.start,
            q_used: r.q_used,
            q_refreshed: r.q_refreshed,
            reference_location: r.reference_fit.location(),
            reference_precision: r.reference_fit.precision(),
            universe_size: r.universe_size,
            fitted: r.records.len(),
            dropped: r.dropped.clone(),
        })
        .collect();
    let ks = fits
        .iter()
        .map(|(k, f, r)| KsSummary {
            cycle: *k,
            q: f.q(),
            converged: f.converged,
            n: r.n,
            d_max: r.d_max,
            d_crit: r.d_crit,
            alpha: r.alpha,
            pass: r.pass,
        })
        .collect();
    let outcome = inputs.assemble(results)?;
    Ok(RunReport {
        config: config.clone(),
        resolved,
        profiles: outcome.profiles,
        cycles,
        ks,
    })
}

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use chrono::NaiveDate;

use super::{
    aggregate_profile, assign_excess_returns, bin_equal_count, bin_fixed_edges, enumerate_cycles, equal_count_edges,
    plan_q_refresh, plan_universes, BacktestConfig, BinnedPortfolio, CycleWindow, Procedure, RiskReturnProfile,
};
use crate::data::{Month, PricePanel};
use crate::qgaussian::{fit_fixed_q, fit_full, moments, MomentSummary, QGaussianFit};
use crate::risk::{beta, beta_from_returns, compute_returns, klre, rel_std, tre, Period, ReturnSeries, RiskMeasure};
use crate::{Error, Result};

/// Fewest estimation-window returns a security may have.
const MIN_ESTIMATION_RETURNS: usize = 30;

/// One security's risk scores and forward mean monthly return in a cycle.
#[derive(Debug, Clone, PartialEq)]
pub struct SecurityRecord {
    pub ticker: String,
    pub risks: BTreeMap<RiskMeasure, f64>,
    pub forward_return: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CycleResult {
    pub index: usize,
    pub start: NaiveDate,
    pub q_used: f64,
    /// Whether `q_used` was estimated in this cycle.
    pub q_refreshed: bool,
    pub reference_fit: QGaussianFit,
    pub reference_forward: f64,
    pub records: Vec<SecurityRecord>,
    /// `(ticker, reason)` for securities left out of this cycle.
    pub dropped: Vec<(String, String)>,
    pub universe_size: usize,
}

impl CycleResult {
    fn risks(&self, measure: RiskMeasure) -> Vec<(String, f64)> {
        self.records
            .iter()
            .filter_map(|r| r.risks.get(&measure).map(|v| (r.ticker.clone(), *v)))
            .collect()
    }

    fn forward_returns(&self) -> BTreeMap<String, f64> {
        self.records
            .iter()
            .map(|r| (r.ticker.clone(), r.forward_return))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BacktestOutcome {
    pub cycles: Vec<CycleResult>,
    /// Per measure, the bins of every cycle.
    pub bins: BTreeMap<RiskMeasure, Vec<Vec<BinnedPortfolio>>>,
    pub profiles: BTreeMap<RiskMeasure, RiskReturnProfile>,
}

struct Security {
    prices: Vec<(NaiveDate, f64)>,
    monthly: BTreeMap<Month, f64>,
}

impl Security {
    fn new(ticker: &str, prices: &[(NaiveDate, f64)]) -> Result<Self> {
        let monthly = compute_returns(ticker, prices, Period::Monthly)?
            .observations
            .into_iter()
            .map(|(d, r)| (Month::of(d), r))
            .collect();
        Ok(Security {
            prices: prices.to_vec(),
            monthly,
        })
    }

    fn months(&self, first: Month, last: Month) -> BTreeMap<Month, f64> {
        self.monthly.range(first..=last).map(|(m, r)| (*m, *r)).collect()
    }

    fn daily_between(&self, ticker: &str, first: Month, last: Month) -> Result<ReturnSeries> {
        // the first daily return of the window needs the close before it
        let from = first.first_day();
        let to = last.last_day();
        let start = self.prices.partition_point(|p| p.0 < from).saturating_sub(1);
        let end = self.prices.partition_point(|p| p.0 <= to);
        Ok(compute_returns(ticker, &self.prices[start..end], Period::Daily)?.between(from, to))
    }
}

/// Everything a backtest needs that does not depend on `q`: cached monthly
/// returns, the cycle calendar, per-cycle universes and the `q` refresh plan.
///
/// Cycles can be evaluated independently (and concurrently) once the
/// reference fits named by [`BacktestInputs::q_plan`] are available.
pub struct BacktestInputs {
    config: BacktestConfig,
    reference: Security,
    securities: BTreeMap<String, Security>,
    cycles: Vec<CycleWindow>,
    universes: Vec<Vec<String>>,
    q_plan: Vec<usize>,
}

impl BacktestInputs {
    pub fn prepare(panel: &PricePanel, config: &BacktestConfig) -> Result<Self> {
        let problems = config.validate();
        if !problems.is_empty() {
            return Err(Error::InvalidInput(problems.join("; ")));
        }
        let ref_prices = panel
            .get(&config.reference_ticker)
            .ok_or_else(|| Error::InvalidInput(format!("reference {} not in panel", config.reference_ticker)))?;
        let reference = Security::new(&config.reference_ticker, ref_prices)?;
        let cycles = enumerate_cycles(config, &panel.calendar())?;
        let universes = plan_universes(panel, &cycles, config)?;
        let mut securities = BTreeMap::new();
        for ticker in universes.iter().flatten() {
            if securities.contains_key(ticker) {
                continue;
            }
            let prices = panel.get(ticker).expect("universe tickers come from the panel");
            match Security::new(ticker, prices) {
                Ok(s) => {
                    securities.insert(ticker.clone(), s);
                }
                Err(e) => log::warn!("{ticker}: no monthly returns ({e})"),
            }
        }
        let q_plan = plan_q_refresh(&cycles, config.q_refresh_months);
        Ok(BacktestInputs {
            config: config.clone(),
            reference,
            securities,
            cycles,
            universes,
            q_plan,
        })
    }

    pub fn config(&self) -> &BacktestConfig {
        &self.config
    }

    pub fn cycles(&self) -> &[CycleWindow] {
        &self.cycles
    }

    pub fn universe(&self, k: usize) -> &[String] {
        &self.universes[k]
    }

    /// For each cycle, the cycle whose reference window supplies `q`.
    pub fn q_plan(&self) -> &[usize] {
        &self.q_plan
    }

    /// Cycles that estimate a fresh `q`.
    pub fn refresh_cycles(&self) -> Vec<usize> {
        self.q_plan
            .iter()
            .enumerate()
            .filter(|(k, src)| k == *src)
            .map(|(k, _)| k)
            .collect()
    }

    /// Reference monthly returns inside cycle `k`'s estimation window.
    pub fn reference_window_returns(&self, k: usize) -> Vec<f64> {
        let c = &self.cycles[k];
        self.reference
            .months(c.estimation_first, c.estimation_last)
            .into_values()
            .collect()
    }

    /// Full q-Gaussian fit of the reference over cycle `k`'s estimation window.
    pub fn fit_reference_q(&self, k: usize) -> Result<QGaussianFit> {
        let fit = fit_full(&self.reference_window_returns(k))?;
        if !fit.converged {
            log::warn!(
                "cycle {k}: reference q fit stopped at {:.4} without converging",
                fit.q()
            );
        }
        Ok(fit)
    }

    /// Evaluates cycle `k` with the reference tail index `q`.
    pub fn run_cycle(&self, k: usize, q: f64) -> Result<CycleResult> {
        let c = self.cycles[k];
        let est_needed = (c.estimation_months() - 1).max(MIN_ESTIMATION_RETURNS);
        let ref_est = self.reference.months(c.estimation_first, c.estimation_last);
        if ref_est.len() < est_needed {
            return Err(Error::InsufficientData {
                needed: est_needed,
                got: ref_est.len(),
            });
        }
        let ref_values: Vec<f64> = ref_est.values().copied().collect();
        let reference_fit = fit_fixed_q(&ref_values, q)?;
        let ref_moments = moments(&ref_values)?;
        let ref_fwd = self.reference.months(c.forward_first, c.forward_last);
        if ref_fwd.len() != c.forward_months() {
            return Err(Error::InsufficientData {
                needed: c.forward_months(),
                got: ref_fwd.len(),
            });
        }
        let reference_forward = mean(ref_fwd.values());
        let ref_daily = match self.config.beta_period {
            Period::Daily if self.config.measures.contains(&RiskMeasure::Beta) => Some(self.reference.daily_between(
                &self.config.reference_ticker,
                c.estimation_first,
                c.estimation_last,
            )?),
            _ => None,
        };

        let mut records = Vec::new();
        let mut dropped = Vec::new();
        for ticker in &self.universes[k] {
            let Some(sec) = self.securities.get(ticker) else {
                dropped.push((ticker.clone(), "no monthly returns".to_string()));
                continue;
            };
            let outcome = self.evaluate(
                ticker,
                sec,
                &c,
                q,
                &ref_est,
                &reference_fit,
                &ref_moments,
                ref_daily.as_ref(),
            );
            match outcome {
                Ok((risks, fwd)) => records.push(SecurityRecord {
                    ticker: ticker.clone(),
                    risks,
                    forward_return: fwd,
                }),
                Err(reason) => {
                    log::warn!("cycle {k}: dropping {ticker}: {reason}");
                    dropped.push((ticker.clone(), reason));
                }
            }
        }
        Ok(CycleResult {
            index: k,
            start: c.start,
            q_used: q,
            q_refreshed: self.q_plan[k] == k,
            reference_fit,
            reference_forward,
            records,
            dropped,
            universe_size: self.universes[k].len(),
        })
    }

    #[allow(clippy::too_many_arguments)]
    fn evaluate(
        &self,
        ticker: &str,
        sec: &Security,
        c: &CycleWindow,
        q: f64,
        ref_est: &BTreeMap<Month, f64>,
        ref_fit: &QGaussianFit,
        ref_moments: &MomentSummary,
        ref_daily: Option<&ReturnSeries>,
    ) -> Result<(BTreeMap<RiskMeasure, f64>, f64), String> {
        let est = sec.months(c.estimation_first, c.estimation_last);
        let needed = (c.estimation_months() - 1).max(MIN_ESTIMATION_RETURNS);
        if est.len() < needed {
            return Err(format!("{} estimation returns, need {needed}", est.len()));
        }
        let fwd = sec.months(c.forward_first, c.forward_last);
        if fwd.len() != c.forward_months() {
            return Err(format!("{} of {} forward months", fwd.len(), c.forward_months()));
        }
        let values: Vec<f64> = est.values().copied().collect();
        let mut risks = BTreeMap::new();
        let mut mom = None;
        for &m in &self.config.measures {
            let value = match m {
                RiskMeasure::Tre => {
                    let fit = fit_fixed_q(&values, q).map_err(|e| format!("fit failed: {e}"))?;
                    tre(&fit.model, &ref_fit.model)
                }
                RiskMeasure::Klre | RiskMeasure::RelStd => {
                    let p = match mom {
                        Some(p) => p,
                        None => *mom.insert(moments(&values).map_err(|e| format!("moments: {e}"))?),
                    };
                    if m == RiskMeasure::Klre {
                        klre(&p, ref_moments)
                    } else {
                        rel_std(&p, ref_moments)
                    }
                }
                RiskMeasure::Beta => match ref_daily {
                    Some(rd) => {
                        let daily = sec
                            .daily_between(ticker, c.estimation_first, c.estimation_last)
                            .map_err(|e| format!("daily returns: {e}"))?;
                        beta(&daily, rd).map(|b| b.beta)
                    }
                    None => {
                        let (s, r): (Vec<f64>, Vec<f64>) = est
                            .iter()
                            .filter_map(|(mo, v)| ref_est.get(mo).map(|rv| (*v, *rv)))
                            .unzip();
                        beta_from_returns(&s, &r).map(|b| b.beta)
                    }
                },
            }
            .map_err(|e| format!("{m}: {e}"))?;
            risks.insert(m, value);
        }
        Ok((risks, mean(fwd.values())))
    }

    /// Bins every cycle for every measure and aggregates the profiles.
    /// `results` must hold one entry per cycle, in cycle order.
    pub fn assemble(&self, results: Vec<CycleResult>) -> Result<BacktestOutcome> {
        if results.len() != self.cycles.len() || results.iter().enumerate().any(|(k, r)| r.index != k) {
            return Err(Error::Internal("cycle results out of order".to_string()));
        }
        let mut bins = BTreeMap::new();
        let mut profiles = BTreeMap::new();
        for &m in &self.config.measures {
            let mut per_cycle = Vec::with_capacity(results.len());
            let mut edges: Option<Vec<f64>> = None;
            for r in &results {
                let risks = r.risks(m);
                let mut cycle_bins = match (&self.config.procedure, &edges) {
                    (Procedure::FixedEdges, Some(e)) => bin_fixed_edges(&risks, e)?,
                    _ => {
                        let b = bin_equal_count(&risks, self.per_bin(risks.len())?)?;
                        if self.config.procedure == Procedure::FixedEdges {
                            edges = Some(equal_count_edges(&b));
                        }
                        b
                    }
                };
                assign_excess_returns(&mut cycle_bins, &r.forward_returns(), r.reference_forward)?;
                per_cycle.push(cycle_bins);
            }
            profiles.insert(m, aggregate_profile(m, &per_cycle)?);
            bins.insert(m, per_cycle);
        }
        Ok(BacktestOutcome {
            cycles: results,
            bins,
            profiles,
        })
    }

    fn per_bin(&self, n: usize) -> Result<usize> {
        match self.config.n_bins {
            Some(k) if n < k => Err(Error::TooFewSecurities { needed: k, got: n }),
            Some(k) => Ok(n / k),
            None => Ok(self.config.securities_per_bin),
        }
    }
}

fn mean<'a>(values: impl Iterator<Item = &'a f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    sum / n as f64
}

/// Runs every cycle in order on the current thread.
pub fn run_backtest(panel: &PricePanel, config: &BacktestConfig) -> Result<BacktestOutcome> {
    let inputs = BacktestInputs::prepare(panel, config)?;
    let mut q_by_source: BTreeMap<usize, f64> = BTreeMap::new();
    for k in inputs.refresh_cycles() {
        q_by_source.insert(k, inputs.fit_reference_q(k)?.q());
    }
    let results = (0..inputs.cycles().len())
        .map(|k| inputs.run_cycle(k, q_by_source[&inputs.q_plan()[k]]))
        .collect::<Result<Vec<_>>>()?;
    inputs.assemble(results)
}

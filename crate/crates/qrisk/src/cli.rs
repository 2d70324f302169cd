//! Command-line interface.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand};
use qrisk_core::risk::{beta_from_returns, compute_returns, Period};
use qrisk_core::stats::{ks_test, ks_test_bootstrap, KsResult};
use qrisk_core::{fit_fixed_q, fit_full, klre, moments, rel_std, tre, QGaussian, QGaussianFit, RiskMeasure};

use crate::config::{RunConfig, DEFAULT_ALPHA};
use crate::error::{Error, Result};
use crate::io::{self, FileKind};
use crate::report;

#[derive(Debug, Parser)]
#[command(
    name = "qrisk",
    version,
    about = "q-Gaussian fits, relative-entropy risk and risk-binned backtests"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a q-Gaussian to one series and check it with a KS test.
    Fit(FitArgs),
    /// Risk of a security relative to a reference series.
    Risk(RiskArgs),
    /// Kolmogorov-Smirnov test of a q-Gaussian fit.
    Ks(KsArgs),
    /// Draw q-Gaussian returns into a `ticker,return` CSV.
    Simulate(SimulateArgs),
    /// Rolling risk-binned portfolio backtest.
    Backtest(BacktestArgs),
}

#[derive(Debug, Args)]
pub struct SeriesArgs {
    /// Price file (date,ticker,adj_close), directory of <TICKER>.csv files,
    /// or a returns file (ticker,return).
    pub input: PathBuf,
    /// Ticker to analyse; optional for a single-ticker returns file.
    #[arg(long)]
    pub ticker: Option<String>,
    /// First return date to include (YYYY-MM-DD).
    #[arg(long)]
    pub from: Option<NaiveDate>,
    /// Last return date to include (YYYY-MM-DD).
    #[arg(long)]
    pub to: Option<NaiveDate>,
    /// Return period computed from prices.
    #[arg(long, default_value_t = Period::Monthly)]
    pub period: Period,
}

#[derive(Debug, Args)]
pub struct KsOptions {
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    pub alpha: f64,
    /// Parametric-bootstrap resamples for the critical distance (0: asymptotic).
    #[arg(long, default_value_t = 0)]
    pub bootstrap: usize,
    /// Seed for the bootstrap; required when --bootstrap is set.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub series: SeriesArgs,
    /// Hold q fixed and fit only location and scale.
    #[arg(long)]
    pub fix_q: Option<f64>,
    #[command(flatten)]
    pub ks: KsOptions,
}

#[derive(Debug, Args)]
pub struct KsArgs {
    #[command(flatten)]
    pub series: SeriesArgs,
    #[arg(long)]
    pub fix_q: Option<f64>,
    #[command(flatten)]
    pub ks: KsOptions,
}

#[derive(Debug, Args)]
pub struct RiskArgs {
    #[command(flatten)]
    pub series: SeriesArgs,
    /// Reference ticker (the market index).
    #[arg(long)]
    pub reference: String,
    /// Measures to compute; all four when omitted.
    #[arg(long = "measure", value_delimiter = ',')]
    pub measures: Vec<RiskMeasure>,
    /// Use this q instead of fitting it on the reference.
    #[arg(long)]
    pub q: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub q: f64,
    /// Inverse-squared scale B.
    #[arg(long = "B", alias = "b")]
    pub precision: f64,
    /// Location M.
    #[arg(long = "M", alias = "m", default_value_t = 0.0, allow_hyphen_values = true)]
    pub location: f64,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value = "SIM")]
    pub ticker: String,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BacktestArgs {
    /// TOML configuration; defaults for every key when omitted.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub prices: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
}

/// One series of returns, with dates when it came from prices.
struct Series {
    ticker: String,
    dates: Option<Vec<NaiveDate>>,
    values: Vec<f64>,
}

fn load_series(args: &SeriesArgs, ticker: Option<&str>) -> Result<Series> {
    let kind = if args.input.is_dir() {
        FileKind::Prices
    } else {
        io::detect(&args.input)?
    };
    match kind {
        FileKind::Returns => {
            if args.from.is_some() || args.to.is_some() {
                return Err(Error::Usage(
                    "--from/--to need a price file; returns files carry no dates".into(),
                ));
            }
            let mut all = io::read_returns(&args.input)?;
            let ticker = match ticker {
                Some(t) => t.to_owned(),
                None if all.len() == 1 => all.keys().next().cloned().unwrap_or_default(),
                None => {
                    return Err(Error::Usage(
                        "--ticker is required for a file with several tickers".into(),
                    ))
                }
            };
            let values = all
                .remove(&ticker)
                .ok_or_else(|| Error::Usage(format!("ticker {ticker} not found")))?;
            Ok(Series {
                ticker,
                dates: None,
                values,
            })
        }
        FileKind::Prices | FileKind::TickerPrices => {
            let ticker = ticker.ok_or_else(|| Error::Usage("--ticker is required for price input".into()))?;
            let loaded = io::load_prices(&args.input)?;
            let prices = loaded
                .panel
                .get(ticker)
                .ok_or_else(|| Error::Usage(format!("ticker {ticker} not found")))?;
            let returns = compute_returns(ticker, prices, args.period)?;
            let (dates, values) = returns
                .observations
                .into_iter()
                .filter(|(d, _)| args.from.is_none_or(|f| *d >= f) && args.to.is_none_or(|t| *d <= t))
                .unzip();
            Ok(Series {
                ticker: ticker.to_owned(),
                dates: Some(dates),
                values,
            })
        }
    }
}

fn fit_series(values: &[f64], fix_q: Option<f64>) -> Result<QGaussianFit> {
    Ok(match fix_q {
        Some(q) => fit_fixed_q(values, q)?,
        None => fit_full(values)?,
    })
}

fn run_ks(values: &[f64], model: &QGaussian, opts: &KsOptions) -> Result<(KsResult, &'static str)> {
    if !(opts.alpha > 0.0 && opts.alpha < 1.0) {
        return Err(Error::Usage(format!("--alpha must lie in (0, 1), got {}", opts.alpha)));
    }
    if opts.bootstrap == 0 {
        return Ok((ks_test(values, model, opts.alpha)?, "asymptotic"));
    }
    let seed = opts
        .seed
        .ok_or_else(|| Error::Usage("--bootstrap needs an explicit --seed".into()))?;
    Ok((
        ks_test_bootstrap(values, model, opts.alpha, opts.bootstrap, seed)?,
        "bootstrap",
    ))
}

fn ks_line(r: &KsResult, mode: &str) -> String {
    format!(
        "KS         D_max = {:.6}  D_crit = {:.6}  (alpha {}, {mode}): {}\n",
        r.d_max,
        r.d_crit,
        r.alpha,
        if r.pass { "pass" } else { "fail" }
    )
}

fn fit(args: &FitArgs) -> Result<String> {
    let s = load_series(&args.series, args.series.ticker.as_deref())?;
    let f = fit_series(&s.values, args.fix_q)?;
    let (ks, mode) = run_ks(&s.values, &f.model, &args.ks)?;
    let mut out = String::new();
    let _ = writeln!(out, "ticker     {}", s.ticker);
    let _ = writeln!(out, "n          {}", f.n_samples);
    let _ = writeln!(
        out,
        "q          {:.6}{}",
        f.q(),
        if args.fix_q.is_some() { " (fixed)" } else { "" }
    );
    let _ = writeln!(out, "M          {:.8}", f.location());
    let _ = writeln!(out, "B          {:.6}", f.precision());
    let _ = writeln!(out, "converged  {}", f.converged);
    out.push_str(&ks_line(&ks, mode));
    Ok(out)
}

fn ks(args: &KsArgs) -> Result<String> {
    let s = load_series(&args.series, args.series.ticker.as_deref())?;
    let f = fit_series(&s.values, args.fix_q)?;
    let (ks, mode) = run_ks(&s.values, &f.model, &args.ks)?;
    Ok(format!(
        "ticker     {}\nn          {}\nq          {:.6}\n{}",
        s.ticker,
        ks.n,
        f.q(),
        ks_line(&ks, mode)
    ))
}

/// Pairs observations present in both series.
fn align(p: &Series, r: &Series) -> Result<(Vec<f64>, Vec<f64>)> {
    match (&p.dates, &r.dates) {
        (Some(dp), Some(dr)) => {
            let by_date: std::collections::BTreeMap<_, _> = dr.iter().zip(&r.values).collect();
            Ok(dp
                .iter()
                .zip(&p.values)
                .filter_map(|(d, v)| by_date.get(d).map(|rv| (*v, **rv)))
                .unzip())
        }
        (None, None) if p.values.len() == r.values.len() => Ok((p.values.clone(), r.values.clone())),
        _ => Err(Error::Usage(
            "beta needs two dated series or two returns of equal length".into(),
        )),
    }
}

fn risk(args: &RiskArgs) -> Result<String> {
    let p = load_series(&args.series, args.series.ticker.as_deref())?;
    let r = load_series(&args.series, Some(&args.reference))?;
    let measures = if args.measures.is_empty() {
        RiskMeasure::ALL.to_vec()
    } else {
        args.measures.clone()
    };
    let mut out = String::new();
    let _ = writeln!(out, "security   {} ({} returns)", p.ticker, p.values.len());
    let _ = writeln!(out, "reference  {} ({} returns)", r.ticker, r.values.len());
    if let Some(d) = &p.dates {
        if let (Some(a), Some(b)) = (d.first(), d.last()) {
            let _ = writeln!(out, "window     {a} .. {b}");
        }
    }
    for m in measures {
        let value = match m {
            RiskMeasure::Tre => {
                let q = match args.q {
                    Some(q) => q,
                    None => fit_full(&r.values)?.q(),
                };
                let _ = writeln!(out, "q          {q:.6}");
                tre(&fit_fixed_q(&p.values, q)?.model, &fit_fixed_q(&r.values, q)?.model)?
            }
            RiskMeasure::Klre => klre(&moments(&p.values)?, &moments(&r.values)?)?,
            RiskMeasure::RelStd => rel_std(&moments(&p.values)?, &moments(&r.values)?)?,
            RiskMeasure::Beta => {
                let (a, b) = align(&p, &r)?;
                beta_from_returns(&a, &b)?.beta
            }
        };
        let _ = writeln!(out, "{:<10} {value}", m.as_str());
    }
    Ok(out)
}

fn simulate(args: &SimulateArgs) -> Result<String> {
    if args.n == 0 {
        return Err(Error::Usage("--n must be positive".into()));
    }
    let model = QGaussian::new(args.q, args.location, args.precision)?;
    let csv = io::returns_csv(&args.ticker, &model.sample(args.n, args.seed));
    match &args.out {
        Some(path) => {
            std::fs::write(path, csv).map_err(|e| Error::io(path, e))?;
            Ok(format!("wrote {} returns to {}\n", args.n, path.display()))
        }
        None => Ok(csv),
    }
}

fn backtest(args: &BacktestArgs) -> Result<String> {
    let config = match &args.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let loaded = io::load_prices(&args.prices)?;
    log::info!("loaded {} rows for {} tickers", loaded.rows, loaded.panel.len());
    let run = || crate::run::run(&loaded.panel, &config);
    let report = match args.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Usage(format!("--threads: {e}")))?
            .install(run)?,
        None => run()?,
    };
    let written = report::emit_report(&report, &args.out)?;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "procedure {}  cycles {}  {} .. {}",
        config.procedure,
        report.cycles.len(),
        report.resolved.start_date,
        report.resolved.end_date
    );
    for (m, p) in &report.profiles {
        let _ = writeln!(
            out,
            "{:<8} p0 = {:+.6}  p1 = {:+.6}  chi2 = {:.4}",
            m.as_str(),
            p.fit.p0,
            p.fit.p1,
            p.fit.chi2
        );
    }
    let _ = writeln!(out, "wrote {} files to {}", written.len(), display(&args.out));
    Ok(out)
}

fn display(p: &Path) -> String {
    p.display().to_string()
}

/// Runs a parsed command and returns what it prints.
pub fn execute(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Fit(a) => fit(a),
        Command::Risk(a) => risk(a),
        Command::Ks(a) => ks(a),
        Command::Simulate(a) => simulate(a),
        Command::Backtest(a) => backtest(a),
    }
}

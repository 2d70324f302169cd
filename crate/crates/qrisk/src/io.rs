//! Price and return files.
//!
//! Prices are long-format CSV with the header `date,ticker,adj_close`, or a
//! directory of `<TICKER>.csv` files with the header `date,adj_close`.
//! Returns written by `qrisk simulate` use the header `ticker,return`.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use qrisk_core::data::PricePanel;

use crate::error::{Error, Result};

pub const PRICE_HEADER: [&str; 3] = ["date", "ticker", "adj_close"];
pub const TICKER_FILE_HEADER: [&str; 2] = ["date", "adj_close"];
pub const RETURNS_HEADER: [&str; 2] = ["ticker", "return"];

/// A price panel with where it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedPanel {
    pub panel: PricePanel,
    pub sources: Vec<PathBuf>,
    pub rows: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileKind {
    Prices,
    TickerPrices,
    Returns,
}

fn reader(path: &Path) -> Result<csv::Reader<fs::File>> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file))
}

fn parse_error(path: &Path, line: u64, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn headers(path: &Path, rdr: &mut csv::Reader<fs::File>) -> Result<Vec<String>> {
    let h = rdr.headers().map_err(|e| parse_error(path, 1, e.to_string()))?;
    Ok(h.iter().map(str::to_owned).collect())
}

/// Classifies a CSV file by its header.
pub fn detect(path: &Path) -> Result<FileKind> {
    let h = headers(path, &mut reader(path)?)?;
    if h == PRICE_HEADER {
        Ok(FileKind::Prices)
    } else if h == TICKER_FILE_HEADER {
        Ok(FileKind::TickerPrices)
    } else if h == RETURNS_HEADER {
        Ok(FileKind::Returns)
    } else {
        Err(parse_error(
            path,
            1,
            format!(
                "unrecognized header {:?}; expected date,ticker,adj_close or ticker,return",
                h.join(",")
            ),
        ))
    }
}

fn parse_date(path: &Path, line: u64, s: &str) -> Result<NaiveDate> {
    NaiveDate::parse_from_str(s, "%Y-%m-%d").map_err(|e| parse_error(path, line, format!("bad date {s:?}: {e}")))
}

fn parse_number(path: &Path, line: u64, s: &str) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|_| parse_error(path, line, format!("bad number {s:?}")))
}

#[derive(Default)]
struct Rows {
    series: BTreeMap<String, Vec<(NaiveDate, f64)>>,
    seen: HashSet<(String, NaiveDate)>,
    count: usize,
}

impl Rows {
    fn push(&mut self, path: &Path, line: u64, ticker: &str, date: NaiveDate, price: f64) -> Result<()> {
        if price.is_nan() || price <= 0.0 || price.is_infinite() {
            return Err(Error::NonPositivePrice {
                path: path.into(),
                line,
                ticker: ticker.into(),
                value: price,
            });
        }
        if !self.seen.insert((ticker.to_owned(), date)) {
            return Err(Error::DuplicateRow {
                path: path.into(),
                line,
                ticker: ticker.into(),
                date,
            });
        }
        self.series.entry(ticker.to_owned()).or_default().push((date, price));
        self.count += 1;
        Ok(())
    }

    fn read_file(&mut self, path: &Path, fixed_ticker: Option<&str>) -> Result<()> {
        let mut rdr = reader(path)?;
        let want: &[&str] = if fixed_ticker.is_some() {
            &TICKER_FILE_HEADER
        } else {
            &PRICE_HEADER
        };
        if headers(path, &mut rdr)? != want {
            return Err(parse_error(path, 1, format!("expected header {}", want.join(","))));
        }
        for rec in rdr.records() {
            let rec = rec.map_err(|e| {
                let line = e.position().map_or(0, |p| p.line());
                parse_error(path, line, e.to_string())
            })?;
            let line = rec.position().map_or(0, |p| p.line());
            let date = parse_date(path, line, &rec[0])?;
            let (ticker, price) = match fixed_ticker {
                Some(t) => (t, parse_number(path, line, &rec[1])?),
                None => {
                    if rec[1].is_empty() {
                        return Err(parse_error(path, line, "empty ticker"));
                    }
                    (&rec[1], parse_number(path, line, &rec[2])?)
                }
            };
            self.push(path, line, ticker, date, price)?;
        }
        Ok(())
    }
}

/// Loads a long-format price file or a directory of per-ticker files.
pub fn load_prices(path: &Path) -> Result<LoadedPanel> {
    let mut rows = Rows::default();
    let mut sources = Vec::new();
    let meta = fs::metadata(path).map_err(|e| Error::io(path, e))?;
    if meta.is_dir() {
        let mut files: Vec<PathBuf> = fs::read_dir(path)
            .map_err(|e| Error::io(path, e))?
            .map(|e| e.map(|e| e.path()).map_err(|err| Error::io(path, err)))
            .collect::<Result<_>>()?;
        files.retain(|p| p.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")));
        files.sort();
        for file in files {
            match detect(&file)? {
                FileKind::Prices => rows.read_file(&file, None)?,
                FileKind::TickerPrices => {
                    let ticker = file.file_stem().and_then(|s| s.to_str()).unwrap_or_default().to_owned();
                    rows.read_file(&file, Some(&ticker))?
                }
                FileKind::Returns => {
                    return Err(parse_error(&file, 1, "return files cannot be mixed into a price panel"))
                }
            }
            sources.push(file);
        }
    } else {
        rows.read_file(path, None)?;
        sources.push(path.to_path_buf());
    }
    let mut panel = PricePanel::new();
    for (ticker, prices) in rows.series {
        panel.insert(ticker, prices)?;
    }
    Ok(LoadedPanel {
        panel,
        sources,
        rows: rows.count,
    })
}

fn create(path: &Path) -> Result<std::io::BufWriter<fs::File>> {
    Ok(std::io::BufWriter::new(
        fs::File::create(path).map_err(|e| Error::io(path, e))?,
    ))
}

/// Writes a panel in long format, tickers in order, dates ascending.
pub fn write_prices(panel: &PricePanel, path: &Path) -> Result<()> {
    let mut out = create(path)?;
    let mut buf = String::from("date,ticker,adj_close\n");
    for (ticker, prices) in panel.iter() {
        for (d, p) in prices {
            buf.push_str(&format!("{d},{ticker},{p}\n"));
        }
    }
    out.write_all(buf.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| Error::io(path, e))
}

/// Reads a returns file into per-ticker sequences in file order.
pub fn read_returns(path: &Path) -> Result<BTreeMap<String, Vec<f64>>> {
    let mut rdr = reader(path)?;
    if headers(path, &mut rdr)? != RETURNS_HEADER {
        return Err(parse_error(path, 1, "expected header ticker,return"));
    }
    let mut out: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| parse_error(path, e.position().map_or(0, |p| p.line()), e.to_string()))?;
        let line = rec.position().map_or(0, |p| p.line());
        let value = parse_number(path, line, &rec[1])?;
        if !value.is_finite() {
            return Err(parse_error(path, line, "non-finite return"));
        }
        out.entry(rec[0].to_owned()).or_default().push(value);
    }
    Ok(out)
}

pub fn returns_csv(ticker: &str, values: &[f64]) -> String {
    let mut s = String::from("ticker,return\n");
    for v in values {
        s.push_str(&format!("{ticker},{v}\n"));
    }
    s
}

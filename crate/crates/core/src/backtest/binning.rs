use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::{Error, Result};

/// A group of securities with similar risk, with its realized forward excess
/// return once [`assign_excess_returns`] has run.
#[derive(Debug, Clone, PartialEq)]
pub struct BinnedPortfolio {
    pub bin_index: usize,
    pub risk_lo: f64,
    pub risk_hi: f64,
    pub risk_center: f64,
    /// Tickers in ascending (risk, ticker) order.
    pub members: Vec<String>,
    /// Equal-weight mean forward return of the members minus the reference
    /// forward return; `None` for an empty bin.
    pub mean_excess_return: Option<f64>,
}

fn by_risk_then_ticker(a: &(String, f64), b: &(String, f64)) -> Ordering {
    a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0))
}

fn sorted(risks: &[(String, f64)]) -> Result<Vec<(String, f64)>> {
    if let Some((t, v)) = risks.iter().find(|r| !r.1.is_finite()) {
        return Err(Error::InvalidInput(alloc::format!("non-finite risk {v} for {t}")));
    }
    let mut out = risks.to_vec();
    out.sort_by(by_risk_then_ticker);
    Ok(out)
}

fn portfolio(bin_index: usize, risk_lo: f64, risk_hi: f64, members: Vec<String>) -> BinnedPortfolio {
    BinnedPortfolio {
        bin_index,
        risk_lo,
        risk_hi,
        risk_center: 0.5 * (risk_lo + risk_hi),
        members,
        mean_excess_return: None,
    }
}

/// Sorts securities by risk (ties by ticker) and cuts them into consecutive
/// groups of `per_bin`; leftover securities join the top bin.
///
/// Interior edges sit halfway between the last risk of one group and the
/// first of the next; the outer edges are the extreme risks.
pub fn bin_equal_count(risks: &[(String, f64)], per_bin: usize) -> Result<Vec<BinnedPortfolio>> {
    if per_bin == 0 {
        return Err(Error::InvalidInput(String::from("securities per bin must be positive")));
    }
    if risks.len() < per_bin {
        return Err(Error::TooFewSecurities {
            needed: per_bin,
            got: risks.len(),
        });
    }
    let sorted = sorted(risks)?;
    let n_bins = sorted.len() / per_bin;
    let mut bins = Vec::with_capacity(n_bins);
    for b in 0..n_bins {
        let lo_idx = b * per_bin;
        let hi_idx = if b + 1 == n_bins {
            sorted.len()
        } else {
            lo_idx + per_bin
        };
        let group = &sorted[lo_idx..hi_idx];
        let lo = if b == 0 {
            group[0].1
        } else {
            0.5 * (sorted[lo_idx - 1].1 + group[0].1)
        };
        let hi = if b + 1 == n_bins {
            group[group.len() - 1].1
        } else {
            0.5 * (group[group.len() - 1].1 + sorted[hi_idx].1)
        };
        bins.push(portfolio(b, lo, hi, group.iter().map(|g| g.0.clone()).collect()));
    }
    Ok(bins)
}

/// The `n_bins + 1` edges of an equal-count binning.
pub fn equal_count_edges(bins: &[BinnedPortfolio]) -> Vec<f64> {
    let mut edges: Vec<f64> = bins.iter().map(|b| b.risk_lo).collect();
    if let Some(last) = bins.last() {
        edges.push(last.risk_hi);
    }
    edges
}

/// Assigns securities to the bins `[eᵢ, eᵢ₊₁)`; risks outside the outer edges
/// go to the nearest end bin. Bins may come out empty.
pub fn bin_fixed_edges(risks: &[(String, f64)], edges: &[f64]) -> Result<Vec<BinnedPortfolio>> {
    if edges.len() < 2 {
        return Err(Error::InvalidEdges("need at least two edges"));
    }
    if edges.iter().any(|e| !e.is_finite()) {
        return Err(Error::InvalidEdges("non-finite edge"));
    }
    if edges.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidEdges("edges must be strictly increasing"));
    }
    let n_bins = edges.len() - 1;
    let interior = &edges[1..n_bins];
    let mut members: Vec<Vec<String>> = alloc::vec![Vec::new(); n_bins];
    for (ticker, risk) in sorted(risks)? {
        let idx = interior.partition_point(|&e| e <= risk);
        members[idx].push(ticker);
    }
    Ok(members
        .into_iter()
        .enumerate()
        .map(|(i, m)| portfolio(i, edges[i], edges[i + 1], m))
        .collect())
}

/// Fills `mean_excess_return` from per-ticker forward returns. Every member
/// must have a forward return.
pub fn assign_excess_returns(
    bins: &mut [BinnedPortfolio],
    forward: &BTreeMap<String, f64>,
    reference_forward: f64,
) -> Result<()> {
    for bin in bins {
        if bin.members.is_empty() {
            bin.mean_excess_return = None;
            continue;
        }
        let mut sum = 0.0;
        for t in &bin.members {
            sum += *forward
                .get(t)
                .ok_or_else(|| Error::Internal(alloc::format!("no forward return for {t}")))?;
        }
        bin.mean_excess_return = Some(sum / bin.members.len() as f64 - reference_forward);
    }
    Ok(())
}

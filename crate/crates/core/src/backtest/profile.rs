use alloc::vec::Vec;

use super::BinnedPortfolio;
use crate::risk::RiskMeasure;
use crate::stats::{linear_fit, LinearFit};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfilePoint {
    pub bin_index: usize,
    /// Bin centre averaged over the contributing cycles.
    pub mean_risk: f64,
    /// Excess return averaged over the contributing cycles.
    pub e_rel: f64,
    pub n_cycles: usize,
}

/// Risk against expected excess return for one measure, averaged over cycles.
#[derive(Debug, Clone, PartialEq)]
pub struct RiskReturnProfile {
    pub measure: RiskMeasure,
    pub points: Vec<ProfilePoint>,
    pub fit: LinearFit,
    pub n_cycles: usize,
}

impl RiskReturnProfile {
    pub fn risks(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.mean_risk).collect()
    }

    pub fn excess_returns(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.e_rel).collect()
    }
}

/// Averages each bin index over the cycles in which it is non-empty and fits
/// a line through the resulting points.
pub fn aggregate_profile(measure: RiskMeasure, cycles: &[Vec<BinnedPortfolio>]) -> Result<RiskReturnProfile> {
    if cycles.is_empty() {
        return Err(Error::DegenerateProfile("no cycles"));
    }
    let n_bins = cycles.iter().map(Vec::len).max().unwrap_or(0);
    let mut points = Vec::with_capacity(n_bins);
    for b in 0..n_bins {
        let (mut risk, mut excess, mut n) = (0.0, 0.0, 0usize);
        for bin in cycles.iter().filter_map(|c| c.get(b)) {
            if let Some(e) = bin.mean_excess_return {
                risk += bin.risk_center;
                excess += e;
                n += 1;
            }
        }
        if n > 0 {
            points.push(ProfilePoint {
                bin_index: b,
                mean_risk: risk / n as f64,
                e_rel: excess / n as f64,
                n_cycles: n,
            });
        }
    }
    let s: Vec<f64> = points.iter().map(|p| p.mean_risk).collect();
    let e: Vec<f64> = points.iter().map(|p| p.e_rel).collect();
    let fit = linear_fit(&s, &e)?;
    Ok(RiskReturnProfile {
        measure,
        points,
        fit,
        n_cycles: cycles.len(),
    })
}

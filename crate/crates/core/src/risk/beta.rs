use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::Float;

use super::ReturnSeries;
use crate::{Error, Result};

/// CAPM regression of a security on the market: `R_j = β·R_m + α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaEstimate {
    pub beta: f64,
    pub alpha: f64,
    /// Correlation of security and market returns.
    pub rho: f64,
    pub n_samples: usize,
}

/// Beta of `security` on `market` over their common dates (inner join).
pub fn beta(security: &ReturnSeries, market: &ReturnSeries) -> Result<BetaEstimate> {
    let market_by_date: BTreeMap<_, _> = market.observations.iter().copied().collect();
    let (xs, ys): (Vec<f64>, Vec<f64>) = security
        .observations
        .iter()
        .filter_map(|(d, rj)| market_by_date.get(d).map(|rm| (*rm, *rj)))
        .unzip();
    if xs.len() < 2 {
        return Err(Error::InsufficientOverlap { common: xs.len() });
    }
    beta_from_returns(&ys, &xs)
}

/// Beta of already aligned return slices.
pub fn beta_from_returns(security: &[f64], market: &[f64]) -> Result<BetaEstimate> {
    let n = security.len();
    if n != market.len() || n < 2 {
        return Err(Error::InsufficientOverlap {
            common: n.min(market.len()),
        });
    }
    let nf = n as f64;
    let mj = security.iter().sum::<f64>() / nf;
    let mm = market.iter().sum::<f64>() / nf;
    let (mut sjj, mut smm, mut sjm) = (0.0, 0.0, 0.0);
    for (&rj, &rm) in security.iter().zip(market) {
        let (dj, dm) = (rj - mj, rm - mm);
        sjj += dj * dj;
        smm += dm * dm;
        sjm += dj * dm;
    }
    if !(smm > 0.0) {
        return Err(Error::DegenerateData("constant market returns"));
    }
    let sigma_ratio = (sjj / smm).sqrt();
    let rho = if sjj > 0.0 {
        (sjm / (sjj * smm).sqrt()).clamp(-1.0, 1.0)
    } else {
        0.0
    };
    let beta = rho * sigma_ratio;
    Ok(BetaEstimate {
        beta,
        alpha: mj - beta * mm,
        rho,
        n_samples: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::risk::Period;
    use alloc::string::String;
    use chrono::NaiveDate;

    fn series(values: &[(u32, f64)]) -> ReturnSeries {
        ReturnSeries {
            ticker: String::from("T"),
            period: Period::Daily,
            observations: values
                .iter()
                .map(|&(day, v)| (NaiveDate::from_ymd_opt(2001, 1, day).unwrap(), v))
                .collect(),
        }
    }

    #[test]
    fn doubled_market() {
        let m = [0.01, -0.02, 0.03, 0.005, -0.01];
        let j: Vec<f64> = m.iter().map(|x| 2.0 * x).collect();
        let b = beta_from_returns(&j, &m).unwrap();
        assert!((b.beta - 2.0).abs() < 1e-12);
        assert!(b.alpha.abs() < 1e-15);
        assert!((b.rho - 1.0).abs() < 1e-12);
        let s = beta_from_returns(&m, &m).unwrap();
        assert!((s.beta - 1.0).abs() < 1e-12 && s.alpha.abs() < 1e-15);
    }

    #[test]
    fn inner_join_on_dates() {
        let m = series(&[(2, 0.01), (3, -0.02), (4, 0.03), (5, 0.0)]);
        let j = series(&[(3, -0.04), (4, 0.06), (5, 0.0), (6, 9.0)]);
        let b = beta(&j, &m).unwrap();
        assert_eq!(b.n_samples, 3);
        assert!((b.beta - 2.0).abs() < 1e-12);
    }

    #[test]
    fn errors() {
        let m = series(&[(2, 0.01), (3, 0.01), (4, 0.01)]);
        assert!(matches!(beta(&m, &m), Err(Error::DegenerateData(_))));
        let j = series(&[(9, 0.01)]);
        assert!(matches!(beta(&j, &m), Err(Error::InsufficientOverlap { common: 0 })));
    }

    #[test]
    fn beta_matches_rho_times_sigma_ratio() {
        let m = [0.01, -0.02, 0.03, 0.005, -0.01, 0.02];
        let j = [0.03, 0.01, -0.02, 0.0, 0.015, -0.01];
        let b = beta_from_returns(&j, &m).unwrap();
        let sd = |v: &[f64]| {
            let mu = v.iter().sum::<f64>() / v.len() as f64;
            (v.iter().map(|x| (x - mu) * (x - mu)).sum::<f64>() / (v.len() - 1) as f64).sqrt()
        };
        assert!((b.beta - b.rho * sd(&j) / sd(&m)).abs() < 1e-12);
    }
}

use alloc::vec::Vec;

use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::qgaussian::{fit_fixed_q, QGaussian, MIN_FIT_SAMPLES};
use crate::{Error, Result};

pub const DEFAULT_BOOTSTRAP_RESAMPLES: usize = 1000;

/// One-sample Kolmogorov-Smirnov verdict for data against a q-Gaussian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsResult {
    pub d_max: f64,
    pub d_crit: f64,
    pub n: usize,
    pub alpha: f64,
    /// `d_max < d_crit`.
    pub pass: bool,
}

/// Asymptotic coefficient `c(α)` of the critical distance `c(α)/√n`.
///
/// Tabulated levels use the customary rounded values; other levels use
/// `√(−½·ln(α/2))`.
pub fn critical_coefficient(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain {
            what: "alpha",
            value: alpha,
        });
    }
    const TABLE: [(f64, f64); 6] = [
        (0.10, 1.224),
        (0.05, 1.358),
        (0.025, 1.480),
        (0.01, 1.628),
        (0.005, 1.731),
        (0.001, 1.949),
    ];
    if let Some(&(_, c)) = TABLE.iter().find(|(a, _)| (a - alpha).abs() < 1e-12) {
        return Ok(c);
    }
    Ok((-0.5 * (0.5 * alpha).ln()).sqrt())
}

/// `sup |F_n(x) − F(x)|` evaluated on both sides of every step of the
/// empirical CDF. `data` need not be sorted.
pub fn ks_statistic<F: FnMut(f64) -> f64>(data: &[f64], mut cdf: F) -> f64 {
    let mut sorted: Vec<f64> = data.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            let above = (i + 1) as f64 / n - f;
            let below = f - i as f64 / n;
            above.max(below)
        })
        .fold(0.0, f64::max)
}

fn check_sample(data: &[f64]) -> Result<()> {
    if data.len() < MIN_FIT_SAMPLES {
        return Err(Error::InsufficientData {
            needed: MIN_FIT_SAMPLES,
            got: data.len(),
        });
    }
    Ok(())
}

/// KS test with the asymptotic critical distance `c(α)/√n`.
pub fn ks_test(data: &[f64], model: &QGaussian, alpha: f64) -> Result<KsResult> {
    check_sample(data)?;
    let c = critical_coefficient(alpha)?;
    let n = data.len();
    let d_max = ks_statistic(data, |x| model.cdf(x));
    let d_crit = c / (n as f64).sqrt();
    Ok(KsResult {
        d_max,
        d_crit,
        n,
        alpha,
        pass: d_max < d_crit,
    })
}

/// KS test whose critical distance is the `(1−α)` quantile of `D` under a
/// parametric bootstrap: synthetic samples of size `n` are drawn from
/// `model`, refitted for location and scale at the model's `q`, and scored
/// against their own refit. This absorbs the bias from testing against
/// parameters estimated on the same data.
pub fn ks_test_bootstrap(data: &[f64], model: &QGaussian, alpha: f64, resamples: usize, seed: u64) -> Result<KsResult> {
    check_sample(data)?;
    critical_coefficient(alpha)?;
    if resamples == 0 {
        return Err(Error::InvalidInput(alloc::string::String::from(
            "bootstrap needs at least one resample",
        )));
    }
    let n = data.len();
    let d_max = ks_statistic(data, |x| model.cdf(x));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ds: Vec<f64> = Vec::with_capacity(resamples);
    for _ in 0..resamples {
        let synthetic = model.sample(n, rng.random());
        match fit_fixed_q(&synthetic, model.q()) {
            Ok(refit) => ds.push(ks_statistic(&synthetic, |x| refit.model.cdf(x))),
            Err(e) => log::warn!("bootstrap refit failed: {e}"),
        }
    }
    if ds.is_empty() {
        return Err(Error::ConvergenceFailure { iterations: resamples });
    }
    ds.sort_by(f64::total_cmp);
    let rank = ((1.0 - alpha) * ds.len() as f64).ceil() as usize;
    let d_crit = ds[rank.clamp(1, ds.len()) - 1];
    Ok(KsResult {
        d_max,
        d_crit,
        n,
        alpha,
        pass: d_max < d_crit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn critical_distance_at_n_100() {
        let g = QGaussian::new(1.5, 0.0, 1.0).unwrap();
        let data = g.sample(100, 1);
        let r = ks_test(&data, &g, 0.05).unwrap();
        assert!((r.d_crit - 0.1358).abs() < 1e-15);
        assert_eq!(critical_coefficient(0.01).unwrap(), 1.628);
        assert!((critical_coefficient(0.2).unwrap() - 1.0730).abs() < 1e-4);
        assert!(critical_coefficient(0.0).is_err());
    }

    #[test]
    fn statistic_of_uniform_grid() {
        // the points i/n + 1/(2n) against U(0,1) give D = 1/(2n)
        let n = 50;
        let data: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
        let d = ks_statistic(&data, |x| x.clamp(0.0, 1.0));
        assert!((d - 0.5 / n as f64).abs() < 1e-14);
    }

    #[test]
    fn requires_thirty_points() {
        let g = QGaussian::new(1.5, 0.0, 1.0).unwrap();
        assert!(matches!(
            ks_test(&[0.0; 10], &g, 0.05),
            Err(Error::InsufficientData { .. })
        ));
    }

    #[test]
    fn bootstrap_critical_value_is_sane() {
        let g = QGaussian::new(1.4, 0.0, 30.0).unwrap();
        let data = g.sample(200, 11);
        let r = ks_test_bootstrap(&data, &g, 0.05, 200, 5).unwrap();
        let asymptotic = 1.358 / (200f64).sqrt();
        // estimated parameters shrink the null distribution of D
        assert!(r.d_crit > 0.3 * asymptotic && r.d_crit < asymptotic * 1.1, "{r:?}");
    }
}

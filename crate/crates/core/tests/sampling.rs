use qrisk_core::stats::ks_test;
use qrisk_core::{moments, QGaussian};
use statrs::distribution::{ChiSquared, ContinuousCDF};

#[test]
fn sample_median_sits_at_location() {
    let g = QGaussian::new(1.5, 0.02, 40.0).unwrap();
    let mut xs = g.sample(100_000, 5);
    xs.sort_by(f64::total_cmp);
    let median = 0.5 * (xs[49_999] + xs[50_000]);
    assert!((median - 0.02).abs() < 0.005, "{median}");
}

#[test]
fn near_gaussian_limit_has_unit_variance() {
    let g = QGaussian::new(1.001, 0.0, 0.5).unwrap();
    let m = moments(&g.sample(100_000, 9)).unwrap();
    assert!((m.sigma * m.sigma - 1.0).abs() < 0.03, "{}", m.sigma);
    let m = moments(&g.sample(1_000_000, 10)).unwrap();
    assert!((m.sigma - 1.0).abs() < 0.01, "{}", m.sigma);
}

#[test]
fn histogram_matches_density() {
    let g = QGaussian::new(1.4, 0.01, 60.0).unwrap();
    let n = 1_000_000;
    let xs = g.sample(n, 21);
    // 40 interior cells on ±4 scale units plus the two open tails
    let w = 4.0 / 60f64.sqrt();
    let cells = 40;
    let edges: Vec<f64> = (0..=cells)
        .map(|i| 0.01 - w + 2.0 * w * i as f64 / cells as f64)
        .collect();
    let mut counts = vec![0usize; cells + 2];
    for &x in &xs {
        let k = edges.partition_point(|&e| e <= x);
        counts[k] += 1;
    }
    let mut cdfs = vec![0.0];
    cdfs.extend(edges.iter().map(|&e| g.cdf(e)));
    cdfs.push(1.0);
    let chi2: f64 = counts
        .iter()
        .enumerate()
        .map(|(k, &c)| {
            let expected = n as f64 * (cdfs[k + 1] - cdfs[k]);
            (c as f64 - expected).powi(2) / expected
        })
        .sum();
    let dof = (cells + 2 - 1) as f64;
    let critical = ChiSquared::new(dof).unwrap().inverse_cdf(0.99);
    assert!(chi2 < critical, "chi2 {chi2} >= {critical}");
}

#[test]
fn large_self_samples_pass_ks() {
    let g = QGaussian::new(1.5, 0.0, 50.0).unwrap();
    let passes = (0..100)
        .filter(|&seed| ks_test(&g.sample(100_000, seed), &g, 0.05).unwrap().pass)
        .count();
    assert!(passes >= 90, "{passes}/100");
}

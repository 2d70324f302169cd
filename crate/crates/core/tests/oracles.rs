mod common;

use qrisk_core::risk::beta_from_returns;
use qrisk_core::special::digamma;
use qrisk_core::stats::{discrete_relative_entropy, linear_fit};
use qrisk_core::{klre, normalization_constant, tre, MomentSummary, QGaussian};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, StudentsT};

use common::*;

#[test]
fn normalization_matches_kernel_integral() {
    for q in [1.05, 1.2, 1.5, 2.0, 2.5] {
        let oracle = integrate_line(|x| (1.0 + (q - 1.0) * x * x).powf(1.0 / (1.0 - q)), 0.0, 1.0, 1e-12);
        let c = normalization_constant(q).unwrap();
        assert!((c - oracle).abs() < 1e-8 * oracle, "q={q}: {c} vs {oracle}");
    }
}

#[test]
fn density_matches_direct_formula() {
    for (q, m, b) in [(1.3, 0.01, 50.0), (1.5, -0.2, 2.0), (2.4, 0.0, 1.0)] {
        let g = QGaussian::new(q, m, b).unwrap();
        for x in [-3.0, -0.4, 0.0, 0.01, 0.7, 5.0] {
            let want = qgauss_pdf(x, q, m, b);
            assert!((g.pdf(x) - want).abs() <= 1e-12 * want.max(1e-300), "q={q} x={x}");
        }
    }
}

#[test]
fn density_mass_on_fifty_scale_units() {
    for q in [1.01, 1.2, 1.4, 1.6, 1.8, 2.2, 2.5] {
        let b = 30.0;
        let g = QGaussian::new(q, 0.05, b).unwrap();
        let w = 50.0 / b.sqrt();
        let mass = simpson(|x| g.pdf(x), 0.05 - w, 0.05 + w, 1e-10);
        // mass outside the window from the Student-t form
        let t = StudentsT::new(0.0, 1.0, (3.0 - q) / (q - 1.0)).unwrap();
        let exact = 1.0 - 2.0 * t.cdf(-((3.0 - q) * b).sqrt() * w);
        assert!((mass - exact).abs() < 1e-7, "q={q}: {mass} vs {exact}");
        if q <= 1.6 {
            assert!((0.999..=1.001).contains(&mass), "q={q}: {mass}");
        }
        if q == 1.4 {
            assert!((mass - 1.0).abs() < 1e-4);
        }
    }
}

#[test]
fn cdf_matches_student_t() {
    for q in [1.2, 1.5, 2.0, 2.6] {
        let (m, b) = (0.0, 1.0);
        let g = QGaussian::new(q, m, b).unwrap();
        let t = StudentsT::new(0.0, 1.0, (3.0 - q) / (q - 1.0)).unwrap();
        for x in [-20.0, -3.0, -1.0, -0.25, 0.0, 0.5, 1.0, 2.0, 7.5, 100.0] {
            let want = t.cdf(((3.0 - q) * b).sqrt() * (x - m));
            assert!((g.cdf(x) - want).abs() < 1e-8, "q={q} x={x}: {} vs {want}", g.cdf(x));
        }
    }
}

#[test]
fn tre_matches_integral_at_reference_point() {
    let r = QGaussian::new(1.5, 0.0, 50.0).unwrap();
    let p = QGaussian::new(1.5, 0.01, 30.0).unwrap();
    let closed = tre(&p, &r).unwrap();
    let oracle = tre_integral(1.5, 0.01, 30.0, 0.0, 50.0);
    assert!((closed - oracle).abs() < 1e-6 * oracle, "{closed} vs {oracle}");
}

#[test]
fn tre_matches_fine_grid_sum() {
    let (q, b_r, b_p, m_p) = (1.5, 50.0, 30.0, 0.01);
    let r = QGaussian::new(q, 0.0, b_r).unwrap();
    let p = QGaussian::new(q, m_p, b_p).unwrap();
    let half = 20.0 / b_p.sqrt();
    let bins = 10_000;
    let h = 2.0 * half / bins as f64;
    let centres: Vec<f64> = (0..bins).map(|i| -half + (i as f64 + 0.5) * h).collect();
    let normalize = |v: Vec<f64>| {
        let s: f64 = v.iter().sum();
        v.into_iter().map(|x| x / s).collect::<Vec<_>>()
    };
    let pp = normalize(centres.iter().map(|&x| p.pdf(x)).collect());
    let rr = normalize(centres.iter().map(|&x| r.pdf(x)).collect());
    let discrete = discrete_relative_entropy(&pp, &rr, q).unwrap();
    let closed = tre(&p, &r).unwrap();
    assert!((discrete - closed).abs() < 1e-3, "{discrete} vs {closed}");
}

#[test]
fn klre_matches_fine_grid_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let sr: f64 = rng.random_range(0.02..0.1);
        let sp: f64 = sr * rng.random_range(0.4..2.5);
        let mp: f64 = rng.random_range(-0.05..0.05);
        let lo = (-10.0 * sr).min(mp - 10.0 * sp);
        let hi = (10.0 * sr).max(mp + 10.0 * sp);
        let bins = 20_000;
        let h = (hi - lo) / bins as f64;
        let xs: Vec<f64> = (0..bins).map(|i| lo + (i as f64 + 0.5) * h).collect();
        let p: Vec<f64> = xs.iter().map(|&x| gauss_pdf(x, mp, sp) * h).collect();
        let r: Vec<f64> = xs.iter().map(|&x| gauss_pdf(x, 0.0, sr) * h).collect();
        let (ps, rs) = (p.iter().sum::<f64>(), r.iter().sum::<f64>());
        let p: Vec<f64> = p.iter().map(|v| v / ps).collect();
        let r: Vec<f64> = r.iter().map(|v| v / rs).collect();
        let discrete = discrete_relative_entropy(&p, &r, 1.0).unwrap();
        let closed = klre(
            &MomentSummary {
                mu: mp,
                sigma: sp,
                n_samples: 100,
            },
            &MomentSummary {
                mu: 0.0,
                sigma: sr,
                n_samples: 100,
            },
        )
        .unwrap();
        assert!((discrete - closed).abs() < 1e-4, "{discrete} vs {closed}");
    }
}

#[test]
fn tre_tends_to_klre() {
    let q = 1.0 + 1e-6;
    let sigma_r = 0.05;
    for ratio in [0.5, 0.8, 1.0, 1.5, 2.0] {
        for dm in [0.0, 0.01, 0.03, 0.05, 0.1] {
            let sigma_p = ratio * sigma_r;
            let b = |s: f64| 1.0 / (2.0 * s * s);
            let p = QGaussian::new(q, dm, b(sigma_p)).unwrap();
            let r = QGaussian::new(q, 0.0, b(sigma_r)).unwrap();
            let k = klre(
                &MomentSummary {
                    mu: dm,
                    sigma: sigma_p,
                    n_samples: 2,
                },
                &MomentSummary {
                    mu: 0.0,
                    sigma: sigma_r,
                    n_samples: 2,
                },
            )
            .unwrap();
            assert!((tre(&p, &r).unwrap() - k).abs() < 1e-4);
        }
    }
}

#[test]
fn klre_of_doubled_sigma() {
    let r = MomentSummary {
        mu: 0.01,
        sigma: 1.0,
        n_samples: 10,
    };
    let p = MomentSummary {
        mu: 0.01,
        sigma: 2.0,
        n_samples: 10,
    };
    assert!((klre(&p, &r).unwrap() - (1.5 - 2f64.ln())).abs() < 1e-15);
}

#[test]
fn digamma_matches_log_gamma_derivative() {
    let h = 1e-4;
    let mut x = 0.5;
    while x <= 20.0 {
        let oracle = (stirling_ln_gamma(x + h) - stirling_ln_gamma(x - h)) / (2.0 * h);
        assert!((digamma(x).unwrap() - oracle).abs() < 1e-6, "x={x}");
        x += 0.37;
    }
    let euler = 0.577_215_664_901_532_9;
    assert!((digamma(1.0).unwrap() + euler).abs() < 1e-10);
    assert!((digamma(2.0).unwrap() - (1.0 - euler)).abs() < 1e-10);
    assert!((digamma(0.5).unwrap() + euler + 2.0 * 2f64.ln()).abs() < 1e-10);
}

#[test]
fn linear_fit_matches_normal_equations() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let s: Vec<f64> = (0..10).map(|_| rng.random_range(-2.0..5.0)).collect();
        let e: Vec<f64> = s.iter().map(|x| 0.3 - 0.7 * x + rng.random_range(-1.0..1.0)).collect();
        let fit = linear_fit(&s, &e).unwrap();
        let (p0, p1) = normal_equations(&s, &e);
        assert!((fit.p0 - p0).abs() < 1e-9 && (fit.p1 - p1).abs() < 1e-9);
        assert!(fit.chi2 <= 1.0);
    }
}

#[test]
fn independent_series_have_small_beta() {
    for seed in 0..5 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m: Vec<f64> = (0..10_000).map(|_| rng.random_range(-0.05..0.05)).collect();
        let j: Vec<f64> = (0..10_000).map(|_| rng.random_range(-0.05..0.05)).collect();
        assert!(beta_from_returns(&j, &m).unwrap().beta.abs() < 0.05);
        let self_beta = beta_from_returns(&m, &m).unwrap();
        assert!((self_beta.beta - 1.0).abs() < 1e-12 && self_beta.alpha.abs() < 1e-15);
    }
}

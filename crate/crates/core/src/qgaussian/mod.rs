//! q-logarithm, the q-Gaussian density family and its maximum-likelihood fit.
//!
//! A q-Gaussian with entropic index `q ∈ (1, 3)`, location `M` and
//! inverse-squared scale `B` has density
//!
//! ```text
//! p(x) = √B / C_q · [1 + (q−1)·B·(x−M)²]^(1/(1−q))
//! ```
//!
//! which tends to a Gaussian with `B = 1/(2σ²)` as `q → 1⁺` and is a Cauchy
//! density at `q = 2`.

mod fit;

pub use fit::{fit_fixed_q, fit_full, mle_residuals, MleResiduals, MIN_FIT_SAMPLES, Q_SEARCH_BOUNDS};

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StudentT};

use crate::quadrature::{integrate, integrate_upper, Tolerance};
use crate::special::ln_gamma_half_ratio;
use crate::{Error, Result};

/// Below this `|q − 1|` the q-logarithm and the normalization switch to their
/// analytic `q → 1` limits.
pub const Q_LIMIT_EPS: f64 = 1e-6;

/// Absolute tolerance of the quadrature behind [`QGaussian::cdf`].
pub const CDF_TOLERANCE: f64 = 1e-9;

/// q-logarithm `(x^(1−q) − 1)/(1 − q)`; the natural log when `q` is within
/// [`Q_LIMIT_EPS`] of one.
pub fn ln_q(x: f64, q: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain {
            what: "ln_q argument",
            value: x,
        });
    }
    let lx = x.ln();
    let one_minus_q = 1.0 - q;
    if one_minus_q.abs() < Q_LIMIT_EPS {
        return Ok(lx);
    }
    Ok((one_minus_q * lx).exp_m1() / one_minus_q)
}

/// Shape part `C_q` of the normalization `Z_q = C_q/√B`.
pub fn normalization_constant(q: f64) -> Result<f64> {
    if !(q > 1.0 && q < 3.0) {
        return Err(Error::Domain { what: "q", value: q });
    }
    let qm1 = q - 1.0;
    if qm1 < Q_LIMIT_EPS {
        return Ok(PI.sqrt());
    }
    let phi = 1.0 / qm1;
    Ok(PI.sqrt() * ln_gamma_half_ratio(phi).exp() / qm1.sqrt())
}

/// A q-Gaussian density with `1 < q < 3` and `B > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QGaussian {
    q: f64,
    location: f64,
    precision: f64,
    norm: f64,
}

impl QGaussian {
    /// `precision` is the generalized inverse-squared scale `B`
    /// (`1/(2σ²)` in the Gaussian limit).
    pub fn new(q: f64, location: f64, precision: f64) -> Result<Self> {
        if !location.is_finite() {
            return Err(Error::Domain {
                what: "location",
                value: location,
            });
        }
        if !(precision > 0.0) || !precision.is_finite() {
            return Err(Error::Domain {
                what: "precision",
                value: precision,
            });
        }
        let norm = normalization_constant(q)?;
        Ok(QGaussian {
            q,
            location,
            precision,
            norm,
        })
    }

    #[inline]
    pub fn q(&self) -> f64 {
        self.q
    }

    #[inline]
    pub fn location(&self) -> f64 {
        self.location
    }

    #[inline]
    pub fn precision(&self) -> f64 {
        self.precision
    }

    /// Density exponent `1/(q−1)`.
    pub fn exponent(&self) -> f64 {
        1.0 / (self.q - 1.0)
    }

    /// `(q−1)·B`, the coefficient of the squared residual in the bracket.
    pub fn scaled_precision(&self) -> f64 {
        (self.q - 1.0) * self.precision
    }

    /// Student-t degrees of freedom `(3−q)/(q−1)` of the equivalent
    /// location-scale t distribution.
    pub fn student_dof(&self) -> f64 {
        (3.0 - self.q) / (self.q - 1.0)
    }

    /// Scale of the equivalent Student-t: `1/√((3−q)·B)`.
    pub fn student_scale(&self) -> f64 {
        1.0 / ((3.0 - self.q) * self.precision).sqrt()
    }

    /// Density of the standardized variable `u = √B·(x − M)`.
    fn standard_pdf(&self, u: f64) -> f64 {
        let qm1 = self.q - 1.0;
        (-(qm1 * u * u).ln_1p() / qm1).exp() / self.norm
    }

    pub fn pdf(&self, x: f64) -> f64 {
        let sb = self.precision.sqrt();
        sb * self.standard_pdf(sb * (x - self.location))
    }

    pub fn ln_pdf(&self, x: f64) -> f64 {
        let qm1 = self.q - 1.0;
        let d = x - self.location;
        0.5 * self.precision.ln() - self.norm.ln() - (qm1 * self.precision * d * d).ln_1p() / qm1
    }

    /// Cumulative distribution by adaptive quadrature of the density.
    pub fn cdf(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        if x == f64::INFINITY {
            return 1.0;
        }
        if x == f64::NEG_INFINITY {
            return 0.0;
        }
        let u = self.precision.sqrt() * (x - self.location);
        let tol = Tolerance::absolute(CDF_TOLERANCE);
        let g = |t: f64| self.standard_pdf(t);
        let au = u.abs();
        let upper_tail = if au <= 1.0 {
            0.5 - integrate(g, 0.0, au, tol).value
        } else {
            // t = |u|·eˢ turns the power-law tail into an exponential one
            integrate_upper(
                |s| {
                    let t = au * s.exp();
                    t * g(t)
                },
                0.0,
                tol,
            )
            .value
        };
        let p = if u >= 0.0 { 1.0 - upper_tail } else { upper_tail };
        p.clamp(0.0, 1.0)
    }

    /// `n` draws, deterministic in `seed`, via the Student-t representation
    /// `M + t/√((3−q)·B)` with `t ~ t_ν`, `ν = (3−q)/(q−1)`.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.sample_with(n, &mut rng)
    }

    pub fn sample_with<R: rand::Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<f64> {
        let t = StudentT::new(self.student_dof()).expect("dof positive for 1 < q < 3");
        let scale = self.student_scale();
        (0..n).map(|_| self.location + scale * t.sample(rng)).collect()
    }
}

/// A maximum-likelihood q-Gaussian fit with its diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QGaussianFit {
    pub model: QGaussian,
    pub n_samples: usize,
    /// False when the solver stopped on the `q` search boundary.
    pub converged: bool,
    pub iterations: usize,
}

impl QGaussianFit {
    pub fn q(&self) -> f64 {
        self.model.q
    }

    pub fn location(&self) -> f64 {
        self.model.location
    }

    pub fn precision(&self) -> f64 {
        self.model.precision
    }
}

/// Sample mean and standard deviation (denominator `n − 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSummary {
    pub mu: f64,
    pub sigma: f64,
    pub n_samples: usize,
}

pub fn moments(data: &[f64]) -> Result<MomentSummary> {
    let n = data.len();
    if n < 2 {
        return Err(Error::DegenerateData("fewer than two observations"));
    }
    if data.iter().any(|x| !x.is_finite()) {
        return Err(Error::DegenerateData("non-finite observation"));
    }
    let mu = data.iter().sum::<f64>() / n as f64;
    let ss: f64 = data.iter().map(|x| (x - mu) * (x - mu)).sum();
    let sigma = (ss / (n - 1) as f64).sqrt();
    if !(sigma > 0.0) {
        return Err(Error::DegenerateData("zero standard deviation"));
    }
    Ok(MomentSummary {
        mu,
        sigma,
        n_samples: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::E;

    #[test]
    fn ln_q_values() {
        assert_eq!(ln_q(1.0, 1.7).unwrap(), 0.0);
        assert!((ln_q(E, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((ln_q(2.0, 2.0).unwrap() - 0.5).abs() < 1e-15);
        assert!(ln_q(0.0, 1.5).is_err());
        assert!(ln_q(-2.0, 1.5).is_err());
    }

    #[test]
    fn normalization_special_cases() {
        assert!((normalization_constant(2.0).unwrap() - PI).abs() < 1e-13);
        assert!((normalization_constant(1.0 + 1e-9).unwrap() - PI.sqrt()).abs() < 1e-15);
        // just above the switch the gamma ratio path agrees with the limit
        assert!((normalization_constant(1.0 + 2e-6).unwrap() - PI.sqrt()).abs() < 1e-5);
        assert!(normalization_constant(1.0).is_err());
        assert!(normalization_constant(3.0).is_err());
    }

    #[test]
    fn pdf_mode_and_symmetry() {
        let g = QGaussian::new(1.6, 0.3, 12.0).unwrap();
        let mode = 12.0_f64.sqrt() / normalization_constant(1.6).unwrap();
        assert!((g.pdf(0.3) - mode).abs() < 1e-13);
        for d in [0.01, 0.2, 1.5, 40.0] {
            assert!((g.pdf(0.3 + d) - g.pdf(0.3 - d)).abs() < 1e-15);
            assert!(g.pdf(0.3 + d) < g.pdf(0.3));
            assert!((g.ln_pdf(0.3 + d) - g.pdf(0.3 + d).ln()).abs() < 1e-12);
        }
    }

    #[test]
    fn cdf_centre_and_limits() {
        let g = QGaussian::new(1.5, -0.02, 40.0).unwrap();
        assert!((g.cdf(-0.02) - 0.5).abs() < 1e-12);
        assert_eq!(g.cdf(f64::INFINITY), 1.0);
        assert!((g.cdf(1e6) - 1.0).abs() < 1e-9);
        assert!(g.cdf(-1e6) < 1e-9);
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(QGaussian::new(0.9, 0.0, 1.0).is_err());
        assert!(QGaussian::new(3.0, 0.0, 1.0).is_err());
        assert!(QGaussian::new(1.5, 0.0, 0.0).is_err());
        assert!(QGaussian::new(1.5, f64::NAN, 1.0).is_err());
    }

    #[test]
    fn moments_two_point_and_constant() {
        let m = moments(&[0.0, 2.0]).unwrap();
        assert_eq!(m.mu, 1.0);
        assert!((m.sigma - 2.0_f64.sqrt()).abs() < 1e-15);
        assert!(matches!(moments(&[1.0, 1.0, 1.0]), Err(Error::DegenerateData(_))));
        assert!(matches!(moments(&[1.0]), Err(Error::DegenerateData(_))));
    }

    #[test]
    fn sampling_is_seed_deterministic() {
        let g = QGaussian::new(1.5, 0.02, 40.0).unwrap();
        assert_eq!(g.sample(100, 9), g.sample(100, 9));
        assert_ne!(g.sample(100, 9), g.sample(100, 10));
    }
}

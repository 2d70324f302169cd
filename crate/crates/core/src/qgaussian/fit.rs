//! Maximum-likelihood estimation of (q, M, B).
//!
//! With `φ = 1/(q−1)`, `κ = (q−1)B` and centred residuals `Ωᵢ = xᵢ − M`, the
//! stationarity conditions of the log-likelihood are
//!
//! ```text
//! ψ(φ) − ψ(φ − ½) = (1/N) Σ ln(1 + κΩᵢ²)                   (exponent)
//! M = Σ wᵢ xᵢ,   wᵢ ∝ 1/(1 + κΩᵢ²),  Σ wᵢ = 1               (location)
//! 1/(2κ) = φ (1/N) Σ Ωᵢ²/(1 + κΩᵢ²)                         (scale)
//! ```
//!
//! For fixed `q` the location and scale equations are solved by alternating a
//! weighted-mean update of `M` with a safeguarded Newton solve for `κ`. The
//! full fit profiles `(M, κ)` out and root-finds the exponent equation in `q`
//! (its left-hand side minus right-hand side is the profile-likelihood
//! derivative up to a positive factor, so a sign change brackets the optimum).

use alloc::vec::Vec;

use num_traits::Float;

use super::{QGaussian, QGaussianFit};
use crate::special::digamma;
use crate::{Error, Result};

/// Smallest sample accepted by the fitting routines.
pub const MIN_FIT_SAMPLES: usize = 30;

/// Search interval for `q` in [`fit_full`]; a solution on either end is
/// reported with `converged = false`.
pub const Q_SEARCH_BOUNDS: (f64, f64) = (1.05, 2.5);

const MAX_ITERATIONS: usize = 500;
const STEP_TOL: f64 = 1e-13;
const ROOT_TOL: f64 = 1e-13;
const INITIAL_Q: f64 = 1.4;

/// Normalized residuals of the three likelihood equations at a model.
///
/// `exponent` is dimensionless as written; `location` is the gap between
/// `M` and the weighted mean in units of `1/√B`; `scale` is
/// `1 − 2κφ·mean(Ω²/(1+κΩ²))`. All three vanish at a solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MleResiduals {
    pub exponent: f64,
    pub location: f64,
    pub scale: f64,
}

impl MleResiduals {
    pub fn max_abs(&self) -> f64 {
        self.exponent.abs().max(self.location.abs()).max(self.scale.abs())
    }
}

pub fn mle_residuals(data: &[f64], model: &QGaussian) -> Result<MleResiduals> {
    let n = data.len() as f64;
    let phi = model.exponent();
    let kappa = model.scaled_precision();
    let m = model.location();
    let (mut log_sum, mut sw, mut swx, mut frac) = (0.0, 0.0, 0.0, 0.0);
    for &x in data {
        let r2 = (x - m) * (x - m);
        let kr2 = kappa * r2;
        log_sum += kr2.ln_1p();
        let w = 1.0 / (1.0 + kr2);
        sw += w;
        swx += w * (x - m);
        frac += kr2 * w;
    }
    let lhs = digamma(phi)? - digamma(phi - 0.5)?;
    Ok(MleResiduals {
        exponent: lhs - log_sum / n,
        location: (swx / sw) * model.precision().sqrt(),
        scale: 1.0 - 2.0 * phi * frac / n,
    })
}

fn validate(data: &[f64]) -> Result<()> {
    if data.len() < MIN_FIT_SAMPLES {
        return Err(Error::InsufficientData {
            needed: MIN_FIT_SAMPLES,
            got: data.len(),
        });
    }
    if data.iter().any(|x| !x.is_finite()) {
        return Err(Error::DegenerateData("non-finite observation"));
    }
    let first = data[0];
    if data.iter().all(|&x| x == first) {
        return Err(Error::DegenerateData("constant data"));
    }
    Ok(())
}

fn median(data: &[f64]) -> f64 {
    let mut v: Vec<f64> = data.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn variance(data: &[f64]) -> f64 {
    let n = data.len() as f64;
    let mu = data.iter().sum::<f64>() / n;
    data.iter().map(|x| (x - mu) * (x - mu)).sum::<f64>() / (n - 1.0)
}

/// Location and inverse-squared scale at fixed `q`.
#[derive(Debug, Clone, Copy)]
struct LocScale {
    location: f64,
    precision: f64,
}

impl LocScale {
    fn initial(data: &[f64]) -> Self {
        LocScale {
            location: median(data),
            precision: 0.5 / variance(data),
        }
    }
}

/// `mean(κΩ²/(1+κΩ²)) − τ` and its derivative in `ln κ`.
fn scale_equation(data: &[f64], m: f64, kappa: f64, tau: f64) -> (f64, f64) {
    let n = data.len() as f64;
    let (mut h, mut dh) = (0.0, 0.0);
    for &x in data {
        let kr2 = kappa * (x - m) * (x - m);
        let w = 1.0 / (1.0 + kr2);
        h += kr2 * w;
        dh += kr2 * w * w;
    }
    (h / n - tau, dh / n)
}

/// Solves the scale equation for `κ` with `M` held fixed.
fn solve_kappa(data: &[f64], m: f64, tau: f64, kappa0: f64) -> Result<f64> {
    let nonzero = data.iter().filter(|&&x| x != m).count() as f64 / data.len() as f64;
    if nonzero <= tau {
        return Err(Error::DegenerateData("too many observations at the location"));
    }
    let mut s = kappa0.ln();
    let (mut h, mut dh) = scale_equation(data, m, s.exp(), tau);
    // bracket [lo, hi] in ln κ with h(lo) < 0 < h(hi)
    let (mut lo, mut hi);
    if h < 0.0 {
        lo = s;
        hi = s + 1.0;
        let mut step = 1.0;
        while scale_equation(data, m, hi.exp(), tau).0 < 0.0 {
            lo = hi;
            step *= 2.0;
            hi += step;
            if hi > 700.0 {
                return Err(Error::DegenerateData("scale equation has no root"));
            }
        }
    } else {
        hi = s;
        lo = s - 1.0;
        let mut step = 1.0;
        while scale_equation(data, m, lo.exp(), tau).0 > 0.0 {
            hi = lo;
            step *= 2.0;
            lo -= step;
            if lo < -700.0 {
                return Err(Error::DegenerateData("scale equation has no root"));
            }
        }
    }
    if !(s > lo && s < hi) {
        s = 0.5 * (lo + hi);
        (h, dh) = scale_equation(data, m, s.exp(), tau);
    }
    for _ in 0..200 {
        if h == 0.0 {
            break;
        }
        if h < 0.0 {
            lo = s;
        } else {
            hi = s;
        }
        let mut next = if dh > 0.0 { s - h / dh } else { f64::NAN };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let step = (next - s).abs();
        s = next;
        (h, dh) = scale_equation(data, m, s.exp(), tau);
        if step < 1e-15 || hi - lo < 1e-15 {
            break;
        }
    }
    Ok(s.exp())
}

/// Alternates location and scale updates at fixed `q` until both settle.
fn solve_loc_scale(data: &[f64], q: f64, start: LocScale) -> Result<(LocScale, usize)> {
    let qm1 = q - 1.0;
    let tau = 0.5 * qm1;
    let mut m = start.location;
    let mut kappa = qm1 * start.precision;
    for it in 1..=MAX_ITERATIONS {
        let (mut sw, mut swx) = (0.0, 0.0);
        for &x in data {
            let w = 1.0 / (1.0 + kappa * (x - m) * (x - m));
            sw += w;
            swx += w * x;
        }
        let m_next = swx / sw;
        let kappa_next = solve_kappa(data, m_next, tau, kappa)?;
        let dm = (m_next - m).abs() * kappa_next.sqrt();
        let dk = (kappa_next / kappa).ln().abs();
        m = m_next;
        kappa = kappa_next;
        if dm < STEP_TOL && dk < STEP_TOL {
            return Ok((
                LocScale {
                    location: m,
                    precision: kappa / qm1,
                },
                it,
            ));
        }
    }
    Err(Error::ConvergenceFailure {
        iterations: MAX_ITERATIONS,
    })
}

/// Fits `M` and `B` with `q` held fixed.
pub fn fit_fixed_q(data: &[f64], q: f64) -> Result<QGaussianFit> {
    if !(q > 1.0 && q < 3.0) {
        return Err(Error::Domain { what: "q", value: q });
    }
    validate(data)?;
    let (ls, iterations) = solve_loc_scale(data, q, LocScale::initial(data))?;
    Ok(QGaussianFit {
        model: QGaussian::new(q, ls.location, ls.precision)?,
        n_samples: data.len(),
        converged: true,
        iterations,
    })
}

/// Profiled exponent-equation residual at `q`, warm-started from `start`.
fn profile(data: &[f64], q: f64, start: LocScale) -> Result<(f64, LocScale)> {
    let (ls, _) = solve_loc_scale(data, q, start)?;
    let phi = 1.0 / (q - 1.0);
    let kappa = (q - 1.0) * ls.precision;
    let mean_log = data
        .iter()
        .map(|&x| (kappa * (x - ls.location) * (x - ls.location)).ln_1p())
        .sum::<f64>()
        / data.len() as f64;
    Ok((digamma(phi)? - digamma(phi - 0.5)? - mean_log, ls))
}

/// Joint fit of `q`, `M` and `B`.
///
/// If the likelihood keeps increasing past either end of
/// [`Q_SEARCH_BOUNDS`] the fit is returned at that end with
/// `converged = false`.
pub fn fit_full(data: &[f64]) -> Result<QGaussianFit> {
    validate(data)?;
    let (q_min, q_max) = Q_SEARCH_BOUNDS;
    let finish = |q: f64, ls: LocScale, converged: bool, iterations: usize| {
        Ok(QGaussianFit {
            model: QGaussian::new(q, ls.location, ls.precision)?,
            n_samples: data.len(),
            converged,
            iterations,
        })
    };

    // residual > 0  <=>  likelihood decreasing in q
    let (r0, ls0) = profile(data, INITIAL_Q, LocScale::initial(data))?;
    let mut evaluations = 1;
    if r0 == 0.0 {
        return finish(INITIAL_Q, ls0, true, evaluations);
    }
    let (edge_q, toward_edge) = if r0 > 0.0 { (q_min, 1.0) } else { (q_max, -1.0) };
    let (r_edge, ls_edge) = profile(data, edge_q, ls0)?;
    evaluations += 1;
    if r_edge * toward_edge >= 0.0 {
        log::debug!("q-Gaussian fit stopped on search boundary q = {edge_q}");
        return finish(edge_q, ls_edge, false, evaluations);
    }

    // Illinois false position on q; `a` and `b` always bracket the root.
    let (mut a, mut fa, mut ls_a) = (INITIAL_Q, r0, ls0);
    let (mut b, mut fb, mut ls_b) = (edge_q, r_edge, ls_edge);
    while evaluations < MAX_ITERATIONS {
        let mut c = b - fb * (b - a) / (fb - fa);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        if !(c > lo && c < hi) {
            c = 0.5 * (a + b);
        }
        let warm = if (c - a).abs() < (c - b).abs() { ls_a } else { ls_b };
        let (fc, ls_c) = profile(data, c, warm)?;
        evaluations += 1;
        if fc.abs() < ROOT_TOL {
            return finish(c, ls_c, true, evaluations);
        }
        if fc * fb < 0.0 {
            (a, fa, ls_a) = (b, fb, ls_b);
        } else {
            fa *= 0.5;
        }
        (b, fb, ls_b) = (c, fc, ls_c);
        if (b - a).abs() < STEP_TOL {
            return finish(b, ls_b, true, evaluations);
        }
    }
    Err(Error::ConvergenceFailure {
        iterations: evaluations,
    })
}

//! Reference implementations used as oracles. They share no code with the
//! crate under test.
#![allow(dead_code)]

use std::f64::consts::PI;

use statrs::function::gamma::ln_gamma;

/// q-Gaussian density written out directly from its definition.
pub fn qgauss_pdf(x: f64, q: f64, m: f64, b: f64) -> f64 {
    let phi = 1.0 / (q - 1.0);
    let ln_c = 0.5 * PI.ln() + ln_gamma(phi - 0.5) - 0.5 * (q - 1.0).ln() - ln_gamma(phi);
    let base = 1.0 + (q - 1.0) * b * (x - m) * (x - m);
    (0.5 * b.ln() - ln_c).exp() * base.powf(1.0 / (1.0 - q))
}

pub fn gauss_pdf(x: f64, mu: f64, sigma: f64) -> f64 {
    let z = (x - mu) / sigma;
    (-0.5 * z * z).exp() / (sigma * (2.0 * PI).sqrt())
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    m: f64,
    fm: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> f64 {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * eps {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * eps, depth - 1)
        + simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * eps, depth - 1)
}

/// Adaptive Simpson quadrature on `[a, b]`.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, eps: f64) -> f64 {
    // split into panels first so narrow peaks are not missed
    let panels = 64;
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|i| {
            let (lo, hi) = (a + i as f64 * h, a + (i + 1) as f64 * h);
            let mid = 0.5 * (lo + hi);
            let (flo, fhi, fmid) = (f(lo), f(hi), f(mid));
            let whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
            simpson_step(&f, lo, flo, hi, fhi, mid, fmid, whole, eps / panels as f64, 40)
        })
        .sum()
}

/// `∫ f` over the real line through `x = c + s·sinh w`, which turns power-law
/// tails into exponential ones.
pub fn integrate_line<F: Fn(f64) -> f64>(f: F, c: f64, s: f64, eps: f64) -> f64 {
    let w_max = 200.0;
    simpson(
        |w: f64| {
            let v = f(c + s * w.sinh()) * s * w.cosh();
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        -w_max,
        w_max,
        eps,
    )
}

/// Tsallis relative entropy `∫ p·[(p/r)^(q−1) − 1]/(q − 1)` of two q-Gaussians
/// by direct integration.
pub fn tre_integral(q: f64, m_p: f64, b_p: f64, m_r: f64, b_r: f64) -> f64 {
    let scale = 1.0 / b_p.sqrt().min(b_r.sqrt());
    integrate_line(
        |x| {
            let p = qgauss_pdf(x, q, m_p, b_p);
            let r = qgauss_pdf(x, q, m_r, b_r);
            if p == 0.0 {
                return 0.0;
            }
            p * ((p / r).powf(q - 1.0) - 1.0) / (q - 1.0)
        },
        0.5 * (m_p + m_r),
        scale,
        1e-13,
    )
}

/// `ln Γ(x)` from the Stirling series after shifting the argument above 15.
pub fn stirling_ln_gamma(x: f64) -> f64 {
    let mut shift = 0.0;
    let mut z = x;
    while z < 15.0 {
        shift -= z.ln();
        z += 1.0;
    }
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
    shift + (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + series
}

/// Least-squares line `(p0, p1)` from the raw normal equations.
pub fn normal_equations(s: &[f64], e: &[f64]) -> (f64, f64) {
    let n = s.len() as f64;
    let sx: f64 = s.iter().sum();
    let sy: f64 = e.iter().sum();
    let sxx: f64 = s.iter().map(|v| v * v).sum();
    let sxy: f64 = s.iter().zip(e).map(|(a, b)| a * b).sum();
    let det = n * sxx - sx * sx;
    ((sy * sxx - sx * sxy) / det, (n * sxy - sx * sy) / det)
}

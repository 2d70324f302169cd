use crate::{Error, Result};

/// Least-squares line through a risk-return profile.
///
/// `chi2` is the goodness statistic `1 − Σ(eᵢ − p₀ − p₁sᵢ)²/Σ(eᵢ − ē)²`, i.e.
/// the coefficient of determination of the regression (1 for a perfect
/// line). It is not a χ²-distributed statistic despite the name.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub p0: f64,
    pub p1: f64,
    pub chi2: f64,
    pub n_points: usize,
}

impl LinearFit {
    pub fn predict(&self, s: f64) -> f64 {
        self.p0 + self.p1 * s
    }
}

pub fn linear_fit(s: &[f64], e: &[f64]) -> Result<LinearFit> {
    let n = s.len();
    if n != e.len() {
        return Err(Error::DegenerateProfile("risk and return lengths differ"));
    }
    if n < 3 {
        return Err(Error::DegenerateProfile("fewer than three points"));
    }
    let nf = n as f64;
    let s_bar = s.iter().sum::<f64>() / nf;
    let e_bar = e.iter().sum::<f64>() / nf;
    let (mut sss, mut sse, mut see) = (0.0, 0.0, 0.0);
    for (&si, &ei) in s.iter().zip(e) {
        sss += (si - s_bar) * (si - s_bar);
        sse += (si - s_bar) * (ei - e_bar);
        see += (ei - e_bar) * (ei - e_bar);
    }
    if !(see > 0.0) {
        return Err(Error::DegenerateProfile("constant excess returns"));
    }
    if !(sss > 0.0) {
        return Err(Error::DegenerateProfile("constant risk values"));
    }
    let p1 = sse / sss;
    let p0 = e_bar - p1 * s_bar;
    let ssr: f64 = s
        .iter()
        .zip(e)
        .map(|(&si, &ei)| {
            let r = ei - p0 - p1 * si;
            r * r
        })
        .sum();
    Ok(LinearFit {
        p0,
        p1,
        chi2: 1.0 - ssr / see,
        n_points: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let s = [0.1, 0.5, 0.9, 1.3];
        let e: [f64; 4] = core::array::from_fn(|i| 2.0 + 3.0 * s[i]);
        let f = linear_fit(&s, &e).unwrap();
        assert!((f.p0 - 2.0).abs() < 1e-12 && (f.p1 - 3.0).abs() < 1e-12);
        assert!((f.chi2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn uncorrelated_profile() {
        // zero sample covariance between s and e
        let s = [-1.0, 0.0, 1.0];
        let e = [1.0, -2.0, 1.0];
        let f = linear_fit(&s, &e).unwrap();
        assert_eq!(f.p1, 0.0);
        assert_eq!(f.chi2, 0.0);
        assert_eq!(f.p0, 0.0);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(matches!(
            linear_fit(&[1.0, 2.0], &[1.0, 3.0]),
            Err(Error::DegenerateProfile(_))
        ));
        assert!(matches!(
            linear_fit(&[1.0, 2.0, 3.0], &[0.5; 3]),
            Err(Error::DegenerateProfile(_))
        ));
        assert!(matches!(
            linear_fit(&[1.0; 3], &[0.5, 1.0, 2.0]),
            Err(Error::DegenerateProfile(_))
        ));
    }
}

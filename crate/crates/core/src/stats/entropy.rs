//! Entropies of discrete probability vectors.
//!
//! These are histogram-style estimators; they back the closed forms in tests
//! rather than being used on return data directly.

use num_traits::Float;

use crate::qgaussian::Q_LIMIT_EPS;
use crate::{Error, Result};

/// Allowed deviation of `Σpᵢ` from one.
pub const NORMALIZATION_TOL: f64 = 1e-9;

fn check_normalized(p: &[f64]) -> Result<()> {
    let sum: f64 = p.iter().sum();
    if p.iter().any(|&x| !(x >= 0.0)) || (sum - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized { sum });
    }
    Ok(())
}

/// `Σ pᵢ ln(1/pᵢ)` with `0·ln(1/0) = 0`.
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    check_normalized(p)?;
    Ok(p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.ln()).sum())
}

/// `Σ pᵢ ln_q(1/pᵢ) = (1 − Σ pᵢ^q)/(q − 1)`; Shannon entropy near `q = 1`.
pub fn tsallis_entropy(p: &[f64], q: f64) -> Result<f64> {
    if (q - 1.0).abs() < Q_LIMIT_EPS {
        return shannon_entropy(p);
    }
    check_normalized(p)?;
    let qm1 = q - 1.0;
    // pᵢ·ln_q(1/pᵢ) = pᵢ·(pᵢ^(q−1) − 1)/(1 − q)
    Ok(p.iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * (qm1 * x.ln()).exp_m1() / qm1)
        .sum())
}

/// `−Σ pᵢ ln_q(rᵢ/pᵢ) = (Σ pᵢ (pᵢ/rᵢ)^(q−1) − 1)/(q − 1)`; the
/// Kullback-Leibler divergence `Σ pᵢ ln(pᵢ/rᵢ)` near `q = 1`.
pub fn discrete_relative_entropy(p: &[f64], r: &[f64], q: f64) -> Result<f64> {
    if p.len() != r.len() {
        return Err(Error::InvalidInput(alloc::format!(
            "length mismatch {} vs {}",
            p.len(),
            r.len()
        )));
    }
    check_normalized(p)?;
    check_normalized(r)?;
    if let Some(index) = p.iter().zip(r).position(|(&pi, &ri)| pi > 0.0 && ri == 0.0) {
        return Err(Error::SupportViolation { index });
    }
    let terms = p
        .iter()
        .zip(r)
        .filter(|(&pi, _)| pi > 0.0)
        .map(|(&pi, &ri)| (pi, (pi / ri).ln()));
    if (q - 1.0).abs() < Q_LIMIT_EPS {
        return Ok(terms.map(|(pi, l)| pi * l).sum());
    }
    let qm1 = q - 1.0;
    Ok(terms.map(|(pi, l)| pi * (qm1 * l).exp_m1()).sum::<f64>() / qm1)
}

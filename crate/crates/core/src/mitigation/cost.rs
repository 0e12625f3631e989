//! Sampling-overhead accounting.

use crate::error::{Error, Result};

/// `C = (∏ p)^{-2}`.
pub fn sampling_cost(probs: &[f64]) -> Result<f64> {
    if let Some(&bad) = probs.iter().find(|&&p| !(p > 0.0 && p <= 1.0 + 1e-12)) {
        return Err(Error::InvalidParameter(format!("probability {bad} outside (0, 1]")));
    }
    let prod: f64 = probs.iter().product();
    Ok(1.0 / (prod * prod))
}

/// Overhead of SE at preparation and before measurement together,
/// `(p_c ∏p)^{-2}`.
pub fn combined_cost(p_c: f64, probs: &[f64]) -> Result<f64> {
    Ok(sampling_cost(&[p_c])? * sampling_cost(probs)?)
}

/// Shots for standard error `eps` when the per-shot variance is `cost`.
pub fn shots_for_accuracy(cost: f64, eps: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("accuracy {eps} must be positive")));
    }
    Ok(cost / (eps * eps))
}

/// Shot counts of SE versus post-selected verification at accuracy `eps`.
///
/// Verification keeps a fraction `∏p` of its shots, so it needs
/// `(∏p)^{-1} ε^{-2}`; SE needs `(∏p)^{-2} ε^{-2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerificationComparison {
    pub se_shots: f64,
    pub verification_shots: f64,
    /// `se_shots / verification_shots = (∏p)^{-1}`.
    pub ratio: f64,
}

pub fn verification_comparison(probs: &[f64], eps: f64) -> Result<VerificationComparison> {
    let c = sampling_cost(probs)?;
    let se_shots = shots_for_accuracy(c, eps)?;
    let verification_shots = shots_for_accuracy(c.sqrt(), eps)?;
    Ok(VerificationComparison {
        se_shots,
        verification_shots,
        ratio: se_shots / verification_shots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::overhead_bound;

    #[test]
    fn simple_costs() {
        assert_eq!(sampling_cost(&[1.0, 1.0]).unwrap(), 1.0);
        assert_eq!(sampling_cost(&[0.5]).unwrap(), 4.0);
        assert!(sampling_cost(&[0.0]).is_err());
        assert!(sampling_cost(&[1.5]).is_err());
        assert_eq!(sampling_cost(&[]).unwrap(), 1.0);
    }

    #[test]
    fn exponential_regime_matches_bound() {
        // p = e^{-n̄γt} per mode with n̄γt·N = 2.
        let c = sampling_cost(&[(-1.0f64).exp(), (-1.0f64).exp()]).unwrap();
        assert!((c - 54.598).abs() < 1e-3);
        assert!((c - overhead_bound(10.0, 0.1, 2)).abs() < 1e-9);
    }

    #[test]
    fn combined_and_verification() {
        assert!((combined_cost(0.5, &[0.5]).unwrap() - 16.0).abs() < 1e-12);
        let v = verification_comparison(&[0.5], 0.01).unwrap();
        assert!((v.se_shots - 40_000.0).abs() < 1e-6);
        assert!((v.verification_shots - 20_000.0).abs() < 1e-6);
        assert!((v.ratio - 2.0).abs() < 1e-12);
        assert!(shots_for_accuracy(1.0, 0.0).is_err());
    }
}

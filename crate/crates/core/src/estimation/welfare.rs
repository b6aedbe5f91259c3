//! Certainty-equivalent consumption cost of aggregate fluctuations.

use crate::error::{Error, Result};

/// Risk aversion and detrended-consumption dispersion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WelfareSpec {
    /// Relative risk aversion (> 0).
    pub gamma: f64,
    /// Standard deviation of log detrended consumption (>= 0).
    pub sigma_x: f64,
}

impl WelfareSpec {
    pub fn new(gamma: f64, sigma_x: f64) -> Result<Self> {
        if !gamma.is_finite() || gamma <= 0.0 {
            return Err(Error::Domain(format!(
                "risk aversion must be finite and > 0, got {gamma}"
            )));
        }
        if !sigma_x.is_finite() || sigma_x < 0.0 {
            return Err(Error::Domain(format!(
                "consumption dispersion must be finite and >= 0, got {sigma_x}"
            )));
        }
        Ok(Self { gamma, sigma_x })
    }
}

/// Second-order certainty equivalent `gamma * sigma_x^2 / 2`, as a fraction
/// of steady consumption.
pub fn lucas_welfare_cost(ws: &WelfareSpec) -> f64 {
    0.5 * ws.gamma * ws.sigma_x * ws.sigma_x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn benchmark_point_value() {
        let ws = WelfareSpec::new(1.0, 0.013).unwrap();
        assert!((lucas_welfare_cost(&ws) - 8.45e-5).abs() < 1e-15);
    }

    #[test]
    fn cost_is_quadratic_in_dispersion() {
        // dyadic sigma makes the factor-of-nine relation exact in floats
        let base = WelfareSpec::new(2.0, 0.015625).unwrap();
        let tripled = WelfareSpec::new(2.0, 3.0 * 0.015625).unwrap();
        assert_eq!(lucas_welfare_cost(&tripled), 9.0 * lucas_welfare_cost(&base));
    }

    #[test]
    fn cost_is_linear_in_risk_aversion() {
        let a = WelfareSpec::new(1.0, 0.02).unwrap();
        let b = WelfareSpec::new(4.0, 0.02).unwrap();
        assert_eq!(lucas_welfare_cost(&b), 4.0 * lucas_welfare_cost(&a));
    }

    #[test]
    fn no_fluctuations_no_cost() {
        let ws = WelfareSpec::new(5.0, 0.0).unwrap();
        assert_eq!(lucas_welfare_cost(&ws), 0.0);
    }
}

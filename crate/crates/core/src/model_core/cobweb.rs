//! Cobweb market dynamics in excess-supply coordinates.
//!
//! Demand prices excess supply down (`p_t - p* = f_demand * e_t`,
//! `f_demand < 0`) and supply answers price with a one-period lag
//! (`e_{t+1} = b_supply * (p_t - p*)`), so excess supply follows the
//! reduced recursion `e_{t+1} = (b_supply * f_demand) * e_t`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CobwebParams {
    /// Price response to excess supply (< 0).
    pub f_demand: f64,
    /// Supply response to price (> 0).
    pub b_supply: f64,
    /// Initial excess supply.
    pub e0: f64,
    /// Equilibrium price.
    pub p_star: f64,
}

impl CobwebParams {
    pub fn new(f_demand: f64, b_supply: f64, e0: f64, p_star: f64) -> Result<Self> {
        if !f_demand.is_finite() || f_demand >= 0.0 {
            return Err(Error::Domain(format!(
                "demand price response must be finite and < 0, got {f_demand}"
            )));
        }
        if !b_supply.is_finite() || b_supply <= 0.0 {
            return Err(Error::Domain(format!(
                "supply response must be finite and > 0, got {b_supply}"
            )));
        }
        if !e0.is_finite() || !p_star.is_finite() {
            return Err(Error::Domain("initial excess supply and equilibrium price must be finite".into()));
        }
        Ok(Self {
            f_demand,
            b_supply,
            e0,
            p_star,
        })
    }

    /// Loop coefficient `b_supply * f_demand`.
    pub fn bf(&self) -> f64 {
        self.b_supply * self.f_demand
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CobwebRegime {
    /// `bf = 0`: a shock clears in a single period.
    OneStepAdjustment,
    /// `-1 < bf < 0`: alternating, shrinking deviations.
    DampedOscillation,
    /// `bf = -1`: deviations alternate forever at constant amplitude.
    PerpetualCycle,
    /// `bf < -1`: deviations alternate and grow.
    Divergent,
}

impl std::fmt::Display for CobwebRegime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CobwebRegime::OneStepAdjustment => "one_step_adjustment",
            CobwebRegime::DampedOscillation => "damped_oscillation",
            CobwebRegime::PerpetualCycle => "perpetual_cycle",
            CobwebRegime::Divergent => "divergent",
        };
        f.write_str(s)
    }
}

/// Regime of the reduced recursion, exact at the boundaries `bf = 0` and
/// `bf = -1`.
pub fn cobweb_regime(bf: f64) -> CobwebRegime {
    if bf == 0.0 {
        CobwebRegime::OneStepAdjustment
    } else if bf == -1.0 {
        CobwebRegime::PerpetualCycle
    } else if bf > -1.0 {
        CobwebRegime::DampedOscillation
    } else {
        CobwebRegime::Divergent
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CobwebRun {
    pub excess_supply: Vec<f64>,
    pub price: Vec<f64>,
    pub regime: CobwebRegime,
}

/// Iterate `e_{t+1} = bf * e_t` for `horizon` steps, recovering the price
/// path `p_t = p_star + f_demand * e_t`.
pub fn cobweb_simulate(cw: &CobwebParams, horizon: usize) -> Result<CobwebRun> {
    if horizon == 0 {
        return Err(Error::EmptyHorizon);
    }
    let bf = cw.bf();
    let n = horizon + 1;
    let mut excess_supply = Vec::with_capacity(n);
    let mut price = Vec::with_capacity(n);
    let mut e = cw.e0;
    for _ in 0..n {
        excess_supply.push(e);
        price.push(cw.p_star + cw.f_demand * e);
        e *= bf;
    }
    Ok(CobwebRun {
        excess_supply,
        price,
        regime: cobweb_regime(bf),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn damped_regime_halves_and_alternates() {
        let cw = CobwebParams::new(-0.5, 1.0, 1.0, 10.0).unwrap();
        let run = cobweb_simulate(&cw, 6).unwrap();
        assert_eq!(run.regime, CobwebRegime::DampedOscillation);
        for (t, e) in run.excess_supply.iter().enumerate() {
            assert_relative_eq!(*e, (-0.5f64).powi(t as i32), max_relative = 1e-12);
        }
        // price is affine in excess supply
        for (e, p) in run.excess_supply.iter().zip(&run.price) {
            assert_relative_eq!(*p, 10.0 - 0.5 * e, max_relative = 1e-12);
        }
    }

    #[test]
    fn unit_loop_cycles_forever() {
        let cw = CobwebParams::new(-0.5, 2.0, 1.0, 0.0).unwrap();
        assert_eq!(cw.bf(), -1.0);
        let run = cobweb_simulate(&cw, 5).unwrap();
        assert_eq!(run.regime, CobwebRegime::PerpetualCycle);
        assert_eq!(run.excess_supply, vec![1.0, -1.0, 1.0, -1.0, 1.0, -1.0]);
    }

    #[test]
    fn strong_loop_diverges() {
        let cw = CobwebParams::new(-1.5, 1.0, 1.0, 0.0).unwrap();
        let run = cobweb_simulate(&cw, 4).unwrap();
        assert_eq!(run.regime, CobwebRegime::Divergent);
        for t in 1..run.excess_supply.len() {
            assert_relative_eq!(
                run.excess_supply[t].abs(),
                1.5 * run.excess_supply[t - 1].abs(),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn regime_boundaries_are_exact_and_ordered() {
        assert_eq!(cobweb_regime(0.0), CobwebRegime::OneStepAdjustment);
        assert_eq!(cobweb_regime(-0.999), CobwebRegime::DampedOscillation);
        assert_eq!(cobweb_regime(-1.0), CobwebRegime::PerpetualCycle);
        assert_eq!(cobweb_regime(-1.0 - 1e-15), CobwebRegime::Divergent);
        // monotone in |bf|: regimes appear in order as the loop strengthens
        let mut seen = Vec::new();
        for bf in [0.0, -0.2, -0.7, -1.0, -1.2, -3.0] {
            let r = cobweb_regime(bf);
            if seen.last() != Some(&r) {
                seen.push(r);
            }
        }
        assert_eq!(
            seen,
            vec![
                CobwebRegime::OneStepAdjustment,
                CobwebRegime::DampedOscillation,
                CobwebRegime::PerpetualCycle,
                CobwebRegime::Divergent
            ]
        );
    }

    #[test]
    fn wrong_sign_parameters_rejected() {
        assert!(CobwebParams::new(0.5, 1.0, 1.0, 0.0).is_err());
        assert!(CobwebParams::new(-0.5, -1.0, 1.0, 0.0).is_err());
    }
}

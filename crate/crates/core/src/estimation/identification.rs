//! Identification experiments on simulated closed loops: recovering the
//! transmission parameters under reverse causality, and the wrong-signed
//! univariate estimate produced by omitting the state from the regression.

use crate::error::{Error, Result};
use crate::estimation::{iv_2sls, ols, RegressionResult};
use crate::model_core::{Trajectory, Transmission};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimationMethod {
    /// Least squares of `pi_{t+1}` on `(pi_t, i_t)`.
    Ols,
    /// Two-stage least squares instrumenting `i_t` with the exogenous policy
    /// shock `eta_t`.
    Iv,
}

/// Estimate `(a, b)` from a simulated trajectory by regressing `pi_{t+1}` on
/// `(pi_t, i_t)`.
///
/// With an exact proportional rule and no policy shocks the design is
/// collinear and the regression fails: the feedback makes the instrument a
/// deterministic function of the state, so nothing identifies `b`. Any
/// exogenous instrument variation restores identification.
pub fn estimate_transmission(
    traj: &Trajectory,
    method: EstimationMethod,
) -> Result<RegressionResult> {
    let n = traj.len();
    if n < 3 {
        return Err(Error::InsufficientData { needed: 3, got: n });
    }
    let y = &traj.pi[1..];
    let x_pi = &traj.pi[..n - 1];
    let x_i = &traj.i[..n - 1];
    let names = ["a_hat", "b_hat"];
    match method {
        EstimationMethod::Ols => ols(y, &[x_pi, x_i], &names),
        EstimationMethod::Iv => {
            let z_eta = &traj.eta[..n - 1];
            iv_2sls(y, &[x_pi, x_i], &[x_pi, z_eta], &names)
        }
    }
}

/// Report of the omitted-variable experiment on a damping closed loop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PricePuzzle {
    /// Slope of the naive univariate regression of `pi_{t+1}` on `i_t`.
    pub naive_b_hat: f64,
    pub naive_stderr: f64,
    /// Wrong-signed estimate: `naive_b_hat > 0 > b`.
    pub sign_flip: bool,
    /// Instrument coefficient from the correctly specified regression on
    /// `(pi_t, i_t)`.
    pub corrected_b_hat: f64,
    /// Gain an advisor trusting the naive estimate would pick to halve the
    /// observed persistence.
    pub advised_gain: f64,
    /// Persistence the advisor expects: `a + naive_b_hat * advised_gain`.
    pub perceived_lambda: f64,
    /// Persistence the advice actually delivers: `a + b * advised_gain`.
    pub true_lambda: f64,
    /// Whether the mis-advice ordering `0 < perceived < a < true` holds.
    pub mis_advice_ordering: bool,
}

/// Contrast the naive univariate estimate of the instrument's effect with
/// the correctly specified one, and evaluate the advice the naive estimate
/// would generate against the true transmission.
pub fn price_puzzle_demo(traj: &Trajectory, tr: &Transmission) -> Result<PricePuzzle> {
    let n = traj.len();
    if n < 3 {
        return Err(Error::InsufficientData { needed: 3, got: n });
    }
    let y = &traj.pi[1..];
    let x_pi = &traj.pi[..n - 1];
    let x_i = &traj.i[..n - 1];

    let naive = ols(y, &[x_i], &["b_naive"])?;
    let naive_b_hat = naive.coefficients[0];
    let corrected = ols(y, &[x_pi, x_i], &["a_hat", "b_hat"])?;
    let corrected_b_hat = corrected.coefficients[1];

    if naive_b_hat == 0.0 {
        return Err(Error::Domain(
            "naive slope is exactly zero; no advice can be derived from it".into(),
        ));
    }
    // Advisor trusts b_hat and places the pole at half the open-loop
    // persistence.
    let advised_gain = (0.5 * tr.a - tr.a) / naive_b_hat;
    let perceived_lambda = tr.a + naive_b_hat * advised_gain;
    let true_lambda = tr.a + tr.b * advised_gain;

    Ok(PricePuzzle {
        naive_b_hat,
        naive_stderr: naive.stderrs[0],
        sign_flip: naive_b_hat > 0.0 && tr.b < 0.0,
        corrected_b_hat,
        advised_gain,
        perceived_lambda,
        true_lambda,
        mis_advice_ordering: 0.0 < perceived_lambda
            && perceived_lambda < tr.a
            && tr.a < true_lambda,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model_core::{simulate_trajectory, Rule};

    fn closed_loop_traj(sigma_eta: f64, seed: u64) -> (Transmission, Trajectory) {
        let tr = Transmission::new(0.8, -0.5, 1.0).unwrap();
        let traj = simulate_trajectory(
            &tr,
            &Rule::Proportional { f: 0.4 },
            0.0,
            100_000,
            sigma_eta,
            seed,
        )
        .unwrap();
        (tr, traj)
    }

    #[test]
    fn policy_shocks_identify_the_transmission() {
        let (tr, traj) = closed_loop_traj(1.0, 2);
        let fit = estimate_transmission(&traj, EstimationMethod::Ols).unwrap();
        let a_hat = fit.coefficient("a_hat").unwrap();
        let b_hat = fit.coefficient("b_hat").unwrap();
        assert!((a_hat - tr.a).abs() <= 3.0 * fit.stderr("a_hat").unwrap());
        assert!((b_hat - tr.b).abs() <= 3.0 * fit.stderr("b_hat").unwrap());
        assert!(b_hat < 0.0);
    }

    #[test]
    fn exact_feedback_defeats_identification() {
        let (_, traj) = closed_loop_traj(0.0, 2);
        assert!(matches!(
            estimate_transmission(&traj, EstimationMethod::Ols),
            Err(Error::IdentificationFailure)
        ));
        assert!(matches!(
            estimate_transmission(&traj, EstimationMethod::Iv),
            Err(Error::IdentificationFailure)
        ));
    }

    #[test]
    fn iv_and_ols_agree_asymptotically() {
        let (_, traj) = closed_loop_traj(1.0, 5);
        let o = estimate_transmission(&traj, EstimationMethod::Ols).unwrap();
        let v = estimate_transmission(&traj, EstimationMethod::Iv).unwrap();
        for name in ["a_hat", "b_hat"] {
            let diff = (o.coefficient(name).unwrap() - v.coefficient(name).unwrap()).abs();
            assert!(diff < 0.02, "{name} differs by {diff}");
        }
    }

    #[test]
    fn feedback_flips_the_naive_sign() {
        let tr = Transmission::new(0.9, -0.5, 1.0).unwrap();
        let traj = simulate_trajectory(
            &tr,
            &Rule::Proportional { f: 0.5 },
            0.0,
            100_000,
            0.1,
            3,
        )
        .unwrap();
        let puzzle = price_puzzle_demo(&traj, &tr).unwrap();
        assert!(puzzle.naive_b_hat > 0.0);
        assert!(puzzle.sign_flip);
        assert!(puzzle.corrected_b_hat < 0.0);
        assert!(puzzle.mis_advice_ordering);
        assert!(puzzle.true_lambda > tr.a);
    }

    #[test]
    fn pure_noise_instrument_shows_no_flip() {
        let tr = Transmission::new(0.9, -0.5, 1.0).unwrap();
        let traj = simulate_trajectory(&tr, &Rule::Peg, 0.0, 100_000, 1.0, 4).unwrap();
        let puzzle = price_puzzle_demo(&traj, &tr).unwrap();
        assert!(!puzzle.sign_flip);
        assert!((puzzle.naive_b_hat - tr.b).abs() < 0.05);
    }
}

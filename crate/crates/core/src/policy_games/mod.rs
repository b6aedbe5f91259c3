//! Game-theoretic set pieces: the static discretionary equilibrium under a
//! distorted steady state, and the re-estimation loop in which a planner
//! keeps mistaking the observed closed-loop persistence for structure.

mod stackelberg;

pub use stackelberg::{
    proportional_rule_loss, stackelberg_commit, stackelberg_reoptimize, StackelbergModel,
    StackelbergPlan,
};

use crate::error::{Error, Result};
use crate::model_core::Transmission;
use crate::optimal_control::{
    policy_loss, riccati_solve, LossSpec, DEFAULT_RICCATI_MAX_ITER, DEFAULT_RICCATI_TOL,
};

/// Static discretionary equilibrium of the one-period loop `pi_t = b*i_{t-1}`
/// when the policy maker's loss is centered on `pi_bias` instead of the
/// model's steady state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BGEquilibrium {
    /// Discretionary target level `[beta*q / (beta*q + r/b^2)] * pi_bias`.
    pub pi_star: f64,
    /// Discretionary instrument level `pi_star / b`.
    pub i_star: f64,
    /// Per-period social loss (bias-free) at the discretionary equilibrium.
    pub loss_discretion: f64,
    /// Per-period social loss at the peg (`pi = i = 0`); zero here since the
    /// static loop delivers the bliss point.
    pub loss_rules: f64,
}

/// Solve the first-order condition
/// `beta*q*(pi - pi_bias) + (r/b^2)*pi = 0` of per-period re-optimization.
///
/// Both reported losses are evaluated against the undistorted objective, so
/// discretion is weakly worse than the peg, strictly when `pi_bias > 0`.
pub fn barro_gordon_equilibrium(b: f64, ls: &LossSpec) -> Result<BGEquilibrium> {
    if b == 0.0 {
        return Err(Error::Uncontrollable);
    }
    let weight = ls.beta * ls.q;
    let friction = ls.r / (b * b);
    let pi_star = weight / (weight + friction) * ls.pi_bias;
    let i_star = pi_star / b;
    let loss_discretion = 0.5 * (weight * pi_star * pi_star + ls.r * i_star * i_star);
    Ok(BGEquilibrium {
        pi_star,
        i_star,
        loss_discretion,
        loss_rules: 0.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MisperceptionVerdict {
    /// Losses stayed at or below the peg benchmark throughout.
    Converged,
    /// Some iteration's loss exceeded the peg benchmark.
    Deteriorated,
    /// Some iteration's true persistence left the discounted-stationary band
    /// `|lambda| < 1/sqrt(beta)`.
    Diverged,
}

impl std::fmt::Display for MisperceptionVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            MisperceptionVerdict::Converged => "converged",
            MisperceptionVerdict::Deteriorated => "deteriorated",
            MisperceptionVerdict::Diverged => "diverged",
        };
        f.write_str(s)
    }
}

/// One run of the re-estimation loop.
#[derive(Debug, Clone, PartialEq)]
pub struct MisperceptionRun {
    /// Total gain in force at each iteration.
    pub f_path: Vec<f64>,
    /// Persistence the planner estimates at each iteration,
    /// `a + b*f_path[k-1]` (the previous closed loop, misread as structure).
    pub perceived_a_path: Vec<f64>,
    /// True closed-loop persistence `a + b*f_path[k]`.
    pub true_lambda_path: Vec<f64>,
    /// Loss of each iteration's policy under the true transmission,
    /// normalized to unit initial deviation.
    pub loss_path: Vec<f64>,
    /// Peg benchmark the verdict compares against.
    pub rules_loss: f64,
    pub verdict: MisperceptionVerdict,
}

/// Iterate the misperceiving planner: each round the observed closed-loop
/// persistence is treated as structural, the regulator is solved for it, and
/// the implied gain is layered onto the response already in force. The
/// planner's forecast of the next reduced form is correct, but the
/// accumulated instrument cost never enters the round's objective, so the
/// gain ratchets toward the persistence-killing response.
pub fn kp_misperception_iterate(
    tr: &Transmission,
    ls: &LossSpec,
    n_iter: usize,
) -> Result<MisperceptionRun> {
    if n_iter == 0 {
        return Err(Error::EmptyHorizon);
    }
    tr.require_controllable()?;
    let rules_loss = policy_loss(tr, ls, 0.0, 1.0);

    let mut f_path = Vec::with_capacity(n_iter);
    let mut perceived_a_path = Vec::with_capacity(n_iter);
    let mut true_lambda_path = Vec::with_capacity(n_iter);
    let mut loss_path = Vec::with_capacity(n_iter);

    let mut gain_total = 0.0f64;
    for _ in 0..n_iter {
        let perceived_a = tr.a + tr.b * gain_total;
        let perceived_tr = Transmission::new(perceived_a.max(0.0), tr.b, tr.sigma_eps)?;
        let sol = riccati_solve(&perceived_tr, ls, DEFAULT_RICCATI_TOL, DEFAULT_RICCATI_MAX_ITER)?;
        gain_total += sol.f_star;
        let lambda_true = tr.a + tr.b * gain_total;

        perceived_a_path.push(perceived_a);
        f_path.push(gain_total);
        true_lambda_path.push(lambda_true);
        loss_path.push(policy_loss(tr, ls, gain_total, 1.0));
    }

    let diverged = true_lambda_path
        .iter()
        .any(|&l| ls.beta * l * l >= 1.0);
    let deteriorated = loss_path.iter().any(|&l| l > rules_loss);
    let verdict = if diverged {
        MisperceptionVerdict::Diverged
    } else if deteriorated {
        MisperceptionVerdict::Deteriorated
    } else {
        MisperceptionVerdict::Converged
    };

    Ok(MisperceptionRun {
        f_path,
        perceived_a_path,
        true_lambda_path,
        loss_path,
        rules_loss,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn discretionary_equilibrium_hand_values() {
        let ls = LossSpec::new(1.0, 1.0, 1.0)
            .unwrap()
            .with_bias(2.0)
            .unwrap();
        let eq = barro_gordon_equilibrium(-1.0, &ls).unwrap();
        assert_eq!(eq.pi_star, 1.0);
        assert_eq!(eq.i_star, -1.0);
        assert!(eq.loss_discretion > eq.loss_rules);
    }

    #[test]
    fn no_bias_recovers_the_peg() {
        let ls = LossSpec::new(1.0, 1.0, 1.0).unwrap();
        let eq = barro_gordon_equilibrium(-1.0, &ls).unwrap();
        assert_eq!(eq.pi_star, 0.0);
        assert_eq!(eq.i_star, 0.0);
        assert_eq!(eq.loss_discretion, eq.loss_rules);
    }

    #[test]
    fn costly_instrument_suppresses_the_distortion() {
        let mut last = f64::INFINITY;
        for r in [1.0, 10.0, 1000.0, 1e6] {
            let ls = LossSpec::new(1.0, r, 1.0).unwrap().with_bias(2.0).unwrap();
            let eq = barro_gordon_equilibrium(-1.0, &ls).unwrap();
            assert!(eq.pi_star < last);
            last = eq.pi_star;
        }
        assert!(last < 1e-5);
    }

    #[test]
    fn zero_target_weight_matches_zero_bias() {
        let biased = LossSpec::new(0.0, 1.0, 1.0).unwrap().with_bias(3.0).unwrap();
        let unbiased = LossSpec::new(1.0, 1.0, 1.0).unwrap();
        let a = barro_gordon_equilibrium(-1.0, &biased).unwrap();
        let b = barro_gordon_equilibrium(-1.0, &unbiased).unwrap();
        assert_eq!(a.pi_star, b.pi_star);
        assert_eq!(a.i_star, b.i_star);
    }

    #[test]
    fn equilibrium_monotone_in_weights_and_linear_in_bias() {
        let base = LossSpec::new(1.0, 1.0, 1.0).unwrap().with_bias(2.0).unwrap();
        let eq = barro_gordon_equilibrium(-1.0, &base).unwrap();
        let more_q = LossSpec::new(2.0, 1.0, 1.0).unwrap().with_bias(2.0).unwrap();
        assert!(barro_gordon_equilibrium(-1.0, &more_q).unwrap().pi_star > eq.pi_star);
        let more_r = LossSpec::new(1.0, 2.0, 1.0).unwrap().with_bias(2.0).unwrap();
        assert!(barro_gordon_equilibrium(-1.0, &more_r).unwrap().pi_star < eq.pi_star);
        let double_bias = LossSpec::new(1.0, 1.0, 1.0).unwrap().with_bias(4.0).unwrap();
        assert_relative_eq!(
            barro_gordon_equilibrium(-1.0, &double_bias).unwrap().pi_star,
            2.0 * eq.pi_star,
            max_relative = 1e-12
        );
    }

    #[test]
    fn first_iteration_is_the_full_information_optimum() {
        let tr = Transmission::deterministic(0.8, -0.5).unwrap();
        let ls = LossSpec::new(1.0, 0.1, 1.0).unwrap();
        let run = kp_misperception_iterate(&tr, &ls, 5).unwrap();
        let sol = riccati_solve(&tr, &ls, 1e-10, 1_000_000).unwrap();
        assert_eq!(run.f_path[0], sol.f_star);
        assert_eq!(run.perceived_a_path[0], 0.8);
    }

    #[test]
    fn gain_drifts_monotonically_and_percept_follows_the_loop() {
        let tr = Transmission::deterministic(0.8, -0.5).unwrap();
        let ls = LossSpec::new(1.0, 0.1, 1.0).unwrap();
        let run = kp_misperception_iterate(&tr, &ls, 10).unwrap();
        for k in 1..10 {
            assert!(run.f_path[k] > run.f_path[k - 1], "gain must ratchet up");
            assert!(
                run.perceived_a_path[k] < run.perceived_a_path[k - 1],
                "perceived persistence must fall"
            );
            assert_eq!(
                run.perceived_a_path[k],
                tr.a + tr.b * run.f_path[k - 1],
                "perceived persistence is the previous closed loop"
            );
            assert_eq!(run.true_lambda_path[k], tr.a + tr.b * run.f_path[k]);
        }
    }

    #[test]
    fn expensive_instrument_ends_worse_than_the_peg() {
        let tr = Transmission::deterministic(0.8, -0.5).unwrap();
        let ls = LossSpec::new(1.0, 1.0, 1.0).unwrap();
        let run = kp_misperception_iterate(&tr, &ls, 40).unwrap();
        assert_eq!(run.verdict, MisperceptionVerdict::Deteriorated);
        assert!(run.loss_path.last().unwrap() > &run.rules_loss);
        // the limit response kills persistence entirely
        assert!(run.true_lambda_path.last().unwrap().abs() < 1e-3);
    }

    #[test]
    fn cheap_instrument_converges_below_the_peg() {
        let tr = Transmission::deterministic(0.8, -0.5).unwrap();
        let ls = LossSpec::new(1.0, 0.1, 1.0).unwrap();
        let run = kp_misperception_iterate(&tr, &ls, 40).unwrap();
        assert_eq!(run.verdict, MisperceptionVerdict::Converged);
        for l in &run.loss_path {
            assert!(*l <= run.rules_loss);
        }
    }
}

//! stabilab: a numerical laboratory for stabilization policy as scalar
//! feedback control.
//!
//! Everything runs on one first-order single-input single-output law of
//! motion `pi_{t+1} = a*pi_t + b*i_t + eps_t`. On top of it the crate
//! provides closed-loop classification, pole placement and PID control,
//! the discounted scalar linear-quadratic regulator with robust and
//! filtered variants, discretionary-equilibrium and commitment games, and
//! identification experiments on simulated closed loops.
//!
//! All operations are pure functions of their inputs; simulations own their
//! generator state, so values are safe to share across threads.

pub mod classic_control;
pub mod error;
pub mod estimation;
pub mod model_core;
pub mod optimal_control;
pub mod policy_games;

pub use error::{Error, Result};

pub use model_core::{
    ar1_variance, classify, classify_gain, cobweb_regime, cobweb_simulate, compose_private,
    simulate_trajectory, ClosedLoop, CobwebParams, CobwebRegime, CobwebRun, FeedbackClass,
    PrivateSector, Rule, StabilityClass, Trajectory, Transmission, UNIT_ROOT_TOL,
};

pub use classic_control::{
    friedman_static_check, pid_simulate, pid_spectral_radius, pole_placement_gain,
    taylor_principle_bounds, taylor_rule_eval, taylor_transmission, ISPhillips, PidGains,
    StaticFriedman, TaylorRule93,
};

pub use optimal_control::{
    linspace, lqg_simulate, optimal_persistence_curve, peg_optimality_check, policy_loss,
    riccati_solve, robust_minimax_gain, LossSpec, LqgRun, RiccatiSolution, DEFAULT_RICCATI_MAX_ITER,
    DEFAULT_RICCATI_TOL,
};

pub use policy_games::{
    barro_gordon_equilibrium, kp_misperception_iterate, proportional_rule_loss,
    stackelberg_commit, stackelberg_reoptimize, BGEquilibrium, MisperceptionRun,
    MisperceptionVerdict, StackelbergModel, StackelbergPlan,
};

pub use estimation::{
    estimate_transmission, fit_policy_rule, iv_2sls, kalman_step, lucas_welfare_cost, ols,
    price_puzzle_demo, EstimationMethod, KalmanState, PolicyRuleFit, PolicySpec, PricePuzzle,
    RegressionResult, RuleData, WelfareSpec, MAX_GRAM_CONDITION,
};

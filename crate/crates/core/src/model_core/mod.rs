//! Unified first-order single-input single-output model.
//!
//! The law of motion is `pi_{t+1} = a*pi_t + b*i_t + eps_t` where `i_t` is
//! supplied by a policy rule. Composing a proportional rule `i_t = f*pi_t`
//! gives the closed-loop recursion `pi_{t+1} = (a + b*f)*pi_t + eps_t`, whose
//! persistence `lambda = a + b*f` drives every classification in this module.

mod cobweb;
pub(crate) mod trajectory;

pub use cobweb::{cobweb_regime, cobweb_simulate, CobwebParams, CobwebRegime, CobwebRun};
pub use trajectory::{simulate_trajectory, Trajectory};

use crate::error::{Error, Result};

/// Half-width of the knife-edge band around |lambda| = 1 classified as a
/// unit root.
pub const UNIT_ROOT_TOL: f64 = 1e-12;

/// Structural open-loop law of motion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transmission {
    /// Open-loop persistence of the policy target (>= 0).
    pub a: f64,
    /// Marginal impact of the instrument on the next-period target.
    pub b: f64,
    /// Standard deviation of the structural shock (>= 0).
    pub sigma_eps: f64,
}

impl Transmission {
    pub fn new(a: f64, b: f64, sigma_eps: f64) -> Result<Self> {
        if !a.is_finite() || a < 0.0 {
            return Err(Error::Domain(format!(
                "open-loop persistence must be finite and >= 0, got {a}"
            )));
        }
        if !b.is_finite() {
            return Err(Error::Domain(format!(
                "instrument impact must be finite, got {b}"
            )));
        }
        if !sigma_eps.is_finite() || sigma_eps < 0.0 {
            return Err(Error::Domain(format!(
                "shock standard deviation must be finite and >= 0, got {sigma_eps}"
            )));
        }
        Ok(Self { a, b, sigma_eps })
    }

    /// Transmission without structural shocks.
    pub fn deterministic(a: f64, b: f64) -> Result<Self> {
        Self::new(a, b, 0.0)
    }

    pub(crate) fn require_controllable(&self) -> Result<()> {
        if self.b == 0.0 {
            Err(Error::Uncontrollable)
        } else {
            Ok(())
        }
    }
}

/// Private-sector layer: `pi_{t+1} = a'*pi_t + b'*x_t + ...` with the private
/// instrument following `x_t = f'*pi_t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrivateSector {
    pub a_prime: f64,
    pub b_prime: f64,
    pub f_prime: f64,
}

impl PrivateSector {
    pub fn new(a_prime: f64, b_prime: f64, f_prime: f64) -> Result<Self> {
        if !a_prime.is_finite() || a_prime < 0.0 {
            return Err(Error::Domain(format!(
                "structural persistence must be finite and >= 0, got {a_prime}"
            )));
        }
        if !b_prime.is_finite() || b_prime == 0.0 {
            return Err(Error::Domain(format!(
                "private instrument impact must be finite and nonzero, got {b_prime}"
            )));
        }
        if !f_prime.is_finite() {
            return Err(Error::Domain(format!(
                "private feedback gain must be finite, got {f_prime}"
            )));
        }
        let composed = a_prime + b_prime * f_prime;
        if !composed.is_finite() {
            return Err(Error::Domain(format!(
                "composed persistence must be finite, got {composed}"
            )));
        }
        Ok(Self {
            a_prime,
            b_prime,
            f_prime,
        })
    }
}

/// Persistence the policy maker inherits once the private sector's feedback
/// is substituted into the structural law of motion: `a' + b'*f'`.
pub fn compose_private(ps: &PrivateSector) -> f64 {
    ps.a_prime + ps.b_prime * ps.f_prime
}

/// Policy feedback law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Rule {
    /// Instrument pegged at its steady state (`i_t = 0`).
    Peg,
    /// `i_t = f * pi_t`.
    Proportional { f: f64 },
    /// `i_t = fp*pi_t + fi*sum_{s<=t} pi_s + fd*(pi_t - pi_{t-1})`.
    Pid { fp: f64, fi: f64, fd: f64 },
    /// `i_t = rho_i*i_{t-1} + f_x*pi_t`.
    Inertial { rho_i: f64, f_x: f64 },
}

impl Rule {
    /// The scalar gain when the rule is a peg or proportional response.
    pub fn proportional_gain(&self) -> Option<f64> {
        match *self {
            Rule::Peg => Some(0.0),
            Rule::Proportional { f } => Some(f),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeedbackClass {
    /// `b*f < 0` with `0 <= a + b*f < a`: the response damps persistence.
    NegativeFeedback,
    /// `b*f > 0`: the response amplifies persistence.
    PositiveFeedback,
    /// `f = 0` (or `b = 0`): the instrument leaves the loop open.
    NoFeedback,
    /// `b*f < 0` but `a + b*f < 0`: the response is so aggressive the
    /// target flips sign each period. Diagnostic class; the damping
    /// definition above excludes it.
    Overshooting,
}

impl std::fmt::Display for FeedbackClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            FeedbackClass::NegativeFeedback => "negative_feedback",
            FeedbackClass::PositiveFeedback => "positive_feedback",
            FeedbackClass::NoFeedback => "no_feedback",
            FeedbackClass::Overshooting => "overshooting",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StabilityClass {
    /// `lambda == 0` exactly: shocks die in one period.
    ZeroPersistence,
    /// `0 <= |lambda| < 1`.
    Stationary,
    /// `||lambda| - 1| <= UNIT_ROOT_TOL`: knife edge.
    UnitRoot,
    /// `|lambda| > 1`.
    Explosive,
}

impl std::fmt::Display for StabilityClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            StabilityClass::ZeroPersistence => "zero_persistence",
            StabilityClass::Stationary => "stationary",
            StabilityClass::UnitRoot => "unit_root",
            StabilityClass::Explosive => "explosive",
        };
        f.write_str(s)
    }
}

/// Closed-loop persistence plus its feedback and stability classes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedLoop {
    pub lambda: f64,
    pub feedback_class: FeedbackClass,
    pub stability_class: StabilityClass,
}

/// Classify the closed loop induced by a proportional gain `f`.
pub fn classify_gain(tr: &Transmission, f: f64) -> ClosedLoop {
    let lambda = tr.a + tr.b * f;
    let bf = tr.b * f;
    let feedback_class = if bf == 0.0 {
        FeedbackClass::NoFeedback
    } else if bf > 0.0 {
        FeedbackClass::PositiveFeedback
    } else if lambda >= 0.0 {
        FeedbackClass::NegativeFeedback
    } else {
        FeedbackClass::Overshooting
    };
    let stability_class = if lambda == 0.0 {
        StabilityClass::ZeroPersistence
    } else if (lambda.abs() - 1.0).abs() <= UNIT_ROOT_TOL {
        StabilityClass::UnitRoot
    } else if lambda.abs() < 1.0 {
        StabilityClass::Stationary
    } else {
        StabilityClass::Explosive
    };
    ClosedLoop {
        lambda,
        feedback_class,
        stability_class,
    }
}

/// Classify the closed loop under a peg or proportional rule.
///
/// Panics for integral or inertial rules; those augment the state and are
/// classified through the companion-matrix spectral radius in
/// `classic_control` instead.
pub fn classify(tr: &Transmission, rule: &Rule) -> ClosedLoop {
    let f = rule
        .proportional_gain()
        .expect("classify requires a peg or proportional rule");
    classify_gain(tr, f)
}

/// Stationary variance of `x_{t+1} = lambda*x_t + eps_t`:
/// `sigma_eps^2 / (1 - lambda^2)`.
pub fn ar1_variance(lambda: f64, sigma_eps: f64) -> Result<f64> {
    if lambda.abs() >= 1.0 {
        return Err(Error::NonStationary { lambda });
    }
    Ok(sigma_eps * sigma_eps / (1.0 - lambda * lambda))
}

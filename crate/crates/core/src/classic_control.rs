//! Classic control for the scalar transmission: pole placement, the
//! accelerationist IS-Phillips transmission with its stabilizing-gain
//! interval, discrete PID simulation, the fixed-coefficient interest-rate
//! rule, and the static variance check for a feedback instrument.

use nalgebra::Matrix3;

use crate::error::{Error, Result};
use crate::model_core::{simulate_trajectory, Rule, Trajectory, Transmission};

/// Accelerationist Phillips curve `pi_{t+1} = pi_t + a*x_t` paired with an
/// IS curve `x_t = -b*(i_t - pi_t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ISPhillips {
    /// Phillips-curve slope (> 0).
    pub a_slope: f64,
    /// IS interest sensitivity (> 0).
    pub b_is: f64,
}

impl ISPhillips {
    pub fn new(a_slope: f64, b_is: f64) -> Result<Self> {
        if !a_slope.is_finite() || !b_is.is_finite() || b_is <= 0.0 || a_slope < 0.0 {
            return Err(Error::Domain(format!(
                "IS-Phillips slopes must be finite with a_slope >= 0, b_is > 0, got ({a_slope}, {b_is})"
            )));
        }
        if a_slope == 0.0 {
            // Degenerate slope: the instrument loses all traction.
            return Err(Error::Uncontrollable);
        }
        Ok(Self { a_slope, b_is })
    }
}

/// Reduce the IS-Phillips block to the scalar transmission
/// `pi_{t+1} = (1 + ab)*pi_t - ab*i_t`, so `a = 1 + ab > 1` and
/// `b = -(a - 1)` exactly.
pub fn taylor_transmission(isp: &ISPhillips) -> Transmission {
    let slope = isp.a_slope * isp.b_is;
    let a = 1.0 + slope;
    // b derived from a so the identity a - 1 == -b is bit-exact.
    let b = 1.0 - a;
    Transmission { a, b, sigma_eps: 0.0 }
}

/// Gain that places the closed-loop persistence at `lambda_target`:
/// `f* = (lambda_target - a) / b`.
pub fn pole_placement_gain(tr: &Transmission, lambda_target: f64) -> Result<f64> {
    tr.require_controllable()?;
    Ok((lambda_target - tr.a) / tr.b)
}

/// Open interval of gains that keep the IS-Phillips loop both damping and
/// stationary: `(1, -a/b)`. The lower bound is the more-than-one response
/// threshold, the upper bound is the gain that kills persistence outright.
pub fn taylor_principle_bounds(isp: &ISPhillips) -> (f64, f64) {
    let tr = taylor_transmission(isp);
    (1.0, -tr.a / tr.b)
}

/// Fixed-coefficient nominal-rate rule `i = 1.5*pi + 0.5*x + 1` in annual
/// percent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TaylorRule93;

impl TaylorRule93 {
    pub const PI_COEF: f64 = 1.5;
    pub const GAP_COEF: f64 = 0.5;
    pub const INTERCEPT: f64 = 1.0;

    pub fn eval(&self, pi: f64, x: f64) -> f64 {
        taylor_rule_eval(pi, x)
    }
}

/// `1.5*pi + 0.5*x + 1`.
pub fn taylor_rule_eval(pi: f64, x: f64) -> f64 {
    TaylorRule93::PI_COEF * pi + TaylorRule93::GAP_COEF * x + TaylorRule93::INTERCEPT
}

/// Static open-loop/instrument dispersion data for the one-shot feedback
/// check on `pi_cl = pi_ol + i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaticFriedman {
    /// Open-loop target standard deviation (>= 0).
    pub sigma_ol: f64,
    /// Instrument standard deviation (>= 0).
    pub sigma_i: f64,
    /// Correlation between instrument and open-loop target, in [-1, 1].
    pub rho: f64,
}

impl StaticFriedman {
    pub fn new(sigma_ol: f64, sigma_i: f64, rho: f64) -> Result<Self> {
        if !sigma_ol.is_finite() || sigma_ol < 0.0 || !sigma_i.is_finite() || sigma_i < 0.0 {
            return Err(Error::Domain(format!(
                "standard deviations must be finite and >= 0, got ({sigma_ol}, {sigma_i})"
            )));
        }
        if !rho.is_finite() || rho.abs() > 1.0 {
            return Err(Error::Domain(format!(
                "correlation must lie in [-1, 1], got {rho}"
            )));
        }
        Ok(Self {
            sigma_ol,
            sigma_i,
            rho,
        })
    }
}

/// Closed-loop variance `sigma_ol^2 + sigma_i^2 + 2*rho*sigma_i*sigma_ol` and
/// whether it is strictly below the open-loop variance (true exactly when
/// `rho < -sigma_i / (2*sigma_ol)` with a live instrument).
pub fn friedman_static_check(sf: &StaticFriedman) -> Result<(f64, bool)> {
    if sf.sigma_ol == 0.0 {
        return Err(Error::DegenerateOpenLoop);
    }
    let var_ol = sf.sigma_ol * sf.sigma_ol;
    let var_cl = var_ol + sf.sigma_i * sf.sigma_i + 2.0 * sf.rho * sf.sigma_i * sf.sigma_ol;
    Ok((var_cl, var_cl < var_ol))
}

/// Proportional-integral-derivative gains for the discrete rule
/// `i_t = fp*pi_t + fi*sum_{s<=t} pi_s + fd*(pi_t - pi_{t-1})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PidGains {
    pub fp: f64,
    pub fi: f64,
    pub fd: f64,
}

impl PidGains {
    pub fn rule(&self) -> Rule {
        Rule::Pid {
            fp: self.fp,
            fi: self.fi,
            fd: self.fd,
        }
    }
}

/// Companion matrix of the PID-augmented loop over the state
/// `(pi_t, sum_{s<=t} pi_s, pi_{t-1})`.
pub fn pid_companion_matrix(tr: &Transmission, g: &PidGains) -> Matrix3<f64> {
    let top = tr.a + tr.b * (g.fp + g.fd);
    Matrix3::new(
        top,
        tr.b * g.fi,
        -tr.b * g.fd,
        top,
        1.0 + tr.b * g.fi,
        -tr.b * g.fd,
        1.0,
        0.0,
        0.0,
    )
}

/// Largest eigenvalue modulus of the augmented system.
pub fn pid_spectral_radius(tr: &Transmission, g: &PidGains) -> f64 {
    pid_companion_matrix(tr, g)
        .complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// Simulate the PID loop and report the spectral radius of the augmented
/// three-state system; the loop is asymptotically stable iff the radius is
/// below one.
pub fn pid_simulate(
    tr: &Transmission,
    gains: &PidGains,
    pi0: f64,
    horizon: usize,
    sigma_eta: f64,
    seed: u64,
) -> Result<(Trajectory, f64)> {
    let traj = simulate_trajectory(tr, &gains.rule(), pi0, horizon, sigma_eta, seed)?;
    Ok((traj, pid_spectral_radius(tr, gains)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model_core::{classify_gain, FeedbackClass, StabilityClass};
    use approx::assert_relative_eq;

    #[test]
    fn pole_placement_hits_target() {
        let tr = Transmission::deterministic(1.2, -0.5).unwrap();
        let f = pole_placement_gain(&tr, 0.8).unwrap();
        assert_relative_eq!(f, 0.8, max_relative = 1e-12);
        assert_relative_eq!(classify_gain(&tr, f).lambda, 0.8, max_relative = 1e-12);
    }

    #[test]
    fn pole_placement_at_open_loop_is_a_peg() {
        let tr = Transmission::deterministic(0.7, -0.5).unwrap();
        assert_eq!(pole_placement_gain(&tr, 0.7).unwrap(), 0.0);
    }

    #[test]
    fn pole_placement_zero_persistence_gain() {
        let tr = Transmission::deterministic(0.9, -0.3).unwrap();
        assert_relative_eq!(
            pole_placement_gain(&tr, 0.0).unwrap(),
            3.0,
            max_relative = 1e-12
        );
    }

    #[test]
    fn pole_placement_requires_instrument_traction() {
        let tr = Transmission::deterministic(0.9, 0.0).unwrap();
        assert!(matches!(
            pole_placement_gain(&tr, 0.5),
            Err(Error::Uncontrollable)
        ));
    }

    #[test]
    fn is_phillips_reduction() {
        let tr = taylor_transmission(&ISPhillips::new(0.5, 1.0).unwrap());
        assert_relative_eq!(tr.a, 1.5, max_relative = 1e-12);
        assert_relative_eq!(tr.b, -0.5, max_relative = 1e-12);
        let tr = taylor_transmission(&ISPhillips::new(0.25, 0.8).unwrap());
        assert_relative_eq!(tr.a, 1.2, max_relative = 1e-12);
        assert_relative_eq!(tr.b, -0.2, max_relative = 1e-12);
        // the identity a - 1 == -b holds bit-exactly
        assert_eq!(tr.a - 1.0, -tr.b);
        assert!(matches!(ISPhillips::new(0.0, 1.0), Err(Error::Uncontrollable)));
    }

    #[test]
    fn stabilizing_gain_interval() {
        let isp = ISPhillips::new(0.5, 1.0).unwrap();
        let (lo, hi) = taylor_principle_bounds(&isp);
        assert_eq!(lo, 1.0);
        assert_relative_eq!(hi, 3.0, max_relative = 1e-12);
        let tr = taylor_transmission(&isp);
        // interior gain: damping and stationary
        let cl = classify_gain(&tr, 1.5);
        assert_relative_eq!(cl.lambda, 0.75, max_relative = 1e-12);
        assert_eq!(cl.feedback_class, FeedbackClass::NegativeFeedback);
        assert_eq!(cl.stability_class, StabilityClass::Stationary);
        // boundary f = 1: exact unit root
        let cl = classify_gain(&tr, 1.0);
        assert_eq!(cl.stability_class, StabilityClass::UnitRoot);
        // boundary f = -a/b: zero persistence to rounding
        let cl = classify_gain(&tr, hi);
        assert!(cl.lambda.abs() < 1e-12);
    }

    #[test]
    fn rate_rule_point_values() {
        assert_eq!(taylor_rule_eval(2.0, 0.0), 4.0);
        assert_eq!(taylor_rule_eval(0.0, 0.0), 1.0);
        assert_relative_eq!(taylor_rule_eval(3.0, -2.0), 4.5, max_relative = 1e-12);
    }

    #[test]
    fn static_check_perfect_countercyclical_instrument() {
        let sf = StaticFriedman::new(1.0, 1.0, -1.0).unwrap();
        let (var, stabilizing) = friedman_static_check(&sf).unwrap();
        assert_eq!(var, 0.0);
        assert!(stabilizing);
    }

    #[test]
    fn static_check_boundary_correlation() {
        // rho = -sigma_i / (2 sigma_ol) leaves the variance unchanged
        let sf = StaticFriedman::new(1.0, 1.0, -0.5).unwrap();
        let (var, stabilizing) = friedman_static_check(&sf).unwrap();
        assert_eq!(var, 1.0);
        assert!(!stabilizing);
        let sf = StaticFriedman::new(2.0, 1.0, -0.25).unwrap();
        let (var, stabilizing) = friedman_static_check(&sf).unwrap();
        assert_eq!(var, 4.0);
        assert!(!stabilizing);
    }

    #[test]
    fn static_check_uncorrelated_instrument_adds_noise() {
        let sf = StaticFriedman::new(1.0, 0.5, 0.0).unwrap();
        let (var, stabilizing) = friedman_static_check(&sf).unwrap();
        assert_relative_eq!(var, 1.25, max_relative = 1e-12);
        assert!(!stabilizing);
    }

    #[test]
    fn static_check_degenerate_open_loop() {
        let sf = StaticFriedman::new(0.0, 1.0, 0.0).unwrap();
        assert!(matches!(
            friedman_static_check(&sf),
            Err(Error::DegenerateOpenLoop)
        ));
    }

    #[test]
    fn pid_reduces_to_proportional() {
        let tr = Transmission::new(0.8, -0.5, 1.0).unwrap();
        let gains = PidGains {
            fp: 0.4,
            fi: 0.0,
            fd: 0.0,
        };
        let (pid_traj, rho) = pid_simulate(&tr, &gains, 1.0, 300, 0.2, 9).unwrap();
        let prop_traj =
            simulate_trajectory(&tr, &Rule::Proportional { f: 0.4 }, 1.0, 300, 0.2, 9).unwrap();
        assert_eq!(pid_traj, prop_traj);
        assert!(rho < 1.0);
    }

    #[test]
    fn mild_integral_action_stays_stable() {
        let tr = Transmission::deterministic(0.8, -0.5).unwrap();
        let gains = PidGains {
            fp: 0.4,
            fi: 0.1,
            fd: 0.0,
        };
        let (traj, rho) = pid_simulate(&tr, &gains, 1.0, 400, 0.0, 0).unwrap();
        assert!(rho < 1.0, "spectral radius {rho}");
        assert!(traj.pi.last().unwrap().abs() < 1e-6);
    }

    #[test]
    fn aggressive_integral_action_destabilizes() {
        let tr = Transmission::deterministic(0.8, -0.5).unwrap();
        let gains = PidGains {
            fp: 0.4,
            fi: 10.0,
            fd: 0.0,
        };
        let (traj, rho) = pid_simulate(&tr, &gains, 1.0, 200, 0.0, 0).unwrap();
        assert!(rho > 1.0, "spectral radius {rho}");
        assert!(traj.pi.last().unwrap().abs() > 1e3);
    }

    #[test]
    fn spectral_radius_matches_hand_solved_quadratic() {
        // with fd = 0 the third state decouples; the 2x2 block has
        // eigenvalues 0.8 and 0.75 for these parameters
        let tr = Transmission::deterministic(0.8, -0.5).unwrap();
        let gains = PidGains {
            fp: 0.4,
            fi: 0.1,
            fd: 0.0,
        };
        assert_relative_eq!(pid_spectral_radius(&tr, &gains), 0.8, max_relative = 1e-9);
    }

    #[test]
    fn eigenvalues_satisfy_the_characteristic_cubic() {
        use nalgebra::Complex;
        // brute-force characteristic polynomial of the companion matrix:
        // z^3 - tr(M) z^2 + (sum of principal 2x2 minors) z - det(M)
        let cases = [
            (0.8, -0.5, 0.4, 0.1, 0.3),
            (1.2, -0.5, 0.9, 0.2, -0.4),
            (0.5, 0.7, -0.3, 0.6, 0.2),
            (1.5, -1.2, 1.1, 4.0, 0.8),
        ];
        for (a, b, fp, fi, fd) in cases {
            let tr = Transmission::deterministic(a, b).unwrap();
            let g = PidGains { fp, fi, fd };
            let m = pid_companion_matrix(&tr, &g);
            let trace = m[(0, 0)] + m[(1, 1)] + m[(2, 2)];
            let minors = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
                + m[(0, 0)] * m[(2, 2)] - m[(0, 2)] * m[(2, 0)]
                + m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)];
            let det = m.determinant();
            let eigs = m.complex_eigenvalues();
            let mut product = Complex::new(1.0, 0.0);
            let scale = trace.abs().max(det.abs()).max(1.0);
            for z in eigs.iter() {
                let residual = z * z * z - z * z * trace + z * minors - det;
                assert!(
                    residual.norm() < 1e-9 * scale.powi(3),
                    "p(z) = {residual} at z = {z}"
                );
                product *= z;
            }
            assert_relative_eq!(product.re, det, max_relative = 1e-9, epsilon = 1e-12);
            let rho = pid_spectral_radius(&tr, &g);
            let max_mod = eigs.iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert_eq!(rho, max_mod);
        }
    }
}

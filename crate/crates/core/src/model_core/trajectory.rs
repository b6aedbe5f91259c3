//! Seeded trajectory simulation and the trajectory CSV format.
//!
//! Shocks come from two independent ChaCha12 streams derived from one seed:
//! stream 0 feeds structural shocks, stream 1 feeds policy (or observation)
//! noise. Splitting the streams keeps the structural shock sequence
//! bit-identical across simulators that differ only in their second noise
//! source.

use std::fs;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::model_core::{Rule, Transmission};

pub(crate) fn state_shock_rng(seed: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(0);
    rng
}

pub(crate) fn noise_rng(seed: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(1);
    rng
}

pub(crate) fn draw_normal(rng: &mut ChaCha12Rng, sd: f64) -> f64 {
    let z: f64 = StandardNormal.sample(rng);
    sd * z
}

/// Simulated (or ingested) time series of target, instrument and shocks.
///
/// All series have length `horizon + 1` with period 0 first. The target
/// reconstructs as `pi[t+1] = a*pi[t] + b*i[t] + eps[t]`; the trailing
/// `eps`/`eta` entries are drawn but feed no further period.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub t: Vec<usize>,
    pub pi: Vec<f64>,
    pub i: Vec<f64>,
    pub eps: Vec<f64>,
    pub eta: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// CSV with header `t,pi,i,eps,eta`, full-precision decimal values.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("t,pi,i,eps,eta\n");
        for k in 0..self.len() {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                self.t[k], self.pi[k], self.i[k], self.eps[k], self.eta[k]
            ));
        }
        out
    }

    pub fn write_csv<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        fs::write(path, self.to_csv_string())?;
        Ok(())
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::SchemaError("empty trajectory CSV".into()))?;
        if header.trim() != "t,pi,i,eps,eta" {
            return Err(Error::SchemaError(format!(
                "expected header `t,pi,i,eps,eta`, got `{header}`"
            )));
        }
        let mut traj = Trajectory {
            t: Vec::new(),
            pi: Vec::new(),
            i: Vec::new(),
            eps: Vec::new(),
            eta: Vec::new(),
        };
        for (n, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 5 {
                return Err(Error::SchemaError(format!(
                    "row {} has {} fields, expected 5",
                    n + 2,
                    fields.len()
                )));
            }
            let parse = |s: &str, what: &str| -> Result<f64> {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::SchemaError(format!("bad {what} value `{s}`")))
            };
            traj.t.push(
                fields[0]
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| Error::SchemaError(format!("bad t value `{}`", fields[0])))?,
            );
            traj.pi.push(parse(fields[1], "pi")?);
            traj.i.push(parse(fields[2], "i")?);
            traj.eps.push(parse(fields[3], "eps")?);
            traj.eta.push(parse(fields[4], "eta")?);
        }
        Ok(traj)
    }

    pub fn from_csv_path<P: AsRef<Path>>(path: P) -> Result<Self> {
        Self::from_csv_str(&fs::read_to_string(path)?)
    }
}

/// Running state a rule needs across periods.
struct RuleState {
    integral: f64,
    prev_pi: f64,
    prev_i: f64,
}

impl RuleState {
    fn new(pi0: f64) -> Self {
        // Derivative term starts at rest: pi_{-1} = pi_0.
        RuleState {
            integral: 0.0,
            prev_pi: pi0,
            prev_i: 0.0,
        }
    }

    fn respond(&mut self, rule: &Rule, pi: f64) -> f64 {
        let i = match *rule {
            Rule::Peg => 0.0,
            Rule::Proportional { f } => f * pi,
            Rule::Pid { fp, fi, fd } => {
                self.integral += pi;
                fp * pi + fi * self.integral + fd * (pi - self.prev_pi)
            }
            Rule::Inertial { rho_i, f_x } => rho_i * self.prev_i + f_x * pi,
        };
        self.prev_pi = pi;
        self.prev_i = i;
        i
    }
}

/// Simulate the closed loop under `rule` with policy shocks `eta ~ N(0,
/// sigma_eta^2)`: `i_t = rule(pi..t) + eta_t`, `pi_{t+1} = a*pi_t + b*i_t +
/// eps_t`.
///
/// Deterministic given `seed`; with all noise off and a proportional gain the
/// path is the closed form `lambda^t * pi0`.
pub fn simulate_trajectory(
    tr: &Transmission,
    rule: &Rule,
    pi0: f64,
    horizon: usize,
    sigma_eta: f64,
    seed: u64,
) -> Result<Trajectory> {
    if horizon == 0 {
        return Err(Error::EmptyHorizon);
    }
    if !sigma_eta.is_finite() || sigma_eta < 0.0 {
        return Err(Error::Domain(format!(
            "policy shock standard deviation must be finite and >= 0, got {sigma_eta}"
        )));
    }
    let mut rng_eps = state_shock_rng(seed);
    let mut rng_eta = noise_rng(seed);

    let n = horizon + 1;
    let mut traj = Trajectory {
        t: Vec::with_capacity(n),
        pi: Vec::with_capacity(n),
        i: Vec::with_capacity(n),
        eps: Vec::with_capacity(n),
        eta: Vec::with_capacity(n),
    };

    let mut state = RuleState::new(pi0);
    let mut pi = pi0;
    for t in 0..n {
        let eps = draw_normal(&mut rng_eps, tr.sigma_eps);
        let eta = draw_normal(&mut rng_eta, sigma_eta);
        let i = state.respond(rule, pi) + eta;
        traj.t.push(t);
        traj.pi.push(pi);
        traj.i.push(i);
        traj.eps.push(eps);
        traj.eta.push(eta);
        if t < horizon {
            pi = tr.a * pi + tr.b * i + eps;
        }
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model_core::ar1_variance;
    use approx::assert_relative_eq;

    #[test]
    fn noise_free_proportional_path_is_geometric() {
        let tr = Transmission::deterministic(0.8, -0.5).unwrap();
        let traj =
            simulate_trajectory(&tr, &Rule::Proportional { f: 0.4 }, 1.0, 3, 0.0, 0).unwrap();
        let expected = [1.0, 0.6, 0.36, 0.216];
        for (got, want) in traj.pi.iter().zip(expected) {
            assert_relative_eq!(*got, want, max_relative = 1e-12);
        }
    }

    #[test]
    fn noise_free_geometric_to_horizon_100() {
        let tr = Transmission::deterministic(1.2, -0.5).unwrap();
        let f = 0.85;
        let lambda = tr.a + tr.b * f;
        let traj = simulate_trajectory(&tr, &Rule::Proportional { f }, 1.0, 100, 0.0, 0).unwrap();
        for (t, got) in traj.pi.iter().enumerate() {
            let want = lambda.powi(t as i32);
            assert_relative_eq!(*got, want, max_relative = 1e-12);
        }
    }

    #[test]
    fn peg_at_equilibrium_stays_zero() {
        let tr = Transmission::deterministic(0.9, -0.5).unwrap();
        let traj = simulate_trajectory(&tr, &Rule::Peg, 0.0, 10, 0.0, 0).unwrap();
        assert!(traj.pi.iter().all(|&x| x == 0.0));
        assert!(traj.i.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn zero_horizon_is_rejected() {
        let tr = Transmission::deterministic(0.9, -0.5).unwrap();
        assert!(matches!(
            simulate_trajectory(&tr, &Rule::Peg, 1.0, 0, 0.0, 0),
            Err(Error::EmptyHorizon)
        ));
    }

    #[test]
    fn inertial_rule_follows_its_recursion() {
        let tr = Transmission::deterministic(0.8, -0.5).unwrap();
        let rule = Rule::Inertial {
            rho_i: 0.8,
            f_x: 0.4,
        };
        let traj = simulate_trajectory(&tr, &rule, 1.0, 40, 0.0, 0).unwrap();
        // i_0 = 0.8*0 + 0.4*pi_0
        assert_relative_eq!(traj.i[0], 0.4, max_relative = 1e-12);
        for t in 1..traj.len() {
            let want = 0.8 * traj.i[t - 1] + 0.4 * traj.pi[t];
            assert_eq!(traj.i[t], want);
        }
        // the damping rule pulls the target toward its set point
        assert!(traj.pi.last().unwrap().abs() < 0.05);
    }

    #[test]
    fn sample_variance_converges_to_ar1_variance() {
        let tr = Transmission::new(0.8, -0.5, 1.0).unwrap();
        let traj =
            simulate_trajectory(&tr, &Rule::Proportional { f: 0.4 }, 0.0, 100_000, 0.0, 42)
                .unwrap();
        let n = traj.pi.len() as f64;
        let mean = traj.pi.iter().sum::<f64>() / n;
        let var = traj.pi.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
        let want = ar1_variance(0.6, 1.0).unwrap();
        assert!(
            (var - want).abs() / want < 0.03,
            "sample variance {var} vs stationary {want}"
        );
    }

    #[test]
    fn same_seed_same_trajectory() {
        let tr = Transmission::new(0.8, -0.5, 1.0).unwrap();
        let rule = Rule::Proportional { f: 0.4 };
        let a = simulate_trajectory(&tr, &rule, 1.0, 500, 0.3, 7).unwrap();
        let b = simulate_trajectory(&tr, &rule, 1.0, 500, 0.3, 7).unwrap();
        assert_eq!(a, b);
        let c = simulate_trajectory(&tr, &rule, 1.0, 500, 0.3, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn reconstruction_identity_holds_bit_exact() {
        let tr = Transmission::new(0.8, -0.5, 1.0).unwrap();
        let traj = simulate_trajectory(&tr, &Rule::Proportional { f: 0.4 }, 1.0, 200, 0.5, 3)
            .unwrap();
        for t in 0..traj.len() - 1 {
            let rebuilt = tr.a * traj.pi[t] + tr.b * traj.i[t] + traj.eps[t];
            assert_eq!(rebuilt, traj.pi[t + 1]);
        }
    }

    #[test]
    fn csv_round_trip() {
        let tr = Transmission::new(0.8, -0.5, 1.0).unwrap();
        let traj = simulate_trajectory(&tr, &Rule::Proportional { f: 0.4 }, 1.0, 50, 0.2, 11)
            .unwrap();
        let text = traj.to_csv_string();
        let back = Trajectory::from_csv_str(&text).unwrap();
        assert_eq!(traj, back);
    }

    #[test]
    fn csv_parse_rejects_bad_input() {
        assert!(matches!(
            Trajectory::from_csv_str(""),
            Err(Error::SchemaError(_))
        ));
        assert!(matches!(
            Trajectory::from_csv_str("time,pi,i,eps,eta\n"),
            Err(Error::SchemaError(_))
        ));
        assert!(matches!(
            Trajectory::from_csv_str("t,pi,i,eps,eta\n0,1,2,3\n"),
            Err(Error::SchemaError(_))
        ));
        assert!(matches!(
            Trajectory::from_csv_str("t,pi,i,eps,eta\n0,1,2,3,oops\n"),
            Err(Error::SchemaError(_))
        ));
    }
}

//! Leader-follower commitment plans for a forward-looking scalar follower.
//!
//! Model: a predetermined driver `z_{t+1} = rho*z_t` and a follower jump
//! condition `pi_t = delta*pi_{t+1} + kappa*z_t + b*i_t` under perfect
//! foresight. The leader minimizes `1/2 sum beta^t (q*pi^2 + r*i^2)` over a
//! finite horizon with the beyond-horizon jump pinned at zero.
//!
//! The commitment multiplier `gamma_t` carries the value of promises made
//! before `t`; it is zero at the start of any plan and generically nonzero
//! afterwards, which is exactly why re-solving at a later date produces a
//! different path.

use crate::error::{Error, Result};
use crate::optimal_control::LossSpec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StackelbergModel {
    /// Follower's forward weight on the expected jump (0 < delta < 1).
    pub delta: f64,
    /// Loading of the predetermined driver on the jump (nonzero).
    pub kappa: f64,
    /// Instrument impact on the jump (nonzero).
    pub b: f64,
    /// Persistence of the predetermined driver (0 <= rho < 1).
    pub rho: f64,
}

impl StackelbergModel {
    pub fn new(delta: f64, kappa: f64, b: f64, rho: f64) -> Result<Self> {
        if !delta.is_finite() || delta <= 0.0 || delta >= 1.0 {
            return Err(Error::Domain(format!(
                "forward weight must lie in (0, 1), got {delta}"
            )));
        }
        if !kappa.is_finite() || kappa == 0.0 {
            return Err(Error::Domain(format!(
                "driver loading must be finite and nonzero, got {kappa}"
            )));
        }
        if !b.is_finite() || b == 0.0 {
            return Err(Error::Domain(format!(
                "instrument impact must be finite and nonzero, got {b}"
            )));
        }
        if !(0.0..1.0).contains(&rho) {
            return Err(Error::Domain(format!(
                "driver persistence must lie in [0, 1), got {rho}"
            )));
        }
        Ok(Self {
            delta,
            kappa,
            b,
            rho,
        })
    }

    /// Canonical parameterization used by the command-line scenarios.
    pub fn canonical() -> Self {
        Self {
            delta: 0.99,
            kappa: 1.0,
            b: -1.0,
            rho: 0.8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StackelbergPlan {
    pub model: StackelbergModel,
    pub loss_spec: LossSpec,
    /// Jump-variable path.
    pub pi_path: Vec<f64>,
    /// Instrument path.
    pub i_path: Vec<f64>,
    /// Commitment multiplier path; zero at the plan's start and at any
    /// re-optimization date.
    pub gamma_path: Vec<f64>,
    /// Predetermined driver path.
    pub z_path: Vec<f64>,
    /// Discounted loss evaluated from date 0.
    pub loss: f64,
    /// Set when the plan was re-solved mid-course.
    pub reoptimized_at: Option<usize>,
}

impl StackelbergPlan {
    pub fn horizon(&self) -> usize {
        self.pi_path.len() - 1
    }

    /// Plan CSV in the trajectory schema with the extra columns:
    /// `t,pi,i,eps,eta,gamma,z` (shock columns are zero for a deterministic
    /// plan).
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("t,pi,i,eps,eta,gamma,z\n");
        for t in 0..self.pi_path.len() {
            out.push_str(&format!(
                "{},{},{},0,0,{},{}\n",
                t, self.pi_path[t], self.i_path[t], self.gamma_path[t], self.z_path[t]
            ));
        }
        out
    }
}

/// Backward-forward solve of the tail problem starting from driver value
/// `z_start` with inherited multiplier `gamma_start`, over `n` periods.
fn solve_tail(
    model: &StackelbergModel,
    ls: &LossSpec,
    z_start: f64,
    gamma_start: f64,
    n: usize,
) -> (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>) {
    let (delta, kappa, b, rho) = (model.delta, model.kappa, model.b, model.rho);
    let (q, r, beta) = (ls.q, ls.r, ls.beta);
    let fwd2 = delta * delta / beta;
    let b2r = b * b / r;

    // pi_t = -m[t]*gamma_t + nmul[t]*z_t, solved backward from the pinned
    // beyond-horizon jump.
    let mut m = vec![0.0f64; n + 1];
    let mut nmul = vec![0.0f64; n + 1];
    for t in (0..n).rev() {
        let d = 1.0 + b2r * q + fwd2 * q * m[t + 1];
        m[t] = (fwd2 * m[t + 1] + b2r) / d;
        nmul[t] = (kappa + delta * rho * nmul[t + 1]) / d;
    }

    let mut pi = Vec::with_capacity(n);
    let mut instr = Vec::with_capacity(n);
    let mut gamma = Vec::with_capacity(n);
    let mut z_path = Vec::with_capacity(n);
    let mut g = gamma_start;
    let mut z = z_start;
    for t in 0..n {
        let p = -m[t] * g + nmul[t] * z;
        let mult = q * p + g;
        pi.push(p);
        instr.push(-(b / r) * mult);
        gamma.push(g);
        z_path.push(z);
        g = (delta / beta) * mult;
        z *= rho;
    }
    (pi, instr, gamma, z_path)
}

fn discounted_loss(ls: &LossSpec, pi: &[f64], instr: &[f64]) -> f64 {
    let mut loss = 0.0;
    let mut disc = 1.0;
    for (p, i) in pi.iter().zip(instr) {
        loss += 0.5 * disc * (ls.q * p * p + ls.r * i * i);
        disc *= ls.beta;
    }
    loss
}

/// Date-0 commitment plan over `horizon + 1` periods.
///
/// The initial multiplier is zero: the leader anchors the initial jump
/// freely, and `pi_path[0]` is linear in `z0` with a coefficient that
/// depends only on `q/r` and the model parameters.
pub fn stackelberg_commit(
    model: &StackelbergModel,
    ls: &LossSpec,
    z0: f64,
    horizon: usize,
) -> Result<StackelbergPlan> {
    if horizon < 2 {
        return Err(Error::Domain(format!(
            "plan horizon must be at least 2, got {horizon}"
        )));
    }
    let (pi_path, i_path, gamma_path, z_path) = solve_tail(model, ls, z0, 0.0, horizon + 1);
    let loss = discounted_loss(ls, &pi_path, &i_path);
    if !loss.is_finite() || pi_path.iter().any(|x| !x.is_finite()) {
        return Err(Error::NoStablePlan);
    }
    Ok(StackelbergPlan {
        model: *model,
        loss_spec: *ls,
        pi_path,
        i_path,
        gamma_path,
        z_path,
        loss,
        reoptimized_at: None,
    })
}

/// Re-solve the plan from date `s` with the commitment multiplier reset to
/// zero, splicing the new tail onto the old head.
///
/// Returns the spliced plan and the deviation `max_{t >= s} |pi_new - pi_old|`;
/// the deviation vanishes exactly when the inherited multiplier at `s` was
/// already zero.
pub fn stackelberg_reoptimize(
    plan: &StackelbergPlan,
    s: usize,
) -> Result<(StackelbergPlan, f64)> {
    let horizon = plan.horizon();
    if s >= horizon {
        return Err(Error::Domain(format!(
            "re-optimization date must precede the horizon {horizon}, got {s}"
        )));
    }
    let n_tail = plan.pi_path.len() - s;
    let (pi_new, i_new, gamma_new, z_new) =
        solve_tail(&plan.model, &plan.loss_spec, plan.z_path[s], 0.0, n_tail);

    let deviation = pi_new
        .iter()
        .zip(&plan.pi_path[s..])
        .map(|(new, old)| (new - old).abs())
        .fold(0.0, f64::max);

    let mut pi_path = plan.pi_path[..s].to_vec();
    pi_path.extend_from_slice(&pi_new);
    let mut i_path = plan.i_path[..s].to_vec();
    i_path.extend_from_slice(&i_new);
    let mut gamma_path = plan.gamma_path[..s].to_vec();
    gamma_path.extend_from_slice(&gamma_new);
    let mut z_path = plan.z_path[..s].to_vec();
    z_path.extend_from_slice(&z_new);

    let loss = discounted_loss(&plan.loss_spec, &pi_path, &i_path);
    let spliced = StackelbergPlan {
        model: plan.model,
        loss_spec: plan.loss_spec,
        pi_path,
        i_path,
        gamma_path,
        z_path,
        loss,
        reoptimized_at: Some(s),
    };
    Ok((spliced, deviation))
}

/// Date-0 loss of the proportional rule `i_t = f*pi_t` under the minimal
/// bounded forward solution `pi_t = kappa*z_t / (1 - b*f - delta*rho)`,
/// truncated at `horizon`. Returns `+inf` when no bounded forward solution
/// exists for that gain.
pub fn proportional_rule_loss(
    model: &StackelbergModel,
    ls: &LossSpec,
    f: f64,
    z0: f64,
    horizon: usize,
) -> f64 {
    let denom = 1.0 - model.b * f;
    if denom == 0.0 || (model.delta * model.rho).abs() >= denom.abs() {
        return f64::INFINITY;
    }
    let c = model.kappa / (denom - model.delta * model.rho);
    let weight = ls.q + ls.r * f * f;
    let ratio = ls.beta * model.rho * model.rho;
    let mut geom_sum = 0.0;
    let mut term = 1.0;
    for _ in 0..=horizon {
        geom_sum += term;
        term *= ratio;
    }
    0.5 * weight * c * c * z0 * z0 * geom_sum
}

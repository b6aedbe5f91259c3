//! Discounted scalar linear-quadratic regulation: Riccati solution and
//! optimal gain, closed-form policy loss, peg-optimality, and the
//! interval-minimax robust gain.

mod lqg;

pub use lqg::{lqg_simulate, LqgRun};

use crate::error::{Error, Result};
use crate::model_core::Transmission;

/// Default fixed-point tolerance for the Riccati iteration.
pub const DEFAULT_RICCATI_TOL: f64 = 1e-10;
/// Default iteration cap for the Riccati iteration.
pub const DEFAULT_RICCATI_MAX_ITER: usize = 1_000_000;

/// Quadratic preferences `1/2 * sum beta^t (q*pi^2 + r*i^2)`, with an
/// optional distorted steady state `pi_bias` for the discretionary
/// equilibrium analysis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossSpec {
    /// Target weight (>= 0).
    pub q: f64,
    /// Instrument weight (> 0).
    pub r: f64,
    /// Discount factor, 0 < beta <= 1.
    pub beta: f64,
    /// Policy maker's distorted steady state for the target (>= 0).
    pub pi_bias: f64,
}

impl LossSpec {
    pub fn new(q: f64, r: f64, beta: f64) -> Result<Self> {
        if !q.is_finite() || q < 0.0 {
            return Err(Error::Domain(format!(
                "target weight must be finite and >= 0, got {q}"
            )));
        }
        if !r.is_finite() || r <= 0.0 {
            return Err(Error::Domain(format!(
                "instrument weight must be finite and > 0, got {r}"
            )));
        }
        if !beta.is_finite() || beta <= 0.0 || beta > 1.0 {
            return Err(Error::Domain(format!(
                "discount factor must lie in (0, 1], got {beta}"
            )));
        }
        Ok(Self {
            q,
            r,
            beta,
            pi_bias: 0.0,
        })
    }

    pub fn with_bias(mut self, pi_bias: f64) -> Result<Self> {
        if !pi_bias.is_finite() || pi_bias < 0.0 {
            return Err(Error::Domain(format!(
                "distorted steady state must be finite and >= 0, got {pi_bias}"
            )));
        }
        self.pi_bias = pi_bias;
        Ok(self)
    }
}

/// Solution of the scalar discounted algebraic Riccati equation
/// `p = q + beta*a^2*p - (beta*a*b*p)^2 / (r + beta*b^2*p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiccatiSolution {
    /// Value-function coefficient: the optimal loss is `1/2 * p * pi0^2`.
    pub p: f64,
    /// Optimal gain `-beta*a*b*p / (r + beta*b^2*p)`.
    pub f_star: f64,
    /// Optimal closed-loop persistence `a + b*f_star`.
    pub lambda_star: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn gain_for(p: f64, a: f64, b: f64, r: f64, beta: f64) -> f64 {
    -beta * a * b * p / (r + beta * b * b * p)
}

/// Stabilizing root of the Riccati quadratic
/// `beta*b^2*p^2 + (r*(1 - beta*a^2) - beta*b^2*q)*p - q*r = 0` (requires
/// `b != 0`).
fn closed_form_root(a: f64, b: f64, q: f64, r: f64, beta: f64) -> f64 {
    let c2 = beta * b * b;
    let c1 = r * (1.0 - beta * a * a) - c2 * q;
    let c0 = -q * r;
    let disc = (c1 * c1 - 4.0 * c2 * c0).max(0.0);
    (-c1 + disc.sqrt()) / (2.0 * c2)
}

fn bellman_map(p: f64, a: f64, b: f64, q: f64, r: f64, beta: f64) -> f64 {
    let cross = beta * a * b * p;
    q + beta * a * a * p - cross * cross / (r + beta * b * b * p)
}

/// Solve the regulator by value iteration from `p = q`, cross-checked
/// against the closed-form stabilizing root of the Riccati quadratic.
///
/// With `q = 0` and `beta*a^2 > 1` the origin is a fixed point but not the
/// stabilizing one; the iteration restarts from the closed-form root in that
/// corner so the returned solution always satisfies
/// `beta*lambda_star^2 < 1`.
pub fn riccati_solve(
    tr: &Transmission,
    ls: &LossSpec,
    tol: f64,
    max_iter: usize,
) -> Result<RiccatiSolution> {
    if !tol.is_finite() || tol <= 0.0 || max_iter == 0 {
        return Err(Error::Domain(format!(
            "need tol > 0 and max_iter >= 1, got ({tol}, {max_iter})"
        )));
    }
    let (a, b) = (tr.a, tr.b);
    let (q, r, beta) = (ls.q, ls.r, ls.beta);
    let beta_a_sq = beta * a * a;

    if b == 0.0 {
        if beta_a_sq >= 1.0 {
            return Err(Error::UnboundedLoss { beta_a_sq });
        }
        let p = q / (1.0 - beta_a_sq);
        return Ok(RiccatiSolution {
            p,
            f_star: 0.0,
            lambda_star: a,
            iterations: 0,
            converged: true,
        });
    }
    if q == 0.0 && (beta_a_sq - 1.0).abs() <= 1e-12 {
        // Double root at p = 0 with beta*lambda^2 = 1: no stabilizing
        // solution exists on this knife edge.
        return Err(Error::UnboundedLoss { beta_a_sq });
    }

    let p_cf = closed_form_root(a, b, q, r, beta).max(0.0);

    // The stop is relative above unit scale: an absolute tolerance below
    // one ulp of a large fixed point could never be met.
    let iterate = |start: f64, budget: usize| -> (f64, usize, bool, f64) {
        let mut p = start;
        let mut residual = f64::INFINITY;
        for k in 0..budget {
            let next = bellman_map(p, a, b, q, r, beta);
            residual = (next - p).abs();
            p = next;
            if residual < tol * p.abs().max(1.0) {
                return (p, k + 1, true, residual);
            }
        }
        (p, budget, false, residual)
    };

    let (mut p, mut iterations, mut converged, mut residual) = iterate(q, max_iter);
    let stabilizing = |p: f64| beta * (a + b * gain_for(p, a, b, r, beta)).powi(2) < 1.0;

    if converged && !stabilizing(p) {
        // Unstable fixed point at the origin (q = 0, beta*a^2 > 1): polish
        // the closed-form stabilizing root instead.
        let (p2, it2, ok2, res2) = iterate(p_cf, max_iter);
        p = p2;
        iterations += it2;
        converged = ok2;
        residual = res2;
    }
    if !converged {
        return Err(Error::NoConvergence { max_iter, residual });
    }
    // Guard against iterating to a non-stabilizing root.
    if (p - p_cf).abs() > 1e-6 * (1.0 + p_cf.abs()) || !stabilizing(p) {
        return Err(Error::NoConvergence { max_iter, residual });
    }

    let f_star = gain_for(p, a, b, r, beta);
    Ok(RiccatiSolution {
        p,
        f_star,
        lambda_star: a + b * f_star,
        iterations,
        converged,
    })
}

/// Deterministic discounted loss of the proportional gain `f` from initial
/// deviation `pi0`: `1/2*(q + r*f^2)*pi0^2 / (1 - beta*(a + b*f)^2)`, or
/// `+inf` when the discounted sum diverges.
pub fn policy_loss(tr: &Transmission, ls: &LossSpec, f: f64, pi0: f64) -> f64 {
    if pi0 == 0.0 {
        // At the steady state the path is identically zero for any gain.
        return 0.0;
    }
    let lambda = tr.a + tr.b * f;
    let denom = 1.0 - ls.beta * lambda * lambda;
    if denom <= 0.0 {
        return f64::INFINITY;
    }
    0.5 * (ls.q + ls.r * f * f) * pi0 * pi0 / denom
}

/// Optimal closed-loop persistence along a grid of relative instrument
/// costs `r/q`; strictly increasing in the ratio and confined to
/// `(0, min(a, 1/(beta*a)))` for `a > 0`.
pub fn optimal_persistence_curve(
    tr: &Transmission,
    beta: f64,
    ratio_grid: &[f64],
) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(ratio_grid.len());
    for &ratio in ratio_grid {
        if !ratio.is_finite() || ratio <= 0.0 {
            return Err(Error::Domain(format!(
                "relative cost grid must be positive and finite, got {ratio}"
            )));
        }
        let ls = LossSpec::new(1.0, ratio, beta)?;
        let sol = riccati_solve(tr, &ls, DEFAULT_RICCATI_TOL, DEFAULT_RICCATI_MAX_ITER)?;
        out.push(sol.lambda_star);
    }
    Ok(out)
}

/// True when pegging the instrument is the optimal rule, i.e. the Riccati
/// gain vanishes (|f*| <= 1e-8).
pub fn peg_optimality_check(tr: &Transmission, ls: &LossSpec) -> Result<bool> {
    let sol = riccati_solve(tr, ls, DEFAULT_RICCATI_TOL, DEFAULT_RICCATI_MAX_ITER)?;
    Ok(sol.f_star.abs() <= 1e-8)
}

/// Evenly spaced grid including both endpoints.
pub fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points <= 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (points - 1) as f64;
    (0..points).map(|k| lo + step * k as f64).collect()
}

/// Gain minimizing the worst-case loss over an instrument-impact interval
/// `b_min <= b <= b_max < 0` of known sign.
///
/// Both the candidate gains and the interval are discretized; ties keep the
/// first (lowest) gain so the result is independent of evaluation order.
pub fn robust_minimax_gain(
    a: f64,
    b_min: f64,
    b_max: f64,
    ls: &LossSpec,
    pi0: f64,
    f_grid: &[f64],
    b_points: usize,
) -> Result<(f64, f64)> {
    if !(b_min <= b_max && b_max < 0.0) {
        return Err(Error::Domain(format!(
            "need a sign-certain interval b_min <= b_max < 0, got [{b_min}, {b_max}]"
        )));
    }
    if f_grid.is_empty() || b_points == 0 {
        return Err(Error::Domain("grids must be nonempty".into()));
    }
    let b_grid = linspace(b_min, b_max, b_points);
    let mut best: Option<(f64, f64)> = None;
    for &f in f_grid {
        let mut worst = 0.0f64;
        for &b in &b_grid {
            let tr = Transmission { a, b, sigma_eps: 0.0 };
            worst = worst.max(policy_loss(&tr, ls, f, pi0));
            if worst.is_infinite() {
                break;
            }
        }
        match best {
            Some((_, w)) if worst >= w => {}
            _ => best = Some((f, worst)),
        }
    }
    let (f_robust, worst_case) = best.unwrap();
    if worst_case.is_infinite() {
        return Err(Error::NoRobustStabilizer);
    }
    Ok((f_robust, worst_case))
}

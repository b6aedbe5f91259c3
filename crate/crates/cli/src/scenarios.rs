//! One runner per scenario. Each produces a CSV artifact (full-precision
//! values) plus a short human summary (4 significant digits).

use stabilab::*;

use crate::config::{Params, ScenarioConfig};

/// Round to 4 significant digits for the human summary.
pub fn sig4(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-4..6).contains(&mag) {
        return format!("{x:.3e}");
    }
    let decimals = (3 - mag).max(0) as usize;
    format!("{x:.decimals$}")
}

pub struct ScenarioOutput {
    pub artifact: String,
    pub summary: String,
}

/// Rules-versus-discretion comparison rows; each row restates the classify,
/// loss and variance outputs for one gain.
pub struct ComparisonReport {
    pub rows: Vec<ComparisonRow>,
}

pub struct ComparisonRow {
    pub policy: &'static str,
    pub f: f64,
    pub lambda: f64,
    pub feedback: FeedbackClass,
    pub stability: StabilityClass,
    pub loss: f64,
    pub variance: f64,
}

impl ComparisonReport {
    pub fn to_csv_string(&self) -> String {
        let mut out =
            String::from("policy,f,lambda,feedback_class,stability_class,loss,variance\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                row.policy, row.f, row.lambda, row.feedback, row.stability, row.loss, row.variance
            ));
        }
        out
    }
}

pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioOutput> {
    let params = Params(&config.parameters);
    let seed = config.seed();
    match config.scenario.as_str() {
        "classify" => classify_scenario(&params),
        "simulate" => simulate_scenario(&params, seed),
        "cobweb" => cobweb_scenario(&params),
        "lqr" => lqr_scenario(&params),
        "robust" => robust_scenario(&params),
        "lqg" => lqg_scenario(&params, seed),
        "barro_gordon" => barro_gordon_scenario(&params),
        "misperception" => misperception_scenario(&params),
        "stackelberg" => stackelberg_scenario(&params),
        "identify" => identify_scenario(&params, seed),
        "price_puzzle" => price_puzzle_scenario(&params, seed),
        "fit_rule" => fit_rule_scenario(&params),
        "welfare" => welfare_scenario(&params),
        "compare" => compare_scenario(&params),
        other => Err(Error::Domain(format!("unknown scenario `{other}`"))),
    }
}

fn classify_scenario(p: &Params) -> Result<ScenarioOutput> {
    let tr = Transmission::deterministic(p.num("a"), p.num("b"))?;
    let f = p.num_or("f", 0.0);
    let cl = classify_gain(&tr, f);
    let artifact = format!(
        "lambda,feedback_class,stability_class\n{},{},{}\n",
        cl.lambda, cl.feedback_class, cl.stability_class
    );
    let summary = format!(
        "closed loop under f = {}: lambda = {}, {} / {}",
        sig4(f),
        sig4(cl.lambda),
        cl.feedback_class,
        cl.stability_class
    );
    Ok(ScenarioOutput { artifact, summary })
}

fn simulate_scenario(p: &Params, seed: u64) -> Result<ScenarioOutput> {
    let tr = Transmission::new(p.num("a"), p.num("b"), p.num_or("sigma_eps", 0.0))?;
    let rule = p.rule();
    let traj = simulate_trajectory(
        &tr,
        &rule,
        p.num_or("pi0", 1.0),
        p.uint("horizon"),
        p.num_or("sigma_eta", 0.0),
        seed,
    )?;
    let n = traj.len() as f64;
    let mean = traj.pi.iter().sum::<f64>() / n;
    let var = traj.pi.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    let summary = format!(
        "{} periods simulated (seed {seed}): final pi = {}, sample mean = {}, sample variance = {}",
        traj.len(),
        sig4(*traj.pi.last().unwrap()),
        sig4(mean),
        sig4(var)
    );
    Ok(ScenarioOutput {
        artifact: traj.to_csv_string(),
        summary,
    })
}

fn cobweb_scenario(p: &Params) -> Result<ScenarioOutput> {
    let cw = CobwebParams::new(
        p.num("f_demand"),
        p.num("b_supply"),
        p.num_or("e0", 1.0),
        p.num_or("p_star", 0.0),
    )?;
    let run = cobweb_simulate(&cw, p.uint("horizon"))?;
    let mut artifact = String::from("t,excess_supply,price\n");
    for t in 0..run.excess_supply.len() {
        artifact.push_str(&format!(
            "{},{},{}\n",
            t, run.excess_supply[t], run.price[t]
        ));
    }
    let summary = format!(
        "loop coefficient bf = {}: regime {}, final |excess supply| = {}",
        sig4(cw.bf()),
        run.regime,
        sig4(run.excess_supply.last().unwrap().abs())
    );
    Ok(ScenarioOutput { artifact, summary })
}

fn lqr_scenario(p: &Params) -> Result<ScenarioOutput> {
    let tr = Transmission::deterministic(p.num("a"), p.num("b"))?;
    let ls = LossSpec::new(p.num("q"), p.num("r"), p.num_or("beta", 1.0))?;
    let sol = riccati_solve(&tr, &ls, DEFAULT_RICCATI_TOL, DEFAULT_RICCATI_MAX_ITER)?;
    let artifact = format!(
        "p,f_star,lambda_star,iterations,converged\n{},{},{},{},{}\n",
        sol.p, sol.f_star, sol.lambda_star, sol.iterations, sol.converged
    );
    let summary = format!(
        "regulator solution: p = {}, f* = {}, lambda* = {} ({} iterations)",
        sig4(sol.p),
        sig4(sol.f_star),
        sig4(sol.lambda_star),
        sol.iterations
    );
    Ok(ScenarioOutput { artifact, summary })
}

fn robust_scenario(p: &Params) -> Result<ScenarioOutput> {
    let ls = LossSpec::new(p.num("q"), p.num("r"), p.num_or("beta", 1.0))?;
    let f_grid = linspace(
        p.num_or("f_min", -10.0),
        p.num_or("f_max", 10.0),
        p.uint_or("f_points", 2001),
    );
    let (f_robust, worst) = robust_minimax_gain(
        p.num("a"),
        p.num("b_min"),
        p.num("b_max"),
        &ls,
        p.num_or("pi0", 1.0),
        &f_grid,
        p.uint_or("b_points", 101),
    )?;
    let artifact = format!("f_robust,worst_case_loss\n{f_robust},{worst}\n");
    let summary = format!(
        "minimax gain over b in [{}, {}]: f_robust = {}, worst-case loss = {}",
        sig4(p.num("b_min")),
        sig4(p.num("b_max")),
        sig4(f_robust),
        sig4(worst)
    );
    Ok(ScenarioOutput { artifact, summary })
}

fn lqg_scenario(p: &Params, seed: u64) -> Result<ScenarioOutput> {
    let tr = Transmission::new(p.num("a"), p.num("b"), p.num("sigma_eps"))?;
    let ls = LossSpec::new(p.num("q"), p.num("r"), p.num_or("beta", 1.0))?;
    let run = lqg_simulate(
        &tr,
        &ls,
        p.num("obs_noise_std"),
        p.num_or("pi0", 1.0),
        p.uint("horizon"),
        seed,
    )?;
    let summary = format!(
        "filtered regulator (seed {seed}): control gain = {}, terminal filter gain = {}, realized loss = {}",
        sig4(run.control_gain),
        sig4(*run.filter_gain.last().unwrap()),
        sig4(run.realized_loss)
    );
    Ok(ScenarioOutput {
        artifact: run.to_csv_string(),
        summary,
    })
}

fn barro_gordon_scenario(p: &Params) -> Result<ScenarioOutput> {
    let ls = LossSpec::new(p.num("q"), p.num("r"), p.num_or("beta", 1.0))?
        .with_bias(p.num("pi_bias"))?;
    let eq = barro_gordon_equilibrium(p.num("b"), &ls)?;
    let artifact = format!(
        "pi_star,i_star,loss_discretion,loss_rules\n{},{},{},{}\n",
        eq.pi_star, eq.i_star, eq.loss_discretion, eq.loss_rules
    );
    let summary = format!(
        "discretionary equilibrium: pi* = {}, i* = {}; social loss {} vs peg {}",
        sig4(eq.pi_star),
        sig4(eq.i_star),
        sig4(eq.loss_discretion),
        sig4(eq.loss_rules)
    );
    Ok(ScenarioOutput { artifact, summary })
}

fn misperception_scenario(p: &Params) -> Result<ScenarioOutput> {
    let tr = Transmission::deterministic(p.num("a"), p.num("b"))?;
    let ls = LossSpec::new(p.num("q"), p.num("r"), p.num_or("beta", 1.0))?;
    let run = kp_misperception_iterate(&tr, &ls, p.uint("n_iter"))?;
    let mut artifact = String::from("k,f,perceived_a,true_lambda,loss\n");
    for k in 0..run.f_path.len() {
        artifact.push_str(&format!(
            "{},{},{},{},{}\n",
            k, run.f_path[k], run.perceived_a_path[k], run.true_lambda_path[k], run.loss_path[k]
        ));
    }
    let summary = format!(
        "re-estimation loop: verdict {}, final gain = {}, final loss = {} vs peg loss {}",
        run.verdict,
        sig4(*run.f_path.last().unwrap()),
        sig4(*run.loss_path.last().unwrap()),
        sig4(run.rules_loss)
    );
    Ok(ScenarioOutput { artifact, summary })
}

fn stackelberg_scenario(p: &Params) -> Result<ScenarioOutput> {
    let model = StackelbergModel::new(
        p.num_or("delta", 0.99),
        p.num_or("kappa", 1.0),
        p.num_or("b", -1.0),
        p.num_or("rho", 0.8),
    )?;
    let ls = LossSpec::new(p.num("q"), p.num("r"), p.num_or("beta", 0.99))?;
    let plan = stackelberg_commit(&model, &ls, p.num("z0"), p.uint("horizon"))?;
    match p.uint_opt("reoptimize_at") {
        Some(s) => {
            let (spliced, deviation) = stackelberg_reoptimize(&plan, s)?;
            let summary = format!(
                "commitment loss = {}; re-optimized at t = {s}: deviation = {}, spliced date-0 total = {}",
                sig4(plan.loss),
                sig4(deviation),
                sig4(spliced.loss)
            );
            Ok(ScenarioOutput {
                artifact: spliced.to_csv_string(),
                summary,
            })
        }
        None => {
            let summary = format!(
                "commitment plan: loss = {}, initial jump = {}, first multiplier = {}",
                sig4(plan.loss),
                sig4(plan.pi_path[0]),
                sig4(plan.gamma_path[1])
            );
            Ok(ScenarioOutput {
                artifact: plan.to_csv_string(),
                summary,
            })
        }
    }
}

fn identify_scenario(p: &Params, seed: u64) -> Result<ScenarioOutput> {
    let tr = Transmission::new(p.num("a"), p.num("b"), p.num("sigma_eps"))?;
    let method = match p.str_or("method", "ols") {
        "iv" => EstimationMethod::Iv,
        "ols" => EstimationMethod::Ols,
        other => {
            return Err(Error::Domain(format!(
                "unknown method `{other}`; expected ols | iv"
            )))
        }
    };
    let traj = simulate_trajectory(
        &tr,
        &Rule::Proportional { f: p.num("f") },
        p.num_or("pi0", 0.0),
        p.uint("horizon"),
        p.num("sigma_eta"),
        seed,
    )?;
    let fit = estimate_transmission(&traj, method)?;
    let summary = format!(
        "estimated transmission (n = {}): a_hat = {} ({}), b_hat = {} ({}), r2 = {}",
        fit.n,
        sig4(fit.coefficient("a_hat").unwrap()),
        sig4(fit.stderr("a_hat").unwrap()),
        sig4(fit.coefficient("b_hat").unwrap()),
        sig4(fit.stderr("b_hat").unwrap()),
        sig4(fit.r2)
    );
    Ok(ScenarioOutput {
        artifact: fit.to_csv_string(),
        summary,
    })
}

fn price_puzzle_scenario(p: &Params, seed: u64) -> Result<ScenarioOutput> {
    let tr = Transmission::new(p.num("a"), p.num("b"), p.num("sigma_eps"))?;
    let f = p.num("f");
    let traj = simulate_trajectory(
        &tr,
        &Rule::Proportional { f },
        0.0,
        p.uint("horizon"),
        p.num("sigma_eta"),
        seed,
    )?;
    let puzzle = price_puzzle_demo(&traj, &tr)?;
    let artifact = format!(
        "naive_b_hat,naive_stderr,sign_flip,corrected_b_hat,advised_gain,perceived_lambda,true_lambda,mis_advice_ordering\n{},{},{},{},{},{},{},{}\n",
        puzzle.naive_b_hat,
        puzzle.naive_stderr,
        puzzle.sign_flip,
        puzzle.corrected_b_hat,
        puzzle.advised_gain,
        puzzle.perceived_lambda,
        puzzle.true_lambda,
        puzzle.mis_advice_ordering
    );
    let summary = format!(
        "naive slope = {} (sign flip: {}), corrected b_hat = {}; advice from the naive estimate moves persistence {} -> {}",
        sig4(puzzle.naive_b_hat),
        puzzle.sign_flip,
        sig4(puzzle.corrected_b_hat),
        sig4(tr.a),
        sig4(puzzle.true_lambda)
    );
    Ok(ScenarioOutput { artifact, summary })
}

fn fit_rule_scenario(p: &Params) -> Result<ScenarioOutput> {
    let data = RuleData::from_csv_path(p.string("input_path"))?;
    let spec = match p.string("spec").as_str() {
        "taylor" => PolicySpec::Taylor,
        "inertial" => PolicySpec::Inertial,
        other => {
            return Err(Error::Domain(format!(
                "unknown rule spec `{other}`; expected taylor | inertial"
            )))
        }
    };
    let fit = fit_policy_rule(&data, spec)?;
    let coefs: Vec<String> = fit
        .regression
        .names
        .iter()
        .zip(&fit.regression.coefficients)
        .map(|(n, c)| format!("{n} = {}", sig4(*c)))
        .collect();
    let mut summary = format!(
        "fitted rule on {} observations: {}, r2 = {}",
        fit.regression.n,
        coefs.join(", "),
        sig4(fit.regression.r2)
    );
    if let Some(lr) = fit.long_run_gap_sensitivity {
        summary.push_str(&format!(", long-run gap sensitivity = {}", sig4(lr)));
    }
    Ok(ScenarioOutput {
        artifact: fit.to_csv_string(),
        summary,
    })
}

fn welfare_scenario(p: &Params) -> Result<ScenarioOutput> {
    let ws = WelfareSpec::new(p.num("gamma"), p.num("sigma_x"))?;
    let cost = lucas_welfare_cost(&ws);
    let artifact = format!("gamma,sigma_x,cost\n{},{},{cost}\n", ws.gamma, ws.sigma_x);
    let summary = format!(
        "certainty-equivalent cost of fluctuations: {} of steady consumption",
        sig4(cost)
    );
    Ok(ScenarioOutput { artifact, summary })
}

fn compare_scenario(p: &Params) -> Result<ScenarioOutput> {
    let tr = Transmission::new(p.num("a"), p.num("b"), p.num_or("sigma_eps", 1.0))?;
    let ls = LossSpec::new(p.num("q"), p.num("r"), p.num_or("beta", 1.0))?;
    let pi0 = p.num_or("pi0", 1.0);
    let mut rows = Vec::new();
    for f in p.num_array("gains") {
        let cl = classify_gain(&tr, f);
        let variance = ar1_variance(cl.lambda, tr.sigma_eps).unwrap_or(f64::INFINITY);
        rows.push(ComparisonRow {
            policy: if f == 0.0 { "rule_peg" } else { "discretion" },
            f,
            lambda: cl.lambda,
            feedback: cl.feedback_class,
            stability: cl.stability_class,
            loss: policy_loss(&tr, &ls, f, pi0),
            variance,
        });
    }
    let report = ComparisonReport { rows };
    let mut summary = String::from("policy comparison:\n");
    for row in &report.rows {
        summary.push_str(&format!(
            "  {:<11} f = {:<8} lambda = {:<8} {} / {}, loss = {}, variance = {}\n",
            row.policy,
            sig4(row.f),
            sig4(row.lambda),
            row.feedback,
            row.stability,
            sig4(row.loss),
            sig4(row.variance)
        ));
    }
    summary.pop();
    Ok(ScenarioOutput {
        artifact: report.to_csv_string(),
        summary,
    })
}

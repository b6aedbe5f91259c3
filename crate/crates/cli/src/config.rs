//! Scenario configuration: a JSON file with the scenario name, a parameter
//! map, an optional seed and an optional output path. `--set key=value`
//! overrides take precedence over the file.

use std::fmt;
use std::fs;
use std::path::Path;

use serde::Deserialize;
use serde_json::{Map, Value};

pub const SCENARIOS: &[&str] = &[
    "classify",
    "simulate",
    "cobweb",
    "lqr",
    "robust",
    "lqg",
    "barro_gordon",
    "misperception",
    "stackelberg",
    "identify",
    "price_puzzle",
    "fit_rule",
    "welfare",
    "compare",
];

#[derive(Debug, Clone, Deserialize)]
pub struct ScenarioConfig {
    pub scenario: String,
    #[serde(default)]
    pub parameters: Map<String, Value>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub output_path: Option<String>,
}

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ConfigError: {}", self.0)
    }
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| ConfigError(format!("cannot parse {}: {e}", path.display())))
    }

    /// Apply a `key=value` override to the parameter map. Values parse as
    /// JSON when possible and fall back to strings.
    pub fn apply_override(&mut self, setting: &str) -> Result<(), ConfigError> {
        let (key, raw) = setting
            .split_once('=')
            .ok_or_else(|| ConfigError(format!("override `{setting}` is not KEY=VALUE")))?;
        let value = serde_json::from_str::<Value>(raw).unwrap_or(Value::String(raw.to_string()));
        self.parameters.insert(key.to_string(), value);
        Ok(())
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn output_path(&self) -> String {
        self.output_path
            .clone()
            .unwrap_or_else(|| format!("{}.csv", self.scenario))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Num,
    Int,
    Str,
    Choice(&'static [&'static str]),
    Rule,
    NumArray,
}

fn describe(kind: Kind) -> String {
    match kind {
        Kind::Num => "a number".into(),
        Kind::Int => "a nonnegative integer".into(),
        Kind::Str => "a string".into(),
        Kind::Choice(options) => format!("one of {}", options.join(" | ")),
        Kind::Rule => "a rule object".into(),
        Kind::NumArray => "an array of numbers".into(),
    }
}

pub struct ParamSpec {
    pub name: &'static str,
    pub kind: Kind,
    pub required: bool,
}

const fn p(name: &'static str, kind: Kind, required: bool) -> ParamSpec {
    ParamSpec {
        name,
        kind,
        required,
    }
}

use Kind::*;

const CLASSIFY: &[ParamSpec] = &[p("a", Num, true), p("b", Num, true), p("f", Num, false)];
const SIMULATE: &[ParamSpec] = &[
    p("a", Num, true),
    p("b", Num, true),
    p("sigma_eps", Num, false),
    p("rule", Rule, true),
    p("pi0", Num, false),
    p("horizon", Int, true),
    p("sigma_eta", Num, false),
];
const COBWEB: &[ParamSpec] = &[
    p("f_demand", Num, true),
    p("b_supply", Num, true),
    p("e0", Num, false),
    p("p_star", Num, false),
    p("horizon", Int, true),
];
const LQR: &[ParamSpec] = &[
    p("a", Num, true),
    p("b", Num, true),
    p("q", Num, true),
    p("r", Num, true),
    p("beta", Num, false),
];
const ROBUST: &[ParamSpec] = &[
    p("a", Num, true),
    p("b_min", Num, true),
    p("b_max", Num, true),
    p("q", Num, true),
    p("r", Num, true),
    p("beta", Num, false),
    p("pi0", Num, false),
    p("f_min", Num, false),
    p("f_max", Num, false),
    p("f_points", Int, false),
    p("b_points", Int, false),
];
const LQG: &[ParamSpec] = &[
    p("a", Num, true),
    p("b", Num, true),
    p("sigma_eps", Num, true),
    p("q", Num, true),
    p("r", Num, true),
    p("beta", Num, false),
    p("obs_noise_std", Num, true),
    p("pi0", Num, false),
    p("horizon", Int, true),
];
const BARRO_GORDON: &[ParamSpec] = &[
    p("b", Num, true),
    p("q", Num, true),
    p("r", Num, true),
    p("beta", Num, false),
    p("pi_bias", Num, true),
];
const MISPERCEPTION: &[ParamSpec] = &[
    p("a", Num, true),
    p("b", Num, true),
    p("q", Num, true),
    p("r", Num, true),
    p("beta", Num, false),
    p("n_iter", Int, true),
];
const STACKELBERG: &[ParamSpec] = &[
    p("delta", Num, false),
    p("kappa", Num, false),
    p("b", Num, false),
    p("rho", Num, false),
    p("q", Num, true),
    p("r", Num, true),
    p("beta", Num, false),
    p("z0", Num, true),
    p("horizon", Int, true),
    p("reoptimize_at", Int, false),
];
const IDENTIFY: &[ParamSpec] = &[
    p("a", Num, true),
    p("b", Num, true),
    p("f", Num, true),
    p("sigma_eps", Num, true),
    p("sigma_eta", Num, true),
    p("pi0", Num, false),
    p("horizon", Int, true),
    p("method", Choice(&["ols", "iv"]), false),
];
const PRICE_PUZZLE: &[ParamSpec] = &[
    p("a", Num, true),
    p("b", Num, true),
    p("f", Num, true),
    p("sigma_eps", Num, true),
    p("sigma_eta", Num, true),
    p("horizon", Int, true),
];
const FIT_RULE: &[ParamSpec] = &[
    p("input_path", Str, true),
    p("spec", Choice(&["taylor", "inertial"]), true),
];
const WELFARE: &[ParamSpec] = &[p("gamma", Num, true), p("sigma_x", Num, true)];
const COMPARE: &[ParamSpec] = &[
    p("a", Num, true),
    p("b", Num, true),
    p("sigma_eps", Num, false),
    p("q", Num, true),
    p("r", Num, true),
    p("beta", Num, false),
    p("pi0", Num, false),
    p("gains", NumArray, true),
];

pub fn schema(scenario: &str) -> Option<&'static [ParamSpec]> {
    match scenario {
        "classify" => Some(CLASSIFY),
        "simulate" => Some(SIMULATE),
        "cobweb" => Some(COBWEB),
        "lqr" => Some(LQR),
        "robust" => Some(ROBUST),
        "lqg" => Some(LQG),
        "barro_gordon" => Some(BARRO_GORDON),
        "misperception" => Some(MISPERCEPTION),
        "stackelberg" => Some(STACKELBERG),
        "identify" => Some(IDENTIFY),
        "price_puzzle" => Some(PRICE_PUZZLE),
        "fit_rule" => Some(FIT_RULE),
        "welfare" => Some(WELFARE),
        "compare" => Some(COMPARE),
        _ => None,
    }
}

fn kind_matches(kind: Kind, value: &Value) -> bool {
    match kind {
        Kind::Num => value.as_f64().is_some(),
        Kind::Int => value.as_u64().is_some(),
        Kind::Str => value.is_string(),
        Kind::Choice(options) => value
            .as_str()
            .is_some_and(|s| options.contains(&s)),
        Kind::NumArray => value
            .as_array()
            .is_some_and(|xs| xs.iter().all(|x| x.as_f64().is_some())),
        Kind::Rule => rule_diagnostics(value).is_empty(),
    }
}

fn rule_diagnostics(value: &Value) -> Vec<String> {
    let Some(obj) = value.as_object() else {
        return vec!["parameter `rule` must be an object with a `type` field".into()];
    };
    let Some(kind) = obj.get("type").and_then(|v| v.as_str()) else {
        return vec!["parameter `rule.type` missing or not a string".into()];
    };
    let needs: &[&str] = match kind {
        "peg" => &[],
        "proportional" => &["f"],
        "pid" => &["fp", "fi", "fd"],
        "inertial" => &["rho_i", "f_x"],
        other => {
            return vec![format!(
                "unknown rule type `{other}`; expected peg | proportional | pid | inertial"
            )]
        }
    };
    needs
        .iter()
        .filter(|field| obj.get(**field).and_then(|v| v.as_f64()).is_none())
        .map(|field| format!("parameter `rule.{field}` missing or not a number"))
        .collect()
}

/// Diagnostics for a config; empty exactly when `run` would pass its
/// parameter checks.
pub fn validate(config: &ScenarioConfig) -> Vec<String> {
    let Some(specs) = schema(&config.scenario) else {
        return vec![format!(
            "unknown scenario `{}`; valid scenarios: {}",
            config.scenario,
            SCENARIOS.join(", ")
        )];
    };
    let mut diags = Vec::new();
    for spec in specs {
        match config.parameters.get(spec.name) {
            None if spec.required => {
                diags.push(format!("missing required parameter `{}`", spec.name));
            }
            None => {}
            Some(v) => {
                if spec.kind == Kind::Rule {
                    diags.extend(rule_diagnostics(v));
                } else if !kind_matches(spec.kind, v) {
                    diags.push(format!(
                        "parameter `{}` must be {}",
                        spec.name,
                        describe(spec.kind)
                    ));
                }
            }
        }
    }
    diags
}

/// Typed parameter access used by the scenario runners; validation has
/// already guaranteed presence and types.
pub struct Params<'a>(pub &'a Map<String, Value>);

impl<'a> Params<'a> {
    pub fn num(&self, name: &str) -> f64 {
        self.0.get(name).and_then(|v| v.as_f64()).unwrap()
    }

    pub fn num_or(&self, name: &str, default: f64) -> f64 {
        self.0.get(name).and_then(|v| v.as_f64()).unwrap_or(default)
    }

    pub fn uint(&self, name: &str) -> usize {
        self.0.get(name).and_then(|v| v.as_u64()).unwrap() as usize
    }

    pub fn uint_opt(&self, name: &str) -> Option<usize> {
        self.0.get(name).and_then(|v| v.as_u64()).map(|v| v as usize)
    }

    pub fn uint_or(&self, name: &str, default: usize) -> usize {
        self.uint_opt(name).unwrap_or(default)
    }

    pub fn str_or(&self, name: &str, default: &'a str) -> &'a str {
        self.0
            .get(name)
            .and_then(|v| v.as_str())
            .unwrap_or(default)
    }

    pub fn string(&self, name: &str) -> String {
        self.0
            .get(name)
            .and_then(|v| v.as_str())
            .unwrap()
            .to_string()
    }

    pub fn num_array(&self, name: &str) -> Vec<f64> {
        self.0
            .get(name)
            .and_then(|v| v.as_array())
            .map(|xs| xs.iter().filter_map(|x| x.as_f64()).collect())
            .unwrap()
    }

    pub fn rule(&self) -> stabilab::Rule {
        let obj = self.0.get("rule").and_then(|v| v.as_object()).unwrap();
        let get = |f: &str| obj.get(f).and_then(|v| v.as_f64()).unwrap();
        match obj.get("type").and_then(|v| v.as_str()).unwrap() {
            "peg" => stabilab::Rule::Peg,
            "proportional" => stabilab::Rule::Proportional { f: get("f") },
            "pid" => stabilab::Rule::Pid {
                fp: get("fp"),
                fi: get("fi"),
                fd: get("fd"),
            },
            "inertial" => stabilab::Rule::Inertial {
                rho_i: get("rho_i"),
                f_x: get("f_x"),
            },
            _ => unreachable!("validated earlier"),
        }
    }
}

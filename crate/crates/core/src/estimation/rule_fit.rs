//! Fitting interest-rate rules to observed data.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::estimation::{ols, RegressionResult};

/// Minimum sample size accepted for a rule fit.
pub const MIN_OBSERVATIONS: usize = 8;

/// Observed policy data: rate `i`, inflation `pi` and gap `x`, with opaque
/// date labels.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleData {
    pub date: Vec<String>,
    pub i: Vec<f64>,
    pub pi: Vec<f64>,
    pub x: Vec<f64>,
}

impl RuleData {
    pub fn len(&self) -> usize {
        self.date.len()
    }

    pub fn is_empty(&self) -> bool {
        self.date.is_empty()
    }

    /// Parse CSV with the exact header `date,i,pi,x`, rows in time order.
    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::SchemaError("empty rule-data CSV".into()))?;
        if header.trim() != "date,i,pi,x" {
            return Err(Error::SchemaError(format!(
                "expected header `date,i,pi,x`, got `{header}`"
            )));
        }
        let mut data = RuleData {
            date: Vec::new(),
            i: Vec::new(),
            pi: Vec::new(),
            x: Vec::new(),
        };
        for (k, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 4 {
                return Err(Error::SchemaError(format!(
                    "row {} has {} fields, expected 4",
                    k + 2,
                    fields.len()
                )));
            }
            let parse = |s: &str, what: &str| -> Result<f64> {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::SchemaError(format!("bad {what} value `{s}`")))
            };
            data.date.push(fields[0].trim().to_string());
            data.i.push(parse(fields[1], "i")?);
            data.pi.push(parse(fields[2], "pi")?);
            data.x.push(parse(fields[3], "x")?);
        }
        Ok(data)
    }

    pub fn from_csv_path<P: AsRef<Path>>(path: P) -> Result<Self> {
        Self::from_csv_str(&fs::read_to_string(path)?)
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("date,i,pi,x\n");
        for k in 0..self.len() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                self.date[k], self.i[k], self.pi[k], self.x[k]
            ));
        }
        out
    }
}

/// Which rule form to fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolicySpec {
    /// `i = pi_coef*pi + gap_coef*x + intercept`.
    Taylor,
    /// `i = rho_i*i_{-1} + f_x*x`.
    Inertial,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolicyRuleFit {
    pub regression: RegressionResult,
    /// `f_x / (1 - rho_i)` for the inertial form; the rate's cumulated
    /// response to a sustained unit gap.
    pub long_run_gap_sensitivity: Option<f64>,
}

impl PolicyRuleFit {
    /// Regression CSV plus a `long_run_gap_sensitivity,<value>` line for the
    /// inertial form.
    pub fn to_csv_string(&self) -> String {
        let mut out = self.regression.to_csv_string();
        if let Some(lr) = self.long_run_gap_sensitivity {
            out.push_str(&format!("long_run_gap_sensitivity,{lr}\n"));
        }
        out
    }
}

/// Fit the requested rule form to the data.
pub fn fit_policy_rule(data: &RuleData, spec: PolicySpec) -> Result<PolicyRuleFit> {
    let n = data.len();
    if n < MIN_OBSERVATIONS {
        return Err(Error::InsufficientData {
            needed: MIN_OBSERVATIONS,
            got: n,
        });
    }
    match spec {
        PolicySpec::Taylor => {
            let ones = vec![1.0; n];
            let regression = ols(
                &data.i,
                &[&data.pi, &data.x, &ones],
                &["pi_coef", "gap_coef", "intercept"],
            )?;
            Ok(PolicyRuleFit {
                regression,
                long_run_gap_sensitivity: None,
            })
        }
        PolicySpec::Inertial => {
            let y = &data.i[1..];
            let lagged = &data.i[..n - 1];
            let gap = &data.x[1..];
            let regression = ols(y, &[lagged, gap], &["rho_i", "f_x"])?;
            let rho_i = regression.coefficients[0];
            let f_x = regression.coefficients[1];
            let long_run = if (1.0 - rho_i).abs() > 1e-12 {
                f_x / (1.0 - rho_i)
            } else {
                f64::INFINITY
            };
            Ok(PolicyRuleFit {
                regression,
                long_run_gap_sensitivity: Some(long_run),
            })
        }
    }
}

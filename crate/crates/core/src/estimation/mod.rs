//! Small-regression workhorse (least squares and two-stage least squares),
//! the scalar filter, identification experiments, rule fitting, and the
//! welfare-cost calculator.

mod identification;
mod kalman;
mod rule_fit;
mod welfare;

pub use identification::{
    estimate_transmission, price_puzzle_demo, EstimationMethod, PricePuzzle,
};
pub use kalman::{kalman_step, KalmanState};
pub use rule_fit::{fit_policy_rule, PolicyRuleFit, PolicySpec, RuleData};
pub use welfare::{lucas_welfare_cost, WelfareSpec};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Gram-matrix condition number beyond which a design is treated as
/// unidentified; exact singularity is never attained in floating point.
pub const MAX_GRAM_CONDITION: f64 = 1e12;

/// Coefficient estimates with conventional homoskedastic standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionResult {
    pub names: Vec<String>,
    pub coefficients: Vec<f64>,
    pub stderrs: Vec<f64>,
    /// Coefficient of determination; centered when an intercept column is
    /// present, uncentered otherwise.
    pub r2: f64,
    pub n: usize,
}

impl RegressionResult {
    pub fn coefficient(&self, name: &str) -> Option<f64> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|k| self.coefficients[k])
    }

    pub fn stderr(&self, name: &str) -> Option<f64> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|k| self.stderrs[k])
    }

    /// CSV rows `name,estimate,stderr` followed by an `r2,<value>` line.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("name,estimate,stderr\n");
        for k in 0..self.names.len() {
            out.push_str(&format!(
                "{},{},{}\n",
                self.names[k], self.coefficients[k], self.stderrs[k]
            ));
        }
        out.push_str(&format!("r2,{}\n", self.r2));
        out
    }
}

fn build_matrix(rows: usize, cols: &[&[f64]]) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols.len(), |r, c| cols[c][r])
}

fn condition_of_gram(gram: &DMatrix<f64>) -> f64 {
    let eig = gram.clone().symmetric_eigen();
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for &v in eig.eigenvalues.iter() {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if lo <= 0.0 {
        f64::INFINITY
    } else {
        hi / lo
    }
}

fn check_shapes(y: &[f64], regressors: &[&[f64]]) -> Result<()> {
    let n = y.len();
    let k = regressors.len();
    if k == 0 {
        return Err(Error::Domain("need at least one regressor".into()));
    }
    if regressors.iter().any(|x| x.len() != n) {
        return Err(Error::Domain(
            "regressor series must match the outcome length".into(),
        ));
    }
    if n <= k {
        return Err(Error::InsufficientData { needed: k + 1, got: n });
    }
    Ok(())
}

fn r_squared(y: &[f64], residuals: &DVector<f64>, centered: bool) -> f64 {
    let n = y.len() as f64;
    let ssr: f64 = residuals.iter().map(|e| e * e).sum();
    let tss: f64 = if centered {
        let mean = y.iter().sum::<f64>() / n;
        y.iter().map(|v| (v - mean) * (v - mean)).sum()
    } else {
        y.iter().map(|v| v * v).sum()
    };
    if tss == 0.0 {
        return if ssr == 0.0 { 1.0 } else { 0.0 };
    }
    1.0 - ssr / tss
}

fn has_intercept_column(regressors: &[&[f64]]) -> bool {
    regressors
        .iter()
        .any(|col| !col.is_empty() && col.iter().all(|&v| v == col[0]) && col[0] != 0.0)
}

/// Ordinary least squares of `y` on the given regressor columns.
pub fn ols(y: &[f64], regressors: &[&[f64]], names: &[&str]) -> Result<RegressionResult> {
    check_shapes(y, regressors)?;
    let n = y.len();
    let k = regressors.len();
    let x = build_matrix(n, regressors);
    let yv = DVector::from_column_slice(y);

    let gram = x.transpose() * &x;
    if condition_of_gram(&gram) > MAX_GRAM_CONDITION {
        return Err(Error::IdentificationFailure);
    }
    let xty = x.transpose() * &yv;
    let gram_inv = gram
        .try_inverse()
        .ok_or(Error::IdentificationFailure)?;
    let beta = &gram_inv * xty;

    let residuals = &yv - &x * &beta;
    let sigma2 = residuals.iter().map(|e| e * e).sum::<f64>() / (n - k) as f64;
    let stderrs: Vec<f64> = (0..k).map(|j| (sigma2 * gram_inv[(j, j)]).sqrt()).collect();

    Ok(RegressionResult {
        names: names.iter().map(|s| s.to_string()).collect(),
        coefficients: beta.iter().copied().collect(),
        stderrs,
        r2: r_squared(y, &residuals, has_intercept_column(regressors)),
        n,
    })
}

/// Just-identified two-stage least squares: one instrument column per
/// regressor column.
pub fn iv_2sls(
    y: &[f64],
    regressors: &[&[f64]],
    instruments: &[&[f64]],
    names: &[&str],
) -> Result<RegressionResult> {
    check_shapes(y, regressors)?;
    if instruments.len() != regressors.len() {
        return Err(Error::Domain(
            "just-identified IV needs one instrument per regressor".into(),
        ));
    }
    let n = y.len();
    let k = regressors.len();
    if instruments.iter().any(|z| z.len() != n) {
        return Err(Error::Domain(
            "instrument series must match the outcome length".into(),
        ));
    }
    let x = build_matrix(n, regressors);
    let z = build_matrix(n, instruments);
    let yv = DVector::from_column_slice(y);

    let ztx = z.transpose() * &x;
    let svd = ztx.clone().svd(false, false);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if smin <= 0.0 || smax / smin > MAX_GRAM_CONDITION.sqrt() {
        return Err(Error::IdentificationFailure);
    }
    let ztx_inv = ztx.try_inverse().ok_or(Error::IdentificationFailure)?;
    let beta = &ztx_inv * (z.transpose() * &yv);

    let residuals = &yv - &x * &beta;
    let sigma2 = residuals.iter().map(|e| e * e).sum::<f64>() / (n - k) as f64;
    let ztz = z.transpose() * &z;
    let cov = &ztx_inv * ztz * ztx_inv.transpose() * sigma2;
    let stderrs: Vec<f64> = (0..k).map(|j| cov[(j, j)].max(0.0).sqrt()).collect();

    Ok(RegressionResult {
        names: names.iter().map(|s| s.to_string()).collect(),
        coefficients: beta.iter().copied().collect(),
        stderrs,
        r2: r_squared(y, &residuals, has_intercept_column(regressors)),
        n,
    })
}

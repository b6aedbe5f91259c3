//! Scalar predict/update filter for a noisily observed AR(1) state.

/// Filtered mean, variance and the gain that produced them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KalmanState {
    pub estimate: f64,
    /// Posterior estimate variance (>= 0).
    pub variance: f64,
    /// Gain of the most recent update, in [0, 1] for unit loading.
    pub gain: f64,
}

impl KalmanState {
    /// Start from a direct observation under a flat prior.
    pub fn from_observation(y: f64, sigma_obs: f64) -> Self {
        KalmanState {
            estimate: y,
            variance: sigma_obs * sigma_obs,
            gain: 1.0,
        }
    }
}

/// One predict/update cycle for the state `x_{t+1} = lambda*x_t + eps` with
/// observation `y = x + nu`, `nu ~ N(0, sigma_obs^2)`.
///
/// Prediction: mean `lambda*estimate`, variance `lambda^2*variance +
/// sigma_eps^2`. Update: `gain = predicted_var / (predicted_var +
/// sigma_obs^2)`; the degenerate all-zero case trusts the observation.
pub fn kalman_step(
    ks: &KalmanState,
    lambda: f64,
    sigma_eps: f64,
    sigma_obs: f64,
    y: f64,
) -> KalmanState {
    debug_assert!(sigma_obs >= 0.0 && sigma_eps >= 0.0 && ks.variance >= 0.0);
    let pred_mean = lambda * ks.estimate;
    let pred_var = lambda * lambda * ks.variance + sigma_eps * sigma_eps;
    let denom = pred_var + sigma_obs * sigma_obs;
    let gain = if denom > 0.0 { pred_var / denom } else { 1.0 };
    KalmanState {
        estimate: (1.0 - gain) * pred_mean + gain * y,
        variance: (1.0 - gain) * pred_var,
        gain,
    }
}

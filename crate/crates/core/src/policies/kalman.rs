//! Forecast-optimal policy for the linear state-space population.
//!
//! The assistant tracks the latent state with a scalar Kalman filter and
//! publishes the forecast that makes the conditional mean of the next
//! observation equal to itself:
//!
//! ```text
//! A^0     = γ(1−β)⁻¹ E(X^0)
//! A^{t+1} = A^t + γ(1−β)⁻¹ Q_t (Y^t − A^t),   Q_t = γΣ / (γ²Σ + var(E_Y))
//! ```
//!
//! With noiseless observations `γQ_t = 1` and the policy is exactly
//! Expodamp with `α = (1−β)⁻¹`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KalmanPolicyState {
    pub beta: f64,
    pub gamma: f64,
    pub var_ex: f64,
    pub var_ey: f64,
    /// Predicted latent mean `X̂^{t|t−1}`.
    pub x_mean: f64,
    /// Predicted latent variance `Σ_X^{t|t−1}`.
    pub x_var: f64,
}

impl KalmanPolicyState {
    /// `(1−β)⁻¹`, the Expodamp gain this policy reduces to.
    pub fn feedback_gain(&self) -> f64 {
        1.0 / (1.0 - self.beta)
    }

    /// Forecast implied by the current latent estimate.
    pub fn implied_forecast(&self) -> f64 {
        self.gamma * self.feedback_gain() * self.x_mean
    }
}

/// Builds the filter and returns it with the first forecast `A^0`.
pub fn kalman_init(
    beta: f64,
    gamma: f64,
    var_ex: f64,
    var_ey: f64,
    x0_mean: f64,
    x0_var: f64,
) -> Result<(KalmanPolicyState, f64)> {
    if beta == 1.0 {
        return Err(Error::InvalidParameter(
            "beta = 1: the forecast has no fixed point".into(),
        ));
    }
    if gamma == 0.0 {
        return Err(Error::InvalidParameter("gamma must be nonzero".into()));
    }
    if var_ex < 0.0 || var_ey < 0.0 || x0_var < 0.0 {
        return Err(Error::InvalidParameter("variances must be nonnegative".into()));
    }
    let state = KalmanPolicyState {
        beta,
        gamma,
        var_ex,
        var_ey,
        x_mean: x0_mean,
        x_var: x0_var,
    };
    let a0 = state.implied_forecast();
    Ok((state, a0))
}

/// One filter update on `(A^t, Y^t)`, returning `A^{t+1}`.
pub fn kalman_step(state: &mut KalmanPolicyState, a_prev: f64, y_prev: f64) -> Result<f64> {
    let KalmanPolicyState {
        beta, gamma, var_ex, var_ey, ..
    } = *state;
    let predicted = gamma * gamma * state.x_var;
    let innovation_var = predicted + var_ey;
    if innovation_var == 0.0 || !innovation_var.is_finite() {
        return Err(Error::DegenerateGain);
    }
    let q = gamma * state.x_var / innovation_var;
    // γQ, computed so that it is exactly 1 when var_ey = 0
    let gamma_q = predicted / innovation_var;

    state.x_mean += q * (y_prev - gamma * state.x_mean - beta * a_prev);
    state.x_var = ((1.0 - gamma_q) * state.x_var).max(0.0) + var_ex;

    let alpha = state.feedback_gain();
    Ok(a_prev + (gamma_q * alpha) * (y_prev - a_prev))
}

/// Independent filters, one per forecast component.
#[derive(Clone, Debug, PartialEq)]
pub struct KalmanPolicy {
    filters: Vec<KalmanPolicyState>,
    forecast: Vec<f64>,
}

impl KalmanPolicy {
    pub fn new(
        dim: usize,
        beta: f64,
        gamma: f64,
        var_ex: f64,
        var_ey: f64,
        x0_mean: f64,
        x0_var: f64,
    ) -> Result<Self> {
        let (state, a0) = kalman_init(beta, gamma, var_ex, var_ey, x0_mean, x0_var)?;
        Ok(Self {
            filters: vec![state; dim],
            forecast: vec![a0; dim],
        })
    }

    pub fn forecast(&self) -> &[f64] {
        &self.forecast
    }

    pub fn filters(&self) -> &[KalmanPolicyState] {
        &self.filters
    }

    pub fn step(&mut self, y_prev: &[f64]) -> Result<Vec<f64>> {
        if y_prev.len() != self.forecast.len() {
            return Err(Error::Shape {
                expected: self.forecast.len(),
                got: y_prev.len(),
            });
        }
        for ((filter, a), y) in self.filters.iter_mut().zip(self.forecast.iter_mut()).zip(y_prev) {
            *a = kalman_step(filter, *a, *y)?;
        }
        Ok(self.forecast.clone())
    }
}

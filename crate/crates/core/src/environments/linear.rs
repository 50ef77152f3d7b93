use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::stream;

/// Parameters of the linear state-space population
///
/// ```text
/// X^t = X^{t-1} + E_X^t
/// Y^t = β A^t + γ X^t + E_Y^t
/// ```
///
/// with independent Gaussian noise. Vector-valued runs use one independent
/// latent state per component.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearParams {
    pub beta: f64,
    pub gamma: f64,
    pub var_ex: f64,
    pub var_ey: f64,
    pub x0_mean: f64,
    pub x0_var: f64,
}

impl LinearParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("beta", self.beta),
            ("gamma", self.gamma),
            ("var_ex", self.var_ex),
            ("var_ey", self.var_ey),
            ("x0_mean", self.x0_mean),
            ("x0_var", self.x0_var),
        ] {
            if !v.is_finite() {
                return Err(Error::config(format!("linear.{name}"), "must be finite"));
            }
        }
        for (name, v) in [
            ("var_ex", self.var_ex),
            ("var_ey", self.var_ey),
            ("x0_var", self.x0_var),
        ] {
            if v < 0.0 {
                return Err(Error::config(format!("linear.{name}"), "must be nonnegative"));
            }
        }
        Ok(())
    }

    /// Self-fulfilling forecast `γ(1−β)⁻¹x` of the noiseless map `a ↦ βa + γx`.
    pub fn fixed_point(&self, x: f64) -> Result<f64> {
        if self.beta == 1.0 {
            return Err(Error::InvalidParameter(
                "beta = 1 has no fixed point".into(),
            ));
        }
        Ok(self.gamma / (1.0 - self.beta) * x)
    }
}

/// Seeded simulation of the linear aggregate population.
#[derive(Clone, Debug)]
pub struct LinearAggregateEnv {
    params: LinearParams,
    x: Vec<f64>,
    started: bool,
    state_rng: ChaCha8Rng,
    obs_rng: ChaCha8Rng,
}

impl LinearAggregateEnv {
    /// Draws `X^0` per component from `N(x0_mean, x0_var)`.
    pub fn new(params: LinearParams, dim: usize, seed: u64) -> Result<Self> {
        params.validate()?;
        if dim == 0 {
            return Err(Error::config("linear.dim", "must be at least 1"));
        }
        let mut init_rng = ChaCha8Rng::seed_from_u64(stream(seed, 0));
        let x = (0..dim)
            .map(|_| params.x0_mean + gaussian(&mut init_rng, params.x0_var))
            .collect();
        Ok(Self {
            params,
            x,
            started: false,
            state_rng: ChaCha8Rng::seed_from_u64(stream(seed, 1)),
            obs_rng: ChaCha8Rng::seed_from_u64(stream(seed, 2)),
        })
    }

    /// Starts from a given latent state instead of a random draw.
    pub fn with_state(params: LinearParams, x: Vec<f64>, seed: u64) -> Result<Self> {
        let mut env = Self::new(params, x.len().max(1), seed)?;
        if x.is_empty() {
            return Err(Error::config("linear.dim", "must be at least 1"));
        }
        env.x = x;
        Ok(env)
    }

    pub fn params(&self) -> &LinearParams {
        &self.params
    }

    /// Latent state used by the most recent stage.
    pub fn state(&self) -> &[f64] {
        &self.x
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    /// Advances the latent state (from the second stage on) and returns the
    /// noisy response to forecast `a`.
    pub fn step(&mut self, a: &[f64]) -> Result<Vec<f64>> {
        if a.len() != self.x.len() {
            return Err(Error::Shape {
                expected: self.x.len(),
                got: a.len(),
            });
        }
        if self.started {
            for x in &mut self.x {
                *x += gaussian(&mut self.state_rng, self.params.var_ex);
            }
        }
        self.started = true;
        let LinearParams { beta, gamma, .. } = self.params;
        Ok(a.iter()
            .zip(&self.x)
            .map(|(a, x)| beta * a + gamma * x + gaussian(&mut self.obs_rng, self.params.var_ey))
            .collect())
    }

    /// Conditional mean `βa + γX^t` of the current stage's observation.
    pub fn conditional_mean(&self, a: &[f64]) -> Vec<f64> {
        a.iter()
            .zip(&self.x)
            .map(|(a, x)| self.params.beta * a + self.params.gamma * x)
            .collect()
    }
}

/// Scalar step of a one-dimensional environment.
pub fn linear_step(env: &mut LinearAggregateEnv, a: f64) -> Result<f64> {
    Ok(env.step(&[a])?[0])
}

fn gaussian(rng: &mut ChaCha8Rng, variance: f64) -> f64 {
    if variance == 0.0 {
        return 0.0;
    }
    Normal::new(0.0, variance.sqrt())
        .expect("variance validated nonnegative")
        .sample(rng)
}

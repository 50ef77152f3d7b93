//! The Kalman policy against a batch Gaussian posterior computed from
//! scratch: condition the prior of `X^t` on all past `z^s = y^s − βa^s`.

use crowdcast::environments::{LinearAggregateEnv, LinearParams};
use crowdcast::policies::KalmanPolicy;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Mean and variance of `X^t` given `z^0..z^{t−1}`.
fn batch_posterior(p: &LinearParams, z: &[f64]) -> (f64, f64) {
    let t = z.len();
    let cov_x = |i: usize, j: usize| p.x0_var + i.min(j) as f64 * p.var_ex;
    if t == 0 {
        return (p.x0_mean, cov_x(0, 0));
    }
    let szz = DMatrix::from_fn(t, t, |i, j| {
        p.gamma * p.gamma * cov_x(i, j) + if i == j { p.var_ey } else { 0.0 }
    });
    let sxz = DVector::from_fn(t, |j, _| p.gamma * cov_x(t, j));
    let resid = DVector::from_fn(t, |j, _| z[j] - p.gamma * p.x0_mean);
    let chol = szz.cholesky().expect("positive definite");
    let w = chol.solve(&sxz);
    (p.x0_mean + w.dot(&resid), cov_x(t, t) - w.dot(&sxz))
}

fn expected_loss(p: &LinearParams, mean: f64, var: f64, a: f64) -> f64 {
    ((1.0 - p.beta) * a - p.gamma * mean).powi(2) + p.gamma * p.gamma * var + p.var_ey
}

#[test]
fn kalman_forecast_minimizes_expected_squared_error() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for history in 0..30 {
        let p = LinearParams {
            beta: rng.random_range(-1.0..0.8),
            gamma: rng.random_range(0.2..1.5),
            var_ex: rng.random_range(0.001..0.05),
            var_ey: rng.random_range(0.005..0.2),
            x0_mean: rng.random_range(0.0..1.0),
            x0_var: rng.random_range(0.001..0.1),
        };
        let mut env = LinearAggregateEnv::new(p.clone(), 1, history).unwrap();
        let mut policy = KalmanPolicy::new(1, p.beta, p.gamma, p.var_ex, p.var_ey, p.x0_mean, p.x0_var).unwrap();
        let mut z = Vec::new();
        for _ in 0..25 {
            let a = policy.forecast()[0];
            let (mean, var) = batch_posterior(&p, &z);
            let optimum = p.gamma * mean / (1.0 - p.beta);
            assert!((a - optimum).abs() <= 1e-9 * optimum.abs().max(1.0), "{a} vs {optimum}");
            let best = expected_loss(&p, mean, var, a);
            for k in 0..21 {
                let alt = a + (k as f64 - 10.0) * 0.1;
                assert!(best <= expected_loss(&p, mean, var, alt) + 1e-9);
            }
            let y = env.step(&[a]).unwrap()[0];
            z.push(y - p.beta * a);
            policy.step(&[y]).unwrap();
        }
    }
}

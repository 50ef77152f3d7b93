//! Noiseless linear population under Expodamp, solved in closed form.

/// `Y^t` for `t = 0..stages` when `β = 1 − γ`, the latent state is constant
/// at `x` and Expodamp starts from `a0` with gain `alpha`:
///
/// ```text
/// Y^t = x + (1 − γ)(a0 − x)(1 − αγ)^t
/// ```
pub fn closed_form_trajectory(gamma: f64, alpha: f64, a0: f64, x: f64, stages: usize) -> Vec<f64> {
    let ratio = 1.0 - alpha * gamma;
    let scale = (1.0 - gamma) * (a0 - x);
    let mut factor = 1.0;
    (0..stages)
        .map(|_| {
            let y = x + scale * factor;
            factor *= ratio;
            y
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn starts_at_response_to_a0_and_decays() {
        let ys = closed_form_trajectory(0.5, 0.4, 0.0, 1.0, 4);
        assert_eq!(ys[0], 0.5);
        assert!((ys[1] - (1.0 - 0.5 * 0.8)).abs() < 1e-15);
        assert!(ys.windows(2).all(|w| (w[1] - 1.0).abs() < (w[0] - 1.0).abs()));
    }
}

use crate::error::{Error, Result};
use crate::types::PointForecast;

/// Exponential smoothing used as a feedback controller on the published
/// forecast: `A^t = A^{t−1} + α(Y^{t−1} − A^{t−1})`.
///
/// `α` is a controller gain, not a fitted smoothing constant. For
/// `α ∈ [0, 1]` the update is a convex combination, so forecasts stay in
/// `[0, 1]^k` whenever observations do.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpodampState {
    a: PointForecast,
    alpha: f64,
}

impl ExpodampState {
    pub fn new(initial: PointForecast, alpha: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!("alpha {alpha} is not finite")));
        }
        Ok(Self { a: initial, alpha })
    }

    pub fn forecast(&self) -> &PointForecast {
        &self.a
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn step(&mut self, y_prev: &[f64]) -> Result<PointForecast> {
        if y_prev.len() != self.a.len() {
            return Err(Error::Shape {
                expected: self.a.len(),
                got: y_prev.len(),
            });
        }
        let next = self
            .a
            .values()
            .iter()
            .zip(y_prev)
            .map(|(a, y)| a + self.alpha * (y - a))
            .collect();
        self.a = PointForecast::new(next)?;
        Ok(self.a.clone())
    }
}

pub fn expodamp_step(state: &mut ExpodampState, y_prev: &[f64]) -> Result<PointForecast> {
    state.step(y_prev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pf(v: &[f64]) -> PointForecast {
        PointForecast::new(v.to_vec()).unwrap()
    }

    #[test]
    fn half_step() {
        let mut s = ExpodampState::new(pf(&[0.5]), 0.5).unwrap();
        assert_eq!(s.step(&[1.0]).unwrap(), pf(&[0.75]));
    }

    #[test]
    fn zero_and_full_damping() {
        let mut frozen = ExpodampState::new(pf(&[0.2, 3.0]), 0.0).unwrap();
        assert_eq!(frozen.step(&[9.0, -1.0]).unwrap(), pf(&[0.2, 3.0]));
        let mut naive = ExpodampState::new(pf(&[0.2, 3.0]), 1.0).unwrap();
        assert_eq!(naive.step(&[9.0, -1.0]).unwrap(), pf(&[9.0, -1.0]));
    }

    #[test]
    fn shape_checked() {
        let mut s = ExpodampState::new(pf(&[0.0]), 0.5).unwrap();
        assert!(matches!(s.step(&[1.0, 2.0]), Err(Error::Shape { .. })));
        assert!(ExpodampState::new(pf(&[0.0]), f64::NAN).is_err());
    }

    proptest! {
        #[test]
        fn stays_in_unit_cube(a in prop::collection::vec(0.0f64..=1.0, 1..8),
                              ys in prop::collection::vec(prop::collection::vec(0.0f64..=1.0, 8), 1..20),
                              alpha in 0.0f64..=1.0) {
            let k = a.len();
            let mut s = ExpodampState::new(pf(&a), alpha).unwrap();
            for y in ys {
                let out = s.step(&y[..k]).unwrap();
                prop_assert!(out.check_fraction().is_ok());
            }
        }
    }
}

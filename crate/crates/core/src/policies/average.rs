use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::types::{DiscreteDistribution, JointProfile, PointForecast};

/// Running mean of all past observations, treating them as an i.i.d.
/// sample. The mean is only used once two observations exist; before that
/// the configured prior is published.
#[derive(Clone, Debug, PartialEq)]
pub struct AverageState {
    sum: Vec<f64>,
    count: usize,
    prior: PointForecast,
}

impl AverageState {
    pub fn new(prior: PointForecast) -> Self {
        Self {
            sum: vec![0.0; prior.len()],
            count: 0,
            prior,
        }
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn forecast(&self) -> PointForecast {
        if self.count < 2 {
            return self.prior.clone();
        }
        let n = self.count as f64;
        PointForecast::new(self.sum.iter().map(|s| s / n).collect()).expect("mean of finite values")
    }

    pub fn step(&mut self, y_prev: &[f64]) -> Result<PointForecast> {
        if y_prev.len() != self.sum.len() {
            return Err(Error::Shape {
                expected: self.sum.len(),
                got: y_prev.len(),
            });
        }
        for (s, y) in self.sum.iter_mut().zip(y_prev) {
            *s += y;
        }
        self.count += 1;
        Ok(self.forecast())
    }
}

pub fn average_step(state: &mut AverageState, y_prev: &[f64]) -> Result<PointForecast> {
    state.step(y_prev)
}

/// The same baseline for fully observed profiles: the empirical distribution
/// of past outcomes.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalState {
    tally: BTreeMap<JointProfile, usize>,
    count: usize,
    prior: DiscreteDistribution<JointProfile>,
}

impl EmpiricalState {
    pub fn new(prior: DiscreteDistribution<JointProfile>) -> Self {
        Self {
            tally: BTreeMap::new(),
            count: 0,
            prior,
        }
    }

    pub fn forecast(&self) -> DiscreteDistribution<JointProfile> {
        if self.count < 2 {
            return self.prior.clone();
        }
        DiscreteDistribution::from_counts(&self.tally).expect("nonempty tally")
    }

    pub fn step(&mut self, c: &JointProfile) -> DiscreteDistribution<JointProfile> {
        *self.tally.entry(c.clone()).or_insert(0) += 1;
        self.count += 1;
        self.forecast()
    }
}

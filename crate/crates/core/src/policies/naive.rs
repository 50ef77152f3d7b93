use crate::error::{Error, Result};
use crate::types::{DiscreteDistribution, Forecast, Observation, PointForecast};

/// Yesterday's outcome as today's forecast: the observation itself for
/// aggregate settings, a Dirac on it for fully observed profiles.
pub fn naive_step(y_prev: Option<&Observation>) -> Result<Forecast> {
    match y_prev {
        None => Err(Error::NeedsInitialForecast),
        Some(Observation::Vector(v)) => Ok(Forecast::Point(PointForecast::new(v.clone())?)),
        Some(Observation::Profile(c)) => Ok(Forecast::Distribution(DiscreteDistribution::dirac(c.clone()))),
    }
}

//! Forecasting for populations that react to the forecast.
//!
//! The crate provides the environments (a linear state-space aggregate, a
//! nonatomic population choosing between two options, finite congestion
//! games with complete or private information), forecasting policies that
//! observe those environments, equilibrium analysis tools and a seeded
//! simulation engine.

pub mod analysis;
pub mod engine;
pub mod environments;
pub mod error;
pub mod loss;
pub mod policies;
pub mod rng;
pub mod types;

pub use error::{Error, Result};
pub use types::{
    Covariate, DiscreteDistribution, Forecast, JointProfile, Observation, PointForecast, StageRecord,
    Trajectory,
};

//! Simulated user populations that turn a published forecast into an outcome.

pub mod congestion;
pub mod linear;
pub mod nonatomic;

pub use congestion::{
    best_response, play_profile, product_distribution, BayesianCongestionGame,
    FiniteCongestionGame, PlayerType, StrategyProfile, UtilityTable, PROFILE_LIMIT,
    UTILITY_TIE_EPS,
};
pub use linear::{linear_step, LinearAggregateEnv, LinearParams};
pub use nonatomic::{
    nonatomic_response_closed, nonatomic_response_numeric, NonatomicPopulation, DEFAULT_GRID,
};

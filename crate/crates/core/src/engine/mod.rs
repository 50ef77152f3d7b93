//! Configuration and the simulation loop.

pub mod closed_form;
pub mod config;
pub mod monte_carlo;
pub mod run;

pub use closed_form::closed_form_trajectory;
pub use config::{
    losses_for, GameModel, GameSection, LinearSection, NonatomicSection, PolicyName, PolicySection,
    ResponseMethod, Setting, SimConfig, SimSection, TypeSection,
};
pub use monte_carlo::{
    monte_carlo, monte_carlo_with, self_fulfilling_candidates, LossSummary, MonteCarloReport,
    RunSummary, DEFAULT_SF_TOLERANCE,
};
pub use run::{run_dynamic, simulate, RunOutput};

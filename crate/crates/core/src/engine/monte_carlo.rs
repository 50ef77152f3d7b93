//! Independent seeded repetitions of one configuration.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{bayesian_candidate_set, candidate_set, is_self_fulfilling};
use crate::engine::config::{GameModel, Setting, SimConfig};
use crate::engine::run::simulate;
use crate::environments::play_profile;
use crate::error::{Error, Result};
use crate::loss::tv_distance;
use crate::rng::stream;
use crate::types::{DiscreteDistribution, Forecast, JointProfile};

/// Total-variation radius within which a final forecast counts as
/// self-fulfilling when no other tolerance is given.
pub const DEFAULT_SF_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LossSummary {
    pub mean: f64,
    /// Unbiased sample variance across runs; zero for a single run.
    pub variance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub run: usize,
    pub seed: u64,
    /// Per-stage average of each logged loss.
    pub mean_losses: BTreeMap<String, f64>,
    /// TV distance from the final forecast to the nearest self-fulfilling
    /// candidate (finite games with at least one such candidate).
    pub sf_distance: Option<f64>,
    pub converged: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloReport {
    pub runs: Vec<RunSummary>,
    pub losses: BTreeMap<String, LossSummary>,
    /// Fraction of runs whose final forecast is within the tolerance of a
    /// self-fulfilling candidate.
    pub self_fulfilling_fraction: Option<f64>,
    pub sf_tolerance: f64,
}

pub fn monte_carlo(config: &SimConfig, n_runs: usize) -> Result<MonteCarloReport> {
    monte_carlo_with(config, n_runs, DEFAULT_SF_TOLERANCE)
}

/// Self-fulfilling members of the game's candidate set.
pub fn self_fulfilling_candidates(model: &GameModel, tol: f64) -> Result<Vec<DiscreteDistribution<JointProfile>>> {
    let mut out = Vec::new();
    match model {
        GameModel::Complete(g) => {
            for c in candidate_set(g)?.candidates {
                if is_self_fulfilling(|a| DiscreteDistribution::dirac(play_profile(g, a)), &c, tol)? {
                    out.push(c);
                }
            }
        }
        GameModel::Bayesian(g) => {
            for c in bayesian_candidate_set(g)?.candidates {
                if is_self_fulfilling(|a| g.response_distribution(a), &c, tol)? {
                    out.push(c);
                }
            }
        }
    }
    Ok(out)
}

/// Runs `n_runs` copies with seeds `stream(seed, run)` in parallel; results
/// are merged in run order, so the report does not depend on scheduling.
pub fn monte_carlo_with(config: &SimConfig, n_runs: usize, sf_tol: f64) -> Result<MonteCarloReport> {
    if n_runs == 0 {
        return Err(Error::config("runs", "must be at least 1"));
    }
    config.validate()?;
    let targets = match (config.sim.setting, &config.game) {
        (Setting::FiniteGame, Some(game)) => Some(self_fulfilling_candidates(&game.model()?, DEFAULT_SF_TOLERANCE)?),
        _ => None,
    };
    let runs = (0..n_runs)
        .into_par_iter()
        .map(|run| {
            let seed = stream(config.sim.seed, run as u64);
            let out = simulate(&config.clone().with_seed(seed))?;
            let mut mean_losses = BTreeMap::new();
            for name in config.losses()? {
                let series = out.trajectory.loss_series(&name);
                mean_losses.insert(name, series.iter().sum::<f64>() / series.len() as f64);
            }
            let sf_distance = match (&targets, out.trajectory.final_forecast()) {
                (Some(targets), Some(Forecast::Distribution(a))) if !targets.is_empty() => Some(
                    targets
                        .iter()
                        .map(|c| tv_distance(a, c))
                        .collect::<Result<Vec<_>>>()?
                        .into_iter()
                        .fold(f64::INFINITY, f64::min),
                ),
                _ => None,
            };
            Ok(RunSummary {
                run,
                seed,
                mean_losses,
                sf_distance,
                converged: out.converged,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut losses = BTreeMap::new();
    for name in config.losses()? {
        let values: Vec<f64> = runs.iter().map(|r| r.mean_losses[&name]).collect();
        losses.insert(name, summarize(&values));
    }
    let self_fulfilling_fraction = targets.map(|_| {
        runs.iter().filter(|r| r.sf_distance.is_some_and(|d| d <= sf_tol)).count() as f64 / n_runs as f64
    });
    Ok(MonteCarloReport {
        runs,
        losses,
        self_fulfilling_fraction,
        sf_tolerance: sf_tol,
    })
}

fn summarize(values: &[f64]) -> LossSummary {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let variance = if values.len() > 1 {
        values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    LossSummary { mean, variance }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_statistics() {
        let s = summarize(&[1.0, 2.0, 3.0]);
        assert_eq!(s.mean, 2.0);
        assert_eq!(s.variance, 1.0);
        assert_eq!(summarize(&[4.0]).variance, 0.0);
    }
}

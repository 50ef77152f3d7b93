//! The repeated forecast–response loop.
//!
//! Every stage announces the forecast before the environment is queried, and
//! the policy only sees the stage's outcome after losses are recorded.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analysis::{bayesian_candidate_set, candidate_set, is_bne, is_nash};
use crate::engine::config::{GameModel, PolicyName, ResponseMethod, Setting, SimConfig};
use crate::environments::{
    nonatomic_response_closed, nonatomic_response_numeric, play_profile, LinearAggregateEnv,
    NonatomicPopulation,
};
use crate::error::{Error, Result};
use crate::loss::{point_pred_loss, tv_distance};
use crate::policies::{
    naive_step, AverageState, EmpiricalState, ExpodampState, KalmanPolicy, PartpredEvent,
    PartpredState, UpdateRule,
};
use crate::rng::stream;
use crate::types::{
    DiscreteDistribution, Forecast, JointProfile, Observation, PointForecast, StageRecord,
    Trajectory,
};

/// Group length used by Partpred when the config leaves `r` unset.
pub const DEFAULT_GROUP_LENGTH_COMPLETE: usize = 1;
pub const DEFAULT_GROUP_LENGTH_BAYESIAN: usize = 100;

/// Covariate used by the single-context simulations.
const W: u32 = 0;

enum PointPolicy {
    Expodamp(ExpodampState),
    Naive(PointForecast),
    Average(AverageState),
    Kalman(KalmanPolicy),
    Fixed(PointForecast),
}

impl PointPolicy {
    fn forecast(&self) -> Result<PointForecast> {
        match self {
            PointPolicy::Expodamp(s) => Ok(s.forecast().clone()),
            PointPolicy::Naive(a) | PointPolicy::Fixed(a) => Ok(a.clone()),
            PointPolicy::Average(s) => Ok(s.forecast()),
            PointPolicy::Kalman(k) => PointForecast::new(k.forecast().to_vec()),
        }
    }

    fn observe(&mut self, y: &[f64]) -> Result<()> {
        match self {
            PointPolicy::Expodamp(s) => {
                s.step(y)?;
            }
            PointPolicy::Naive(a) => {
                let next = naive_step(Some(&Observation::Vector(y.to_vec())))?;
                *a = next.as_point().expect("vector observation").clone();
            }
            PointPolicy::Average(s) => {
                s.step(y)?;
            }
            PointPolicy::Kalman(k) => {
                k.step(y)?;
            }
            PointPolicy::Fixed(_) => {}
        }
        Ok(())
    }
}

enum ProfilePolicy {
    Naive(DiscreteDistribution<JointProfile>),
    Average(EmpiricalState),
    Partpred(Box<PartpredState>),
    Fixed(DiscreteDistribution<JointProfile>),
}

impl ProfilePolicy {
    fn announce(&mut self) -> Result<DiscreteDistribution<JointProfile>> {
        match self {
            ProfilePolicy::Naive(a) | ProfilePolicy::Fixed(a) => Ok(a.clone()),
            ProfilePolicy::Average(s) => Ok(s.forecast()),
            ProfilePolicy::Partpred(p) => p.announce(W),
        }
    }

    fn observe(&mut self, c: &JointProfile) -> Result<()> {
        match self {
            ProfilePolicy::Naive(a) => {
                let next = naive_step(Some(&Observation::Profile(c.clone())))?;
                *a = next.as_distribution().expect("profile observation").clone();
            }
            ProfilePolicy::Average(s) => {
                s.step(c);
            }
            ProfilePolicy::Partpred(p) => p.observe(W, c)?,
            ProfilePolicy::Fixed(_) => {}
        }
        Ok(())
    }
}

/// Extra state exposed by a run besides its trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct RunOutput {
    pub trajectory: Trajectory,
    /// Group-end events of a Partpred run.
    pub partpred_events: Vec<PartpredEvent>,
    /// Whether a Partpred run had converged by the last stage.
    pub converged: Option<bool>,
}

/// Runs the configured simulation and returns its trajectory.
pub fn run_dynamic(config: &SimConfig) -> Result<Trajectory> {
    simulate(config).map(|out| out.trajectory)
}

/// Runs the configured simulation, keeping policy diagnostics.
pub fn simulate(config: &SimConfig) -> Result<RunOutput> {
    config.validate()?;
    let losses = config.losses()?;
    let hash = config.hash();
    match config.sim.setting {
        Setting::Linear | Setting::Nonatomic => run_aggregate(config, &losses, hash),
        Setting::FiniteGame => run_game(config, &losses, hash),
    }
}

fn point_policy(config: &SimConfig) -> Result<PointPolicy> {
    let initial = config.initial_point()?;
    Ok(match config.policy.name {
        PolicyName::Expodamp => {
            let alpha = config.policy.alpha.ok_or_else(|| Error::config("policy.alpha", "required by expodamp"))?;
            PointPolicy::Expodamp(ExpodampState::new(initial, alpha)?)
        }
        PolicyName::Naive => PointPolicy::Naive(initial),
        PolicyName::Average => PointPolicy::Average(AverageState::new(initial)),
        PolicyName::Fixed => PointPolicy::Fixed(initial),
        PolicyName::Kalman => {
            let p = config
                .linear
                .as_ref()
                .ok_or_else(|| Error::config("linear", "required by kalman"))?
                .params();
            PointPolicy::Kalman(KalmanPolicy::new(
                config.dim(),
                p.beta,
                p.gamma,
                p.var_ex,
                p.var_ey,
                p.x0_mean,
                p.x0_var,
            )?)
        }
        PolicyName::Partpred => {
            return Err(Error::config("policy.name", "partpred needs a finite game"));
        }
    })
}

enum AggregateEnv {
    Linear(Box<LinearAggregateEnv>),
    Nonatomic(NonatomicPopulation, ResponseMethod),
}

impl AggregateEnv {
    /// Observation and the conditional mean it is scored against.
    fn respond(&mut self, a: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        match self {
            AggregateEnv::Linear(env) => {
                let y = env.step(a)?;
                Ok((y, env.conditional_mean(a)))
            }
            AggregateEnv::Nonatomic(pop, method) => {
                let mean = a.iter().sum::<f64>() / a.len() as f64;
                let y = match method {
                    ResponseMethod::Closed => nonatomic_response_closed(pop, mean),
                    ResponseMethod::Numeric => nonatomic_response_numeric(pop, mean),
                };
                Ok((vec![y], vec![y]))
            }
        }
    }
}

fn run_aggregate(config: &SimConfig, losses: &[String], config_hash: String) -> Result<RunOutput> {
    let mut env = match config.sim.setting {
        Setting::Linear => {
            let linear = config.linear.as_ref().expect("validated");
            AggregateEnv::Linear(Box::new(LinearAggregateEnv::new(
                linear.params(),
                linear.dim,
                stream(config.sim.seed, 1),
            )?))
        }
        _ => {
            let section = config.nonatomic.as_ref().expect("validated");
            AggregateEnv::Nonatomic(section.population()?, section.response)
        }
    };
    let mut policy = point_policy(config)?;
    let mut records = Vec::with_capacity(config.sim.stages);
    for t in 0..config.sim.stages {
        let a = policy.forecast()?;
        let (y, mean) = env.respond(a.values())?;
        let mut stage_losses = BTreeMap::new();
        if losses.iter().any(|l| l == "point_pred") {
            stage_losses.insert("point_pred".to_string(), point_pred_loss(a.values(), &mean)?);
        }
        policy.observe(&y)?;
        records.push(StageRecord {
            t,
            w: W,
            a: Forecast::Point(a),
            y: Observation::Vector(y),
            losses: stage_losses,
        });
    }
    Ok(RunOutput {
        trajectory: Trajectory { records, config_hash },
        partpred_events: Vec::new(),
        converged: None,
    })
}

fn profile_policy(config: &SimConfig, model: &GameModel) -> Result<ProfilePolicy> {
    let initial = config.initial_profile(model.players(), model.slots())?;
    Ok(match config.policy.name {
        PolicyName::Naive => ProfilePolicy::Naive(initial),
        PolicyName::Average => ProfilePolicy::Average(EmpiricalState::new(initial)),
        PolicyName::Fixed => ProfilePolicy::Fixed(initial),
        PolicyName::Partpred => {
            let (set, default_rule, default_r) = match model {
                GameModel::Complete(g) => (candidate_set(g)?, UpdateRule::Congestion, DEFAULT_GROUP_LENGTH_COMPLETE),
                GameModel::Bayesian(g) => (bayesian_candidate_set(g)?, UpdateRule::General, DEFAULT_GROUP_LENGTH_BAYESIAN),
            };
            ProfilePolicy::Partpred(Box::new(PartpredState::new(
                Arc::new(set.candidates),
                config.policy.r.unwrap_or(default_r),
                config.policy.update.unwrap_or(default_rule),
                stream(config.sim.seed, 2),
            )?))
        }
        other => {
            return Err(Error::config(
                "policy.name",
                format!("`{}` needs an aggregate setting", other.as_str()),
            ))
        }
    })
}

fn run_game(config: &SimConfig, losses: &[String], config_hash: String) -> Result<RunOutput> {
    let model = config.game.as_ref().expect("validated").model()?;
    let mut policy = profile_policy(config, &model)?;
    let mut rng = ChaCha8Rng::seed_from_u64(stream(config.sim.seed, 1));
    let want = |name: &str| losses.iter().any(|l| l == name);
    let mut records = Vec::with_capacity(config.sim.stages);
    for t in 0..config.sim.stages {
        let a = policy.announce()?;
        let (c, response, equilibrium) = match &model {
            GameModel::Complete(g) => {
                let c = play_profile(g, &a);
                let nash = want("nash") && is_nash(g, &c, false);
                (c.clone(), DiscreteDistribution::dirac(c), nash)
            }
            GameModel::Bayesian(g) => {
                let strategy = g.respond(&a);
                let c = g.sample(&strategy, &mut rng);
                let bne = want("nash") && is_bne(g, &strategy, false);
                (c, g.outcome_distribution(&strategy), bne)
            }
        };
        let mut stage_losses = BTreeMap::new();
        if want("pred") {
            stage_losses.insert("pred".to_string(), tv_distance(&a, &response)?);
        }
        if want("nash") {
            stage_losses.insert("nash".to_string(), if equilibrium { 0.0 } else { 1.0 });
        }
        policy.observe(&c)?;
        records.push(StageRecord {
            t,
            w: W,
            a: Forecast::Distribution(a),
            y: Observation::Profile(c),
            losses: stage_losses,
        });
    }
    let (partpred_events, converged) = match &policy {
        ProfilePolicy::Partpred(p) => (p.events().to_vec(), Some(p.converged(W))),
        _ => (Vec::new(), None),
    };
    Ok(RunOutput {
        trajectory: Trajectory { records, config_hash },
        partpred_events,
        converged,
    })
}

//! Run configuration. One section per module; unknown keys are rejected.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::environments::{
    BayesianCongestionGame, FiniteCongestionGame, LinearParams, NonatomicPopulation, PlayerType,
    UtilityTable,
};
use crate::error::{Error, Result};
use crate::policies::UpdateRule;
use crate::types::{DiscreteDistribution, JointProfile, PointForecast};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Setting {
    Linear,
    Nonatomic,
    FiniteGame,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolicyName {
    Expodamp,
    Naive,
    Average,
    Kalman,
    Partpred,
    Fixed,
}

impl PolicyName {
    pub const ALL: [&'static str; 6] = ["expodamp", "naive", "average", "kalman", "partpred", "fixed"];

    pub fn as_str(self) -> &'static str {
        match self {
            PolicyName::Expodamp => "expodamp",
            PolicyName::Naive => "naive",
            PolicyName::Average => "average",
            PolicyName::Kalman => "kalman",
            PolicyName::Partpred => "partpred",
            PolicyName::Fixed => "fixed",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSection {
    pub setting: Setting,
    pub stages: usize,
    #[serde(default)]
    pub seed: u64,
    /// Loss names to log; empty selects every loss defined for the setting.
    #[serde(default)]
    pub log_losses: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicySection {
    pub name: PolicyName,
    /// Expodamp gain.
    #[serde(default)]
    pub alpha: Option<f64>,
    /// Initial point forecast (aggregate settings).
    #[serde(default)]
    pub initial: Option<Vec<f64>>,
    /// Initial Dirac forecast (finite games).
    #[serde(default)]
    pub initial_profile: Option<Vec<usize>>,
    /// Partpred group length.
    #[serde(default)]
    pub r: Option<usize>,
    #[serde(default)]
    pub update: Option<UpdateRule>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearSection {
    pub beta: f64,
    pub gamma: f64,
    #[serde(default)]
    pub var_ex: f64,
    #[serde(default)]
    pub var_ey: f64,
    pub x0_mean: f64,
    #[serde(default)]
    pub x0_var: f64,
    #[serde(default = "one")]
    pub dim: usize,
}

fn one() -> usize {
    1
}

impl LinearSection {
    pub fn params(&self) -> LinearParams {
        LinearParams {
            beta: self.beta,
            gamma: self.gamma,
            var_ex: self.var_ex,
            var_ey: self.var_ey,
            x0_mean: self.x0_mean,
            x0_var: self.x0_var,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResponseMethod {
    #[default]
    Closed,
    Numeric,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NonatomicSection {
    pub phi: f64,
    pub chi: f64,
    pub delta: f64,
    pub x: f64,
    #[serde(default = "default_grid")]
    pub grid_n: usize,
    #[serde(default)]
    pub response: ResponseMethod,
}

fn default_grid() -> usize {
    crate::environments::DEFAULT_GRID
}

impl NonatomicSection {
    pub fn population(&self) -> Result<NonatomicPopulation> {
        let pop = NonatomicPopulation {
            phi: self.phi,
            chi: self.chi,
            delta: self.delta,
            x: self.x,
            grid_n: self.grid_n,
        };
        pop.validate()?;
        Ok(pop)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypeSection {
    pub prob: f64,
    pub utility: Vec<Vec<f64>>,
}

/// Either one shared `utility` table (complete information) or per-player
/// `types` with priors and tables (Bayesian). Tables are indexed
/// `[slot][count − 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameSection {
    pub players: usize,
    #[serde(default)]
    pub utility: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub types: Option<Vec<Vec<TypeSection>>>,
}

/// A congestion game as configured.
#[derive(Clone, Debug, PartialEq)]
pub enum GameModel {
    Complete(FiniteCongestionGame),
    Bayesian(BayesianCongestionGame),
}

impl GameModel {
    pub fn players(&self) -> usize {
        match self {
            GameModel::Complete(g) => g.players(),
            GameModel::Bayesian(g) => g.players(),
        }
    }

    pub fn slots(&self) -> usize {
        match self {
            GameModel::Complete(g) => g.slots(),
            GameModel::Bayesian(g) => g.slots(),
        }
    }
}

impl GameSection {
    pub fn from_game(game: &FiniteCongestionGame) -> Self {
        Self {
            players: game.players(),
            utility: Some(game.utility().rows().to_vec()),
            types: None,
        }
    }

    pub fn model(&self) -> Result<GameModel> {
        let wrap = |path: &str, e: Error| Error::config(path, e.to_string());
        match (&self.utility, &self.types) {
            (Some(utility), None) => {
                let table = UtilityTable::new(utility.clone()).map_err(|e| wrap("game.utility", e))?;
                FiniteCongestionGame::new(self.players, table)
                    .map(GameModel::Complete)
                    .map_err(|e| wrap("game.utility", e))
            }
            (None, Some(types)) => {
                if types.len() != self.players {
                    return Err(Error::config(
                        "game.types",
                        format!("{} type lists for {} players", types.len(), self.players),
                    ));
                }
                let types = types
                    .iter()
                    .enumerate()
                    .map(|(i, ts)| {
                        ts.iter()
                            .enumerate()
                            .map(|(t, ty)| {
                                Ok(PlayerType {
                                    prob: ty.prob,
                                    utility: UtilityTable::new(ty.utility.clone())
                                        .map_err(|e| wrap(&format!("game.types[{i}][{t}].utility"), e))?,
                                })
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                BayesianCongestionGame::new(types)
                    .map(GameModel::Bayesian)
                    .map_err(|e| wrap("game.types", e))
            }
            _ => Err(Error::config(
                "game",
                "set exactly one of `utility` (complete information) or `types` (Bayesian)",
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub sim: SimSection,
    pub policy: PolicySection,
    #[serde(default)]
    pub linear: Option<LinearSection>,
    #[serde(default)]
    pub nonatomic: Option<NonatomicSection>,
    #[serde(default)]
    pub game: Option<GameSection>,
}

/// Losses defined for each setting.
pub fn losses_for(setting: Setting) -> &'static [&'static str] {
    match setting {
        Setting::Linear | Setting::Nonatomic => &["point_pred"],
        Setting::FiniteGame => &["nash", "pred"],
    }
}

impl SimConfig {
    /// Stable identifier of the configuration.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        hex::encode(&Sha256::digest(json.as_bytes())[..8])
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.sim.seed = seed;
        self
    }

    /// Loss names to log, defaulted and checked against the setting.
    pub fn losses(&self) -> Result<Vec<String>> {
        let allowed = losses_for(self.sim.setting);
        if self.sim.log_losses.is_empty() {
            return Ok(allowed.iter().map(|s| s.to_string()).collect());
        }
        for name in &self.sim.log_losses {
            if !allowed.contains(&name.as_str()) {
                return Err(Error::config(
                    "sim.log_losses",
                    format!("`{name}` is not defined for this setting; valid: {}", allowed.join(", ")),
                ));
            }
        }
        let mut names = self.sim.log_losses.clone();
        names.sort();
        names.dedup();
        Ok(names)
    }

    /// Checks cross-section consistency. Parameter ranges are checked again
    /// when the environment and policy are built.
    pub fn validate(&self) -> Result<()> {
        if self.sim.stages == 0 {
            return Err(Error::config("sim.stages", "must be at least 1"));
        }
        self.losses()?;
        let policy = self.policy.name;
        let required = match self.sim.setting {
            Setting::Linear => ("linear", self.linear.is_some()),
            Setting::Nonatomic => ("nonatomic", self.nonatomic.is_some()),
            Setting::FiniteGame => ("game", self.game.is_some()),
        };
        if !required.1 {
            return Err(Error::config(required.0, "section required by sim.setting"));
        }
        let allowed: &[PolicyName] = match self.sim.setting {
            Setting::Linear => &[PolicyName::Expodamp, PolicyName::Naive, PolicyName::Average, PolicyName::Kalman, PolicyName::Fixed],
            Setting::Nonatomic => &[PolicyName::Expodamp, PolicyName::Naive, PolicyName::Average, PolicyName::Fixed],
            Setting::FiniteGame => &[PolicyName::Naive, PolicyName::Average, PolicyName::Partpred, PolicyName::Fixed],
        };
        if !allowed.contains(&policy) {
            let names: Vec<_> = allowed.iter().map(|p| p.as_str()).collect();
            return Err(Error::config(
                "policy.name",
                format!("`{}` does not apply to this setting; valid: {}", policy.as_str(), names.join(", ")),
            ));
        }
        if policy == PolicyName::Expodamp {
            match self.policy.alpha {
                Some(a) if a.is_finite() => {}
                Some(_) => return Err(Error::config("policy.alpha", "must be finite")),
                None => return Err(Error::config("policy.alpha", "required by expodamp")),
            }
        }
        if policy == PolicyName::Partpred && self.policy.r == Some(0) {
            return Err(Error::config("policy.r", "must be at least 1"));
        }
        if let Some(linear) = &self.linear {
            linear.params().validate()?;
            if linear.dim == 0 {
                return Err(Error::config("linear.dim", "must be at least 1"));
            }
        }
        if let Some(nonatomic) = &self.nonatomic {
            nonatomic.population()?;
        }
        if let Some(game) = &self.game {
            game.model()?;
        }
        Ok(())
    }

    /// Forecast dimension in the aggregate settings.
    pub fn dim(&self) -> usize {
        match self.sim.setting {
            Setting::Linear => self.linear.as_ref().map_or(1, |l| l.dim),
            _ => 1,
        }
    }

    pub(crate) fn initial_point(&self) -> Result<PointForecast> {
        let dim = self.dim();
        match &self.policy.initial {
            None => PointForecast::zeros(dim),
            Some(v) if v.len() == dim => {
                PointForecast::new(v.clone()).map_err(|e| Error::config("policy.initial", e.to_string()))
            }
            Some(v) => Err(Error::config(
                "policy.initial",
                format!("has {} entries, forecasts have {dim}", v.len()),
            )),
        }
    }

    pub(crate) fn initial_profile(&self, players: usize, slots: usize) -> Result<DiscreteDistribution<JointProfile>> {
        let actions = self.policy.initial_profile.clone().unwrap_or_else(|| vec![0; players]);
        if actions.len() != players {
            return Err(Error::config(
                "policy.initial_profile",
                format!("has {} entries for {players} players", actions.len()),
            ));
        }
        let profile = JointProfile::new(actions, slots)
            .map_err(|e| Error::config("policy.initial_profile", e.to_string()))?;
        Ok(DiscreteDistribution::dirac(profile))
    }
}
